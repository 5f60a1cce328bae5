use crate::error::{Error, Result};

use super::Scalar;

/// Continuous piecewise-linear function given by its values at strictly increasing breakpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinearFn<T> {
    breakpoints: Vec<T>,
    values: Vec<T>,
}

pub(crate) fn two<T: Scalar>() -> T {
    T::one() + T::one()
}

pub(crate) fn abs<T: Scalar>(x: &T) -> T {
    if *x < T::zero() {
        T::zero() - x.clone()
    } else {
        x.clone()
    }
}

pub(crate) fn max<T: Scalar>(a: T, b: T) -> T {
    if a >= b {
        a
    } else {
        b
    }
}

impl<T: Scalar> PiecewiseLinearFn<T> {
    pub fn new(breakpoints: Vec<T>, values: Vec<T>) -> Result<Self> {
        if breakpoints.len() != values.len() {
            return Err(Error::InvalidPiecewise(format!(
                "{} breakpoints but {} values",
                breakpoints.len(),
                values.len()
            )));
        }
        if breakpoints.len() < 2 {
            return Err(Error::InvalidPiecewise(
                "need at least two breakpoints".into(),
            ));
        }
        if breakpoints.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidPiecewise(
                "breakpoints must be strictly increasing".into(),
            ));
        }
        Ok(Self {
            breakpoints,
            values,
        })
    }

    pub fn breakpoints(&self) -> &[T] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn segment_count(&self) -> usize {
        self.breakpoints.len() - 1
    }

    pub fn a(&self) -> &T {
        &self.breakpoints[0]
    }

    pub fn b(&self) -> &T {
        self.breakpoints.last().expect("at least two breakpoints")
    }

    pub fn segment_length(&self, i: usize) -> T {
        self.breakpoints[i + 1].clone() - self.breakpoints[i].clone()
    }

    pub fn slope(&self, i: usize) -> T {
        (self.values[i + 1].clone() - self.values[i].clone()) / self.segment_length(i)
    }

    pub fn slopes(&self) -> Vec<T> {
        (0..self.segment_count()).map(|i| self.slope(i)).collect()
    }

    /// `max |f'|`, i.e. `J(f)` for functions vanishing at both ends.
    pub fn lipschitz(&self) -> T {
        self.slopes().iter().map(abs).fold(T::zero(), max)
    }

    pub fn vanishes_at_ends(&self) -> bool {
        self.values[0].is_zero() && self.values.last().expect("nonempty").is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    pub fn is_nonnegative(&self) -> bool {
        self.values.iter().all(|v| *v >= T::zero())
    }

    /// Value at `x`; outside `[a, b]` the function is taken to be zero.
    pub fn eval(&self, x: &T) -> T {
        if x < self.a() || x > self.b() {
            return T::zero();
        }
        let i = self.breakpoints.partition_point(|p| p <= x);
        if i >= self.breakpoints.len() {
            return self.values.last().expect("nonempty").clone();
        }
        let i = i.max(1) - 1;
        let t = (x.clone() - self.breakpoints[i].clone()) / self.segment_length(i);
        self.values[i].clone() + t * (self.values[i + 1].clone() - self.values[i].clone())
    }

    /// Same function with `points` added as breakpoints.
    pub fn refined(&self, points: &[T]) -> Self {
        let mut xs: Vec<T> = self.breakpoints.clone();
        xs.extend(
            points
                .iter()
                .filter(|p| *p > self.a() && *p < self.b())
                .cloned(),
        );
        xs.sort_by(|p, q| p.partial_cmp(q).expect("comparable"));
        xs.dedup();
        let values = xs.iter().map(|x| self.eval(x)).collect();
        Self {
            breakpoints: xs,
            values,
        }
    }

    pub fn scaled(&self, c: &T) -> Self {
        Self {
            breakpoints: self.breakpoints.clone(),
            values: self.values.iter().map(|v| v.clone() * c.clone()).collect(),
        }
    }

    /// `||f||_2²`, exact for each linear piece.
    pub fn norm2_sq(&self) -> T {
        let three = T::from_i32(3).expect("small integer");
        (0..self.segment_count())
            .map(|i| {
                let (y0, y1) = (self.values[i].clone(), self.values[i + 1].clone());
                self.segment_length(i)
                    * (y0.clone() * y0.clone() + y0 * y1.clone() + y1.clone() * y1)
                    / three.clone()
            })
            .fold(T::zero(), |acc, v| acc + v)
    }

    /// Breakpoints of both functions, merged.
    fn common_grid(&self, other: &Self) -> Vec<T> {
        let mut xs = self.breakpoints.clone();
        xs.extend(other.breakpoints.iter().cloned());
        xs.sort_by(|p, q| p.partial_cmp(q).expect("comparable"));
        xs.dedup();
        xs
    }

    /// Pointwise `self + other` on a common interval.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_interval(other)?;
        let xs = self.common_grid(other);
        let values = xs.iter().map(|x| self.eval(x) + other.eval(x)).collect();
        Self::new(xs, values)
    }

    pub fn check_same_interval(&self, other: &Self) -> Result<()> {
        if self.a() != other.a() || self.b() != other.b() {
            return Err(Error::IntervalMismatch);
        }
        Ok(())
    }

    /// Integral of `f` from `a` to each breakpoint.
    pub fn antiderivative_at_breakpoints(&self) -> Vec<T> {
        let mut out = Vec::with_capacity(self.breakpoints.len());
        let mut acc = T::zero();
        out.push(acc.clone());
        for i in 0..self.segment_count() {
            acc = acc
                + self.segment_length(i) * (self.values[i].clone() + self.values[i + 1].clone())
                    / two();
            out.push(acc.clone());
        }
        out
    }

    /// Piecewise-linear function with the given slopes, starting from zero at `a`.
    pub fn integrate_slopes(breakpoints: Vec<T>, slopes: &[T]) -> Result<Self> {
        if slopes.len() + 1 != breakpoints.len() {
            return Err(Error::InvalidPiecewise(
                "one slope per segment required".into(),
            ));
        }
        let mut values = Vec::with_capacity(breakpoints.len());
        let mut acc = T::zero();
        values.push(acc.clone());
        for (i, s) in slopes.iter().enumerate() {
            acc = acc + s.clone() * (breakpoints[i + 1].clone() - breakpoints[i].clone());
            values.push(acc.clone());
        }
        Self::new(breakpoints, values)
    }

    pub fn to_f64(&self) -> PiecewiseLinearFn<f64> {
        PiecewiseLinearFn {
            breakpoints: self
                .breakpoints
                .iter()
                .map(|x| x.to_f64().unwrap_or(f64::NAN))
                .collect(),
            values: self
                .values
                .iter()
                .map(|x| x.to_f64().unwrap_or(f64::NAN))
                .collect(),
        }
    }
}

/// Exact `∫ f g` over the common interval.
pub fn inner_product<T: Scalar>(f: &PiecewiseLinearFn<T>, g: &PiecewiseLinearFn<T>) -> Result<T> {
    f.check_same_interval(g)?;
    let xs = f.common_grid(g);
    let six = T::from_i32(6).expect("small integer");
    let mut total = T::zero();
    for w in xs.windows(2) {
        let h = w[1].clone() - w[0].clone();
        let (f0, f1) = (f.eval(&w[0]), f.eval(&w[1]));
        let (g0, g1) = (g.eval(&w[0]), g.eval(&w[1]));
        let s = two::<T>() * f0.clone() * g0.clone()
            + f0 * g1.clone()
            + f1.clone() * g0
            + two::<T>() * f1 * g1;
        total = total + h * s / six.clone();
    }
    Ok(total)
}

/// `J(f)² / ||f||_2²`, exact.
pub fn rayleigh_squared<T: Scalar>(f: &PiecewiseLinearFn<T>) -> Result<T> {
    let norm_sq = f.norm2_sq();
    if norm_sq.is_zero() {
        return Err(Error::ZeroFunction);
    }
    let j = f.lipschitz();
    Ok(j.clone() * j / norm_sq)
}

/// `J(f) / ||f||_2`.
pub fn rayleigh_quotient<T: Scalar>(f: &PiecewiseLinearFn<T>) -> Result<f64> {
    let r2 = rayleigh_squared(f)?;
    Ok(r2.to_f64().unwrap_or(f64::NAN).sqrt())
}
