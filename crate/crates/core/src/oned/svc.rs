//! Finite-level approximations of the middle-fourth Smith–Volterra–Cantor set and distance functions to closed sets.

use crate::error::{Error, Result};

use super::pl::{two, PiecewiseLinearFn};
use super::Scalar;

/// Disjoint closed intervals, sorted left to right; degenerate intervals are points.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedSetApprox<T> {
    pub level: usize,
    intervals: Vec<(T, T)>,
}

impl<T: Scalar> ClosedSetApprox<T> {
    pub fn from_intervals(level: usize, intervals: Vec<(T, T)>) -> Result<Self> {
        if intervals.is_empty() {
            return Err(Error::EmptySet);
        }
        if intervals.iter().any(|(a, b)| a > b) {
            return Err(Error::InvalidPiecewise("interval with lo > hi".into()));
        }
        if intervals.windows(2).any(|w| !(w[0].1 < w[1].0)) {
            return Err(Error::InvalidPiecewise(
                "intervals must be sorted and disjoint".into(),
            ));
        }
        Ok(Self { level, intervals })
    }

    pub fn intervals(&self) -> &[(T, T)] {
        &self.intervals
    }

    pub fn measure(&self) -> T {
        self.intervals
            .iter()
            .fold(T::zero(), |acc, (a, b)| acc + b.clone() - a.clone())
    }

    pub fn contains(&self, x: &T) -> bool {
        self.intervals.iter().any(|(a, b)| a <= x && x <= b)
    }
}

/// Level-`N` approximation of the fat Cantor set in `[0, 1]`: step `k` removes
/// the centred open middle of length `4^{-k}` from every surviving interval.
pub fn svc_set<T: Scalar>(level: usize) -> ClosedSetApprox<T> {
    let four = two::<T>() * two::<T>();
    let mut intervals = vec![(T::zero(), T::one())];
    let mut gap = T::one();
    for _ in 0..level {
        gap = gap / four.clone();
        let half_gap = gap.clone() / two();
        intervals = intervals
            .into_iter()
            .flat_map(|(a, b)| {
                let mid = (a.clone() + b.clone()) / two();
                [
                    (a, mid.clone() - half_gap.clone()),
                    (mid + half_gap.clone(), b),
                ]
            })
            .collect();
    }
    ClosedSetApprox { level, intervals }
}

/// `dist(x, F)` on the convex hull of `F`: zero on `F`, a unit-slope tent over each gap.
pub fn distance_to_set<T: Scalar>(set: &ClosedSetApprox<T>) -> Result<PiecewiseLinearFn<T>> {
    let intervals = set.intervals();
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (i, (a, b)) in intervals.iter().enumerate() {
        xs.push(a.clone());
        ys.push(T::zero());
        if b > a {
            xs.push(b.clone());
            ys.push(T::zero());
        }
        if let Some((next, _)) = intervals.get(i + 1) {
            let mid = (b.clone() + next.clone()) / two();
            ys.push(mid.clone() - b.clone());
            xs.push(mid);
        }
    }
    if xs.len() < 2 {
        return Err(Error::InvalidPiecewise("set is a single point".into()));
    }
    PiecewiseLinearFn::new(xs, ys)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use num_traits::{One, Zero};

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn first_levels() {
        let f0: ClosedSetApprox<BigRational> = svc_set(0);
        assert_eq!(f0.intervals(), &[(q(0, 1), q(1, 1))]);
        assert_eq!(f0.measure(), q(1, 1));
        let f1: ClosedSetApprox<BigRational> = svc_set(1);
        assert_eq!(f1.intervals(), &[(q(0, 1), q(3, 8)), (q(5, 8), q(1, 1))]);
        assert_eq!(f1.measure(), q(3, 4));
    }

    #[test]
    fn measure_tail() {
        for n in 1..=8usize {
            let f: ClosedSetApprox<BigRational> = svc_set(n);
            assert_eq!(f.intervals().len(), 1 << n);
            let tail = BigRational::one() / BigRational::from_integer((1u64 << (n + 1)).into());
            assert_eq!(f.measure(), q(1, 2) + tail);
        }
    }

    #[test]
    fn distance_to_endpoints_is_hat() {
        let set = ClosedSetApprox::from_intervals(0, vec![(q(0, 1), q(0, 1)), (q(1, 1), q(1, 1))])
            .unwrap();
        let d = distance_to_set(&set).unwrap();
        assert_eq!(d.breakpoints(), &[q(0, 1), q(1, 2), q(1, 1)]);
        assert_eq!(d.values(), &[q(0, 1), q(1, 2), q(0, 1)]);
    }

    #[test]
    fn level_one_tent() {
        let d = distance_to_set(&svc_set::<BigRational>(1)).unwrap();
        assert_eq!(d.eval(&q(1, 2)), q(1, 8));
        assert_eq!(d.eval(&q(1, 4)), BigRational::zero());
        for s in d.slopes() {
            assert!(s == q(1, 1) || s == q(-1, 1) || s.is_zero());
        }
    }

    #[test]
    fn empty_set_rejected() {
        assert_eq!(
            ClosedSetApprox::<f64>::from_intervals(0, vec![]),
            Err(Error::EmptySet)
        );
    }
}
