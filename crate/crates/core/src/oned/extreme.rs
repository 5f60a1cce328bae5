//! Extreme points of the unit ball `{f : |f'| <= 1, f(a) = f(b) = 0}` for piecewise-linear `f`.

use crate::error::{Error, Result};

use super::pl::{abs, max, two, PiecewiseLinearFn};
use super::Scalar;

/// `f = (v_plus + v_minus) / 2` with both halves in the unit ball and `v_plus != v_minus`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtremeDecomposition<T> {
    pub v_plus: PiecewiseLinearFn<T>,
    pub v_minus: PiecewiseLinearFn<T>,
    /// Slope perturbation applied on the slack set.
    pub epsilon: T,
    /// Point splitting the slack set into two halves of equal measure.
    pub alpha: T,
    /// Total length of the segments with `|f'| < 1`.
    pub slack_measure: T,
    pub verified: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExtremeVerdict1d<T> {
    Extreme,
    NotExtreme(Box<ExtremeDecomposition<T>>),
}

impl<T> ExtremeVerdict1d<T> {
    pub fn is_extreme(&self) -> bool {
        matches!(self, Self::Extreme)
    }

    pub fn decomposition(&self) -> Option<&ExtremeDecomposition<T>> {
        match self {
            Self::Extreme => None,
            Self::NotExtreme(d) => Some(d),
        }
    }
}

/// `f` is extreme iff `|f'| = 1` almost everywhere; otherwise an explicit
/// decomposition is built by tilting the slope up and down on the two halves
/// of the slack set.
pub fn extreme_check_1d<T: Scalar>(
    f: &PiecewiseLinearFn<T>,
    tol: &T,
) -> Result<ExtremeVerdict1d<T>> {
    if !f.vanishes_at_ends() {
        return Err(Error::BoundaryNotZero);
    }
    let one_plus = T::one() + tol.clone();
    let lip = f.lipschitz();
    if lip > one_plus {
        return Err(Error::NotInUnitBall(lip.to_f64().unwrap_or(f64::NAN)));
    }
    let threshold = T::one() - tol.clone();
    let is_slack = |s: &T| abs(s) < threshold;

    let slopes = f.slopes();
    let mut slack_measure = T::zero();
    let mut steepest_slack = T::zero();
    for (i, s) in slopes.iter().enumerate() {
        if is_slack(s) {
            slack_measure = slack_measure + f.segment_length(i);
            steepest_slack = max(steepest_slack, abs(s));
        }
    }
    if slack_measure.is_zero() {
        return Ok(ExtremeVerdict1d::Extreme);
    }
    let epsilon = T::one() - steepest_slack;

    let half = slack_measure.clone() / two();
    // when half the slack ends exactly at a segment end, centre alpha in the following saturated run
    let xs = f.breakpoints();
    let mut acc = T::zero();
    let mut alpha = f.b().clone();
    for (i, s) in slopes.iter().enumerate() {
        if !is_slack(s) {
            continue;
        }
        let h = f.segment_length(i);
        if acc.clone() + h.clone() >= half {
            alpha = xs[i].clone() + (half.clone() - acc.clone());
            if alpha == xs[i + 1] {
                if let Some(j) = (i + 1..slopes.len()).find(|&j| is_slack(&slopes[j])) {
                    alpha = (alpha + xs[j].clone()) / two();
                }
            }
            break;
        }
        acc = acc + h;
    }

    let refined = f.refined(std::slice::from_ref(&alpha));
    let xs = refined.breakpoints().to_vec();
    let mut up = Vec::with_capacity(refined.segment_count());
    let mut down = Vec::with_capacity(refined.segment_count());
    for (i, s) in refined.slopes().into_iter().enumerate() {
        if !is_slack(&s) {
            up.push(s.clone());
            down.push(s);
        } else if xs[i + 1] <= alpha {
            up.push(s.clone() + epsilon.clone());
            down.push(s - epsilon.clone());
        } else {
            up.push(s.clone() - epsilon.clone());
            down.push(s + epsilon.clone());
        }
    }
    let v_plus = PiecewiseLinearFn::integrate_slopes(xs.clone(), &up)?;
    let v_minus = PiecewiseLinearFn::integrate_slopes(xs, &down)?;

    let mean = v_plus.add(&v_minus)?.scaled(&(T::one() / two()));
    let mean_ok = mean
        .breakpoints()
        .iter()
        .zip(mean.values())
        .all(|(x, v)| abs(&(v.clone() - f.eval(x))) <= *tol);
    let verified = mean_ok
        && v_plus.lipschitz() <= one_plus
        && v_minus.lipschitz() <= one_plus
        && abs(v_plus.values().last().expect("nonempty")) <= *tol
        && abs(v_minus.values().last().expect("nonempty")) <= *tol
        && v_plus != v_minus;

    Ok(ExtremeVerdict1d::NotExtreme(Box::new(
        ExtremeDecomposition {
            v_plus,
            v_minus,
            epsilon,
            alpha,
            slack_measure,
            verified,
        },
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oned::{basis_function, distance_to_set, svc_set, BasisKind};
    use num_rational::BigRational;
    use num_traits::Zero;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn unit_slope_functions_are_extreme() {
        let zero = BigRational::zero();
        for n in 1..=3 {
            let f: PiecewiseLinearFn<BigRational> = basis_function(BasisKind::Even, n).unwrap();
            assert!(extreme_check_1d(&f, &zero).unwrap().is_extreme());
        }
    }

    #[test]
    fn flat_top_is_not_extreme() {
        let f = PiecewiseLinearFn::new(
            vec![q(0, 1), q(1, 1), q(2, 1), q(3, 1)],
            vec![q(0, 1), q(1, 1), q(1, 1), q(0, 1)],
        )
        .unwrap();
        let verdict = extreme_check_1d(&f, &BigRational::zero()).unwrap();
        let d = verdict.decomposition().unwrap();
        assert!(d.verified);
        assert_eq!(d.epsilon, q(1, 1));
        assert_eq!(d.alpha, q(3, 2));
        assert_eq!(d.v_plus.eval(&q(3, 2)), q(3, 2));
        assert_eq!(d.v_minus.eval(&q(3, 2)), q(1, 2));
    }

    #[test]
    fn svc_distance_decomposes() {
        let set = svc_set::<BigRational>(3);
        let d = distance_to_set(&set).unwrap();
        let verdict = extreme_check_1d(&d, &BigRational::zero()).unwrap();
        let dec = verdict.decomposition().unwrap();
        assert!(dec.verified);
        assert_eq!(dec.epsilon, q(1, 1));
        assert_eq!(dec.alpha, q(1, 2));
        assert_eq!(dec.slack_measure, set.measure());
    }

    #[test]
    fn zero_is_midpoint() {
        let f = PiecewiseLinearFn::new(vec![0.0f64, 1.0], vec![0.0, 0.0]).unwrap();
        let dec = extreme_check_1d(&f, &1e-12).unwrap();
        let dec = dec.decomposition().unwrap();
        assert!(dec.verified);
        assert!((dec.v_plus.eval(&0.5) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn rejects_invalid_inputs() {
        let steep = PiecewiseLinearFn::new(vec![0.0, 1.0, 2.0], vec![0.0, 2.0, 0.0]).unwrap();
        assert!(matches!(
            extreme_check_1d(&steep, &1e-12),
            Err(Error::NotInUnitBall(_))
        ));
        let lifted = PiecewiseLinearFn::new(vec![0.0, 1.0], vec![0.0, 0.5]).unwrap();
        assert_eq!(
            extreme_check_1d(&lifted, &1e-12),
            Err(Error::BoundaryNotZero)
        );
    }
}
