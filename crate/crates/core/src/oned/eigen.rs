//! Exact eigenfunction certificates for piecewise-linear functions on an interval.
//!
//! `f` is an eigenfunction with `lambda = J(f) / ||f||²` iff some `q = c - lambda F`
//! (with `F` the antiderivative of `f`) has the sign of `f'` on segments where
//! `|f'| = J(f)` and vanishes elsewhere. `F` is convex where `f' > 0` and concave
//! where `f' < 0`, so these sign conditions reduce to bounds on `c` at breakpoints.

use crate::error::{Error, Result};

use super::pl::{abs, max, two, PiecewiseLinearFn};
use super::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct EigenCertificate1d<T> {
    pub lambda: T,
    /// Integration constant of the calibration.
    pub c: T,
    /// Calibration values at the breakpoints of `f`.
    pub q_at_breakpoints: Vec<T>,
    /// `∫|q|`, which equals 1 for a valid certificate.
    pub l1_norm: T,
}

#[derive(Debug, Clone, PartialEq)]
pub enum EigenCheck1d<T> {
    Certified(EigenCertificate1d<T>),
    /// No admissible constant; `lo > hi` or a slack segment carries mass.
    Infeasible {
        lambda: T,
        lo: Option<T>,
        hi: Option<T>,
    },
}

impl<T> EigenCheck1d<T> {
    pub fn is_certified(&self) -> bool {
        matches!(self, Self::Certified(_))
    }

    pub fn lambda(&self) -> &T {
        match self {
            Self::Certified(c) => &c.lambda,
            Self::Infeasible { lambda, .. } => lambda,
        }
    }

    pub fn certificate(&self) -> Option<&EigenCertificate1d<T>> {
        match self {
            Self::Certified(c) => Some(c),
            Self::Infeasible { .. } => None,
        }
    }
}

fn min<T: Scalar>(a: T, b: T) -> T {
    if a <= b {
        a
    } else {
        b
    }
}

pub fn eigen_check_1d<T: Scalar>(f: &PiecewiseLinearFn<T>, tol: &T) -> Result<EigenCheck1d<T>> {
    if !f.vanishes_at_ends() {
        return Err(Error::BoundaryNotZero);
    }
    let norm_sq = f.norm2_sq();
    if norm_sq.is_zero() {
        return Err(Error::ZeroFunction);
    }
    let j = f.lipschitz();
    let lambda = j.clone() / norm_sq;
    let big_f = f.antiderivative_at_breakpoints();
    let values = f.values();
    let infeasible = |lo: Option<T>, hi: Option<T>| {
        Ok(EigenCheck1d::Infeasible {
            lambda: lambda.clone(),
            lo,
            hi,
        })
    };

    let mut lo: Option<T> = None;
    let mut hi: Option<T> = None;
    let mut pinned: Option<T> = None;
    let mut signs = Vec::with_capacity(f.segment_count());
    for (i, s) in f.slopes().into_iter().enumerate() {
        let (f0, f1) = (&big_f[i], &big_f[i + 1]);
        if abs(&s) < j.clone() - tol.clone() {
            if abs(&values[i]) > *tol || abs(&values[i + 1]) > *tol {
                return infeasible(lo, hi);
            }
            let value = lambda.clone() * f0.clone();
            if let Some(p) = &pinned {
                if abs(&(p.clone() - value.clone())) > *tol {
                    return infeasible(lo, hi);
                }
            }
            pinned = Some(value);
            signs.push(T::zero());
        } else if s > T::zero() {
            let bound = lambda.clone() * max(f0.clone(), f1.clone());
            lo = Some(match lo {
                Some(l) => max(l, bound),
                None => bound,
            });
            signs.push(T::one());
        } else {
            let bound = lambda.clone() * min(f0.clone(), f1.clone());
            hi = Some(match hi {
                Some(h) => min(h, bound),
                None => bound,
            });
            signs.push(T::zero() - T::one());
        }
    }

    if let (Some(l), Some(h)) = (&lo, &hi) {
        if l.clone() > h.clone() + tol.clone() {
            return infeasible(lo, hi);
        }
    }
    let c = match (&pinned, &lo, &hi) {
        (Some(p), _, _) => {
            let below = lo
                .as_ref()
                .is_some_and(|l| p.clone() < l.clone() - tol.clone());
            let above = hi
                .as_ref()
                .is_some_and(|h| p.clone() > h.clone() + tol.clone());
            if below || above {
                return infeasible(lo, hi);
            }
            p.clone()
        }
        (None, Some(l), _) => l.clone(),
        (None, None, Some(h)) => h.clone(),
        (None, None, None) => return infeasible(lo, hi),
    };

    let q: Vec<T> = big_f
        .iter()
        .map(|fv| c.clone() - lambda.clone() * fv.clone())
        .collect();
    let six = T::from_i32(6).expect("small integer");
    let mut l1_norm = T::zero();
    for (i, sign) in signs.iter().enumerate() {
        let h = f.segment_length(i);
        let integral = h.clone() * q[i].clone()
            - lambda.clone()
                * h.clone()
                * h
                * (two::<T>() * values[i].clone() + values[i + 1].clone())
                / six.clone();
        l1_norm = l1_norm + sign.clone() * integral;
    }

    Ok(EigenCheck1d::Certified(EigenCertificate1d {
        lambda,
        c,
        q_at_breakpoints: q,
        l1_norm,
    }))
}
