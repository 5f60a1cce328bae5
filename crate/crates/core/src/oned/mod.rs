//! Exact piecewise-linear functions on an interval and the one-dimensional theory built on them.

use std::fmt::Debug;

use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

pub mod basis;
pub mod eigen;
pub mod extreme;
mod pl;
pub mod svc;

pub use basis::{basis_function, basis_sequence, BasisKind};
pub use eigen::{eigen_check_1d, EigenCertificate1d, EigenCheck1d};
pub use extreme::{extreme_check_1d, ExtremeDecomposition, ExtremeVerdict1d};
pub use pl::{inner_product, rayleigh_quotient, rayleigh_squared, PiecewiseLinearFn};
pub use svc::{distance_to_set, svc_set, ClosedSetApprox};

/// Number type for piecewise-linear arithmetic; `f64` and `BigRational` both qualify.
pub trait Scalar: Clone + PartialOrd + Num + Signed + FromPrimitive + ToPrimitive + Debug {}

impl<T> Scalar for T where T: Clone + PartialOrd + Num + Signed + FromPrimitive + ToPrimitive + Debug
{}
