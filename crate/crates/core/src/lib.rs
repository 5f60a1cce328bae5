//! Distance functions as nonlinear eigenfunctions of the L∞-gradient functional.
//!
//! Graph side: weighted graph calculus ([`calculus`]), graph distance to a
//! boundary set ([`distance`]), and the spectral toolkit ([`spectral`]):
//! subgradient checks, eigen-certificates, extreme points, the proximal
//! operator of `J_w` and its implicit gradient flow.
//!
//! Continuum side: inner-parallel-body integrals and the explicit flow
//! solution on model domains ([`continuum`]), and exact piecewise-linear 1D
//! constructions ([`oned`]).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod calculus;
pub mod continuum;
pub mod distance;
pub mod error;
pub mod generators;
pub mod graph;
pub mod io;
pub mod oned;
pub mod spectral;

pub use error::{Error, Result};
pub use graph::{Edge, EdgeFunction, VertexFunction, WeightedGraph};
