//! Oscillating eigenfunctions on `[-1, 1]` glued from alternating subinterval hats.

use crate::error::{Error, Result};

use super::pl::PiecewiseLinearFn;
use super::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisKind {
    /// `u_n`: `2n` hats, odd about the origin.
    Odd,
    /// `v_n`: `2n - 1` hats, even about the origin.
    Even,
}

/// `u_n` or `v_n` on `[-1, 1]`; the `k`-th hat carries the sign `(-1)^{k+1}`.
pub fn basis_function<T: Scalar>(kind: BasisKind, n: usize) -> Result<PiecewiseLinearFn<T>> {
    if n == 0 {
        return Err(Error::InvalidIndex);
    }
    let pieces = match kind {
        BasisKind::Odd => 2 * n,
        BasisKind::Even => 2 * n - 1,
    };
    let int = |k: usize| T::from_usize(k).expect("small integer");
    // breakpoints -1 + m/pieces for m = 0..2*pieces, hat ends at even m
    let halves = 2 * pieces;
    let mut xs = Vec::with_capacity(halves + 1);
    let mut ys = Vec::with_capacity(halves + 1);
    for m in 0..=halves {
        xs.push(int(m) / int(pieces) - T::one());
        if m % 2 == 0 {
            ys.push(T::zero());
        } else {
            let height = T::one() / int(pieces);
            let hat = m / 2;
            ys.push(if hat % 2 == 0 {
                height
            } else {
                T::zero() - height
            });
        }
    }
    PiecewiseLinearFn::new(xs, ys)
}

/// The first `count` basis functions in increasing Rayleigh quotient: `v_1, u_1, v_2, u_2, ...`.
pub fn basis_sequence<T: Scalar>(
    count: usize,
) -> Result<Vec<(BasisKind, usize, PiecewiseLinearFn<T>)>> {
    (0..count)
        .map(|k| {
            let (kind, n) = if k % 2 == 0 {
                (BasisKind::Even, k / 2 + 1)
            } else {
                (BasisKind::Odd, k / 2 + 1)
            };
            basis_function(kind, n).map(|f| (kind, n, f))
        })
        .collect()
}
