use distance_eigen::oned::{
    basis_function, basis_sequence, eigen_check_1d, extreme_check_1d, inner_product,
    rayleigh_squared, BasisKind, PiecewiseLinearFn,
};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

type Q = BigRational;

fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

fn from_slopes(a: Q, pieces: &[(Q, Q)]) -> PiecewiseLinearFn<Q> {
    let mut xs = vec![a];
    let mut slopes = Vec::new();
    for (len, s) in pieces {
        let next = xs.last().unwrap() + len;
        xs.push(next);
        slopes.push(s.clone());
    }
    PiecewiseLinearFn::integrate_slopes(xs, &slopes).unwrap()
}

/// Segments of positive rational length with the given slopes.
fn pieces(slope: impl Strategy<Value = Q>) -> impl Strategy<Value = Vec<(Q, Q)>> {
    prop::collection::vec(((1i64..6, 1i64..5).prop_map(|(n, d)| q(n, d)), slope), 1..6)
}

fn unit_slope() -> impl Strategy<Value = Q> {
    prop::bool::ANY.prop_map(|up| if up { Q::one() } else { -Q::one() })
}

/// Walk out and retrace the path with negated slopes, so the function returns to zero.
fn mirrored(half: &[(Q, Q)], middle: Option<(Q, Q)>) -> Vec<(Q, Q)> {
    let mut all = half.to_vec();
    all.extend(middle);
    all.extend(half.iter().rev().map(|(l, s)| (l.clone(), -s.clone())));
    all
}

fn assert_valid_decomposition(f: &PiecewiseLinearFn<Q>) {
    let verdict = extreme_check_1d(f, &Q::zero()).unwrap();
    let d = verdict
        .decomposition()
        .expect("slack implies a decomposition");
    assert!(d.verified);
    for v in [&d.v_plus, &d.v_minus] {
        assert!(v.vanishes_at_ends());
        assert!(v.lipschitz() <= Q::one());
    }
    let sum = d.v_plus.add(&d.v_minus).unwrap();
    for x in sum.breakpoints().iter().chain(f.breakpoints()) {
        assert_eq!(sum.eval(x), f.eval(x) * q(2, 1));
    }
    assert_ne!(
        d.v_plus.refined(d.v_minus.breakpoints()),
        d.v_minus.refined(d.v_plus.breakpoints())
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn unit_slopes_are_extreme(half in pieces(unit_slope()), a in -3i64..3) {
        let f = from_slopes(q(a, 1), &mirrored(&half, None));
        prop_assert!(f.vanishes_at_ends());
        prop_assert!(extreme_check_1d(&f, &Q::zero()).unwrap().is_extreme());
    }

    #[test]
    fn slack_segment_breaks_extremality(
        half in pieces(unit_slope()),
        gap in (1i64..6, 1i64..7).prop_map(|(n, d)| q(n, d)),
        slope in (0i64..3, 4i64..9).prop_map(|(n, d)| q(n, d)),
    ) {
        let f = from_slopes(Q::zero(), &mirrored(&half, Some((gap.clone(), slope.clone()))));
        // the tilted middle shifts the endpoint; undo it on a final unit-slope segment
        let end = f.values().last().unwrap().clone();
        let mut all = mirrored(&half, Some((gap, slope)));
        if !end.is_zero() {
            all.push((end.abs(), if end.is_positive() { -Q::one() } else { Q::one() }));
        }
        let f = from_slopes(Q::zero(), &all);
        prop_assert!(f.vanishes_at_ends());
        prop_assert!(!extreme_check_1d(&f, &Q::zero()).unwrap().is_extreme());
        assert_valid_decomposition(&f);
    }

    #[test]
    fn rayleigh_quotient_is_scale_invariant(
        values in prop::collection::vec(-20i64..20, 1..8),
        c in (-9i64..9, 1i64..7).prop_filter("nonzero", |(n, _)| *n != 0).prop_map(|(n, d)| q(n, d)),
    ) {
        prop_assume!(values.iter().any(|&v| v != 0));
        let n = values.len() as i64 + 1;
        let xs: Vec<Q> = (0..=n).map(|i| q(i, n)).collect();
        let mut ys = vec![Q::zero()];
        ys.extend(values.iter().map(|&v| q(v, 7)));
        ys.push(Q::zero());
        let f = PiecewiseLinearFn::new(xs, ys).unwrap();
        prop_assert_eq!(rayleigh_squared(&f.scaled(&c)).unwrap(), rayleigh_squared(&f).unwrap());
    }

    #[test]
    fn off_centre_tents_are_not_eigenfunctions(p in (-5i64..5).prop_filter("off centre", |p| *p != 0)) {
        let apex = q(p, 6);
        let height = Q::one() - apex.abs();
        let f = PiecewiseLinearFn::new(vec![-Q::one(), apex, Q::one()], vec![Q::zero(), height, Q::zero()]).unwrap();
        prop_assert!(!eigen_check_1d(&f, &Q::zero()).unwrap().is_certified());
    }
}

#[test]
fn nodal_sets_are_finite() {
    for n in 1..=8 {
        for kind in [BasisKind::Odd, BasisKind::Even] {
            let f: PiecewiseLinearFn<Q> = basis_function(kind, n).unwrap();
            // no segment vanishes identically, so zeros are isolated breakpoints
            for w in f.values().windows(2) {
                assert!(!(w[0].is_zero() && w[1].is_zero()));
            }
            let zeros = f.values().iter().filter(|v| v.is_zero()).count();
            let hats = if kind == BasisKind::Odd {
                2 * n
            } else {
                2 * n - 1
            };
            assert_eq!(zeros, hats + 1);
        }
    }
}

#[test]
fn only_the_first_even_function_is_nonnegative() {
    let seq = basis_sequence::<Q>(16).unwrap();
    let nonneg: Vec<_> = seq.iter().filter(|(_, _, f)| f.is_nonnegative()).collect();
    assert_eq!(nonneg.len(), 1);
    let (kind, n, f) = nonneg[0];
    assert_eq!((*kind, *n), (BasisKind::Even, 1));
    let check = eigen_check_1d(f, &Q::zero()).unwrap();
    assert!(check.is_certified());
    assert_eq!(check.lambda(), &q(3, 2));
}

#[test]
fn basis_functions_are_certified_eigenfunctions() {
    for (kind, n, f) in basis_sequence::<Q>(10).unwrap() {
        let check = eigen_check_1d(&f, &Q::zero()).unwrap();
        assert!(check.is_certified(), "{kind:?} {n}");
        let m = n as i64;
        let expected = match kind {
            BasisKind::Odd => q(3 * 4 * m * m, 2),
            BasisKind::Even => q(3 * (2 * m - 1) * (2 * m - 1), 2),
        };
        assert_eq!(check.lambda(), &expected);
        assert_eq!(rayleigh_squared(&f).unwrap(), expected);
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[test]
fn odd_family_overlaps_only_on_shared_odd_harmonics() {
    let fs: Vec<PiecewiseLinearFn<Q>> = (1..=8)
        .map(|n| basis_function(BasisKind::Odd, n).unwrap())
        .collect();
    for n in 1..=8 {
        for m in 1..n {
            let g = gcd(n, m);
            let ip = inner_product(&fs[n - 1], &fs[m - 1]).unwrap();
            let both_odd = (n / g) % 2 == 1 && (m / g) % 2 == 1;
            assert_eq!(!ip.is_zero(), both_odd, "u{n} u{m}: {ip}");
        }
    }
    // by hand: twice (2/216 - 1/81) on [-1, 0]
    assert_eq!(inner_product(&fs[2], &fs[0]).unwrap(), q(-1, 162));
    assert_eq!(inner_product(&fs[1], &fs[0]).unwrap(), Q::zero());
}

#[test]
fn odd_and_even_families_are_orthogonal() {
    for n in 1..=6 {
        for m in 1..=6 {
            let u: PiecewiseLinearFn<Q> = basis_function(BasisKind::Odd, n).unwrap();
            let v: PiecewiseLinearFn<Q> = basis_function(BasisKind::Even, m).unwrap();
            assert_eq!(inner_product(&u, &v).unwrap(), Q::zero());
        }
    }
}

#[test]
fn float_mode_agrees_with_exact_mode() {
    for n in 1..=5 {
        let exact: PiecewiseLinearFn<Q> = basis_function(BasisKind::Even, n).unwrap();
        let float: PiecewiseLinearFn<f64> = basis_function(BasisKind::Even, n).unwrap();
        let r_exact = rayleigh_squared(&exact).unwrap();
        let r_float = rayleigh_squared(&float).unwrap();
        let r_exact = num_traits::ToPrimitive::to_f64(&r_exact).unwrap();
        assert!((r_exact - r_float).abs() <= 1e-12 * r_exact);
    }
}
