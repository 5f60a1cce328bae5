use distance_eigen::calculus::j_w;
use distance_eigen::distance::graph_distance;
use distance_eigen::generators::{grid_graph, path_graph, random_connected, GridBoundary};
use distance_eigen::spectral::{
    eigen_certificate, eigen_residual, extreme_point_check, gradient_flow, prox_jw,
    subgradient_membership, Certification, ExtremeVerdict,
};
use distance_eigen::{VertexFunction, WeightedGraph};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-9;

fn graph(max_n: usize) -> impl Strategy<Value = WeightedGraph> {
    (3..=max_n, 0usize..8, any::<u64>())
        .prop_map(|(n, m, seed)| random_connected(n, m, seed).unwrap())
}

fn on_h0(g: &WeightedGraph, values: impl Iterator<Item = f64>) -> VertexFunction {
    VertexFunction::new(
        values
            .enumerate()
            .map(|(x, v)| if g.is_boundary(x) { 0.0 } else { v })
            .take(g.vertex_count())
            .collect(),
    )
}

fn random_h0(g: &WeightedGraph, rng: &mut ChaCha8Rng) -> VertexFunction {
    let values: Vec<f64> = (0..g.vertex_count())
        .map(|_| rng.gen_range(-2.0..2.0))
        .collect();
    on_h0(g, values.into_iter())
}

/// Random tree rooted at the single boundary vertex 0 with every edge saturated.
fn saturated_tree(n: usize, seed: u64) -> (WeightedGraph, VertexFunction) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    let mut u = vec![0.0; n];
    for k in 1..n {
        let parent = rng.gen_range(0..k);
        let w: f64 = rng.gen_range(0.25..4.0);
        let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        u[k] = u[parent] + sign / w.sqrt();
        edges.push((parent, k, w));
    }
    (
        WeightedGraph::new(n, &edges, &[0]).unwrap(),
        VertexFunction::new(u),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn distance_certificates_are_valid(g in graph(10)) {
        prop_assume!(g.interior().count() > 0);
        let d = graph_distance(&g).d;
        let cert = match eigen_certificate(&g, &d, TOL).unwrap() {
            Certification::Certified(c) => c,
            Certification::Infeasible { residual, .. } => {
                return Err(TestCaseError::fail(format!("distance not certified, residual {residual}")));
            }
        };
        prop_assert!(cert.is_valid(TOL));
        prop_assert!((cert.lambda - 1.0 / d.inner(&d)).abs() <= 1e-12 * cert.lambda);
        let diag = subgradient_membership(&g, &d, &cert.q, TOL).unwrap();
        prop_assert!(diag.passed);
        prop_assert!(eigen_residual(&g, &d, &cert.q, cert.lambda).unwrap() <= TOL);
        prop_assert!(cert.q.antisymmetry_defect() <= 1e-15);
    }

    #[test]
    fn any_returned_certificate_is_valid(g in graph(8), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = random_h0(&g, &mut rng);
        prop_assume!(!u.is_zero());
        if let Certification::Certified(cert) = eigen_certificate(&g, &u, TOL).unwrap() {
            prop_assert!(subgradient_membership(&g, &u, &cert.q, TOL).unwrap().passed);
            prop_assert!(eigen_residual(&g, &u, &cert.q, cert.lambda).unwrap() <= TOL);
        }
    }

    #[test]
    fn lambda_scales_inversely(g in graph(8), c in prop_oneof![Just(-2.0), Just(-1.0), Just(0.5), Just(3.0)]) {
        let d = graph_distance(&g).d;
        prop_assume!(!d.is_zero());
        let l1 = eigen_certificate(&g, &d, TOL).unwrap().lambda();
        let lc = eigen_certificate(&g, &d.scaled(c), TOL).unwrap();
        prop_assert!(lc.certificate().is_some());
        prop_assert!((lc.lambda() - l1 / c.abs()).abs() <= 1e-12 * l1 / c.abs());
    }

    #[test]
    fn saturated_functions_are_extreme(n in 2usize..14, seed in any::<u64>()) {
        let (g, u) = saturated_tree(n, seed);
        prop_assert!((j_w(&g, &u).unwrap() - 1.0).abs() <= 1e-12);
        prop_assert!(extreme_point_check(&g, &u, 1e-12).unwrap().is_extreme());
    }

    #[test]
    fn distance_is_extreme(g in graph(12)) {
        let d = graph_distance(&g).d;
        prop_assert!(extreme_point_check(&g, &d, 1e-12).unwrap().is_extreme());
    }

    #[test]
    fn prox_is_nonexpansive(g in graph(6), seed in any::<u64>(), tau in 0.01f64..1.5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_h0(&g, &mut rng);
        let h = random_h0(&g, &mut rng);
        let pf = prox_jw(&g, &f, tau, 1e-13).unwrap();
        let ph = prox_jw(&g, &h, tau, 1e-13).unwrap();
        let diff = |a: &VertexFunction, b: &VertexFunction| {
            a.values().iter().zip(b.values()).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
        };
        prop_assert!(diff(&pf, &ph) <= diff(&f, &h) + 1e-6);
        prop_assert!(pf.norm2() <= f.norm2() + 1e-6);
        let zero = VertexFunction::zeros(g.vertex_count());
        prop_assert!(prox_jw(&g, &zero, tau, 1e-13).unwrap().is_zero());
        for &x in g.boundary() {
            prop_assert_eq!(pf[x], 0.0);
        }
    }
}

#[test]
fn positive_eigenfunctions_are_distances() {
    let graphs = [
        path_graph(4).unwrap(),
        path_graph(7).unwrap(),
        grid_graph(5, 5, GridBoundary::Ring).unwrap(),
        grid_graph(6, 4, GridBoundary::Ring).unwrap(),
        grid_graph(4, 4, GridBoundary::Corners).unwrap(),
    ];
    for g in &graphs {
        let d = graph_distance(g).d;
        let max_d = d.values().iter().cloned().fold(0.0, f64::max);
        let mut candidates = vec![d.clone()];
        // truncations min(d, c) stay positive with unit Lipschitz constant
        for c in [1.0, 1.5, max_d - 1.0] {
            if c >= 1.0 && c < max_d {
                candidates.push(VertexFunction::new(
                    d.values().iter().map(|v| v.min(c)).collect(),
                ));
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let bumped = on_h0(
                g,
                d.values()
                    .iter()
                    .map(|v| (v + rng.gen_range(-0.4..0.4)).max(0.05)),
            );
            let j = j_w(g, &bumped).unwrap();
            candidates.push(bumped.scaled(1.0 / j));
        }
        for u in candidates {
            let positive = g.interior().all(|x| u[x] > 0.0);
            let unit = (j_w(g, &u).unwrap() - 1.0).abs() <= 1e-12;
            if let Certification::Certified(cert) = eigen_certificate(g, &u, TOL).unwrap() {
                if positive && unit && cert.is_valid(TOL) {
                    assert!(
                        u.max_abs_diff(&d) <= 1e-9,
                        "certified positive u differs from d"
                    );
                }
            }
        }
    }
}

#[test]
fn flow_of_distance_is_self_similar() {
    for seed in 0..6 {
        let g = random_connected(7, 4, seed).unwrap();
        let d = graph_distance(&g).d;
        let f = d.scaled(2.0);
        let traj = gradient_flow(&g, &f, None, 1e-9).unwrap();
        let profile = traj.profile.as_ref().unwrap();
        assert!(profile.max_abs_diff(&d.scaled(1.0 / d.norm2())) <= 1e-6);
        let lambda = traj.profile_eigenvalue.unwrap();
        assert!((lambda - 1.0 / d.inner(&d)).abs() <= 1e-6 * lambda);
        assert!(traj.norms.windows(2).all(|w| w[1] <= w[0] + 1e-9));
        // u(t) = (1 - t / (2 ||d||²))₊ · 2d shrinks to zero at t = 2 ||d||²
        let t_ext = 2.0 * d.inner(&d);
        assert!((traj.extinction_time_estimate - t_ext).abs() <= 2.0 * traj.step);
    }
}

#[test]
fn random_flows_decrease() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for seed in 0..8 {
        let g = random_connected(6, 3, seed).unwrap();
        let f = on_h0(&g, (0..6).map(|_| rng.gen_range(0.0..2.0)));
        let traj = gradient_flow(&g, &f, None, 1e-9).unwrap();
        assert!(traj.norms.windows(2).all(|w| w[1] <= w[0] + 1e-9));
        assert!(*traj.norms.last().unwrap() <= 1e-9);
        if let Some(p) = &traj.profile {
            assert!((p.norm2() - 1.0).abs() <= 1e-12);
        }
    }
}

#[test]
fn p5_witness() {
    let g = path_graph(5).unwrap();
    let u = VertexFunction::new(vec![0.0, 1.0, 1.0, 0.0, 0.0]);
    assert_eq!(
        extreme_point_check(&g, &u, 1e-12).unwrap(),
        ExtremeVerdict::NotExtreme {
            witness: 3,
            unreachable: vec![2, 3]
        }
    );
}
