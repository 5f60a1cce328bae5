//! Proximal operator of `τ J_w` by an accelerated primal–dual scheme.
//!
//! Solves `min_u ½||u - f||² + τ ||K u||_∞` over `u` vanishing on `Γ`, where
//! `(K u)_e = w_e^{1/2} (u_b - u_a)` runs over undirected edges. The saddle
//! form pairs `u` with a dual `p` in the ℓ¹ ball of radius `τ`; `p_e / 2` is
//! the antisymmetric calibration on ordered pairs, whose ℓ¹ norm over ordered
//! pairs equals `||p||_1`.

use crate::error::{Error, Result};
use crate::graph::{EdgeFunction, VertexFunction, WeightedGraph};

/// Euclidean projection onto `{x : ||x||_1 ≤ radius}` by sorting magnitudes.
pub fn project_l1_ball(v: &[f64], radius: f64) -> Vec<f64> {
    let total: f64 = v.iter().map(|x| x.abs()).sum();
    if total <= radius {
        return v.to_vec();
    }
    if radius <= 0.0 {
        return vec![0.0; v.len()];
    }
    let mut mags: Vec<f64> = v.iter().map(|x| x.abs()).collect();
    mags.sort_unstable_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut theta = 0.0;
    for (k, &m) in mags.iter().enumerate() {
        cumulative += m;
        let candidate = (cumulative - radius) / (k + 1) as f64;
        if m > candidate {
            theta = candidate;
        } else {
            break;
        }
    }
    v.iter()
        .map(|&x| x.signum() * (x.abs() - theta).max(0.0))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProxOptions {
    /// Target primal–dual gap.
    pub tol: f64,
    pub max_iters: usize,
    /// Gap evaluation period in iterations.
    pub check_every: usize,
}

impl Default for ProxOptions {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_iters: 500_000,
            check_every: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProxResult {
    pub u: VertexFunction,
    /// Dual variable per undirected edge, `||p||_1 ≤ τ`.
    pub dual: Vec<f64>,
    /// Certified primal–dual gap of the returned `u`.
    pub gap: f64,
    /// `sqrt(2 gap)`, an upper bound on `||u - prox||_2`.
    pub error_bound: f64,
    pub iterations: usize,
}

impl ProxResult {
    /// The dual as an antisymmetric edge function on ordered pairs.
    pub fn calibration(&self) -> EdgeFunction {
        EdgeFunction::antisymmetric(self.dual.iter().map(|p| 0.5 * p).collect())
    }
}

/// Reusable solver for one graph; caches `w^{1/2}` and the step-size bound.
#[derive(Debug, Clone)]
pub struct ProxSolver<'g> {
    graph: &'g WeightedGraph,
    sqrt_w: Vec<f64>,
    op_norm: f64,
    pub options: ProxOptions,
}

impl<'g> ProxSolver<'g> {
    pub fn new(graph: &'g WeightedGraph, options: ProxOptions) -> Result<Self> {
        if !(options.tol > 0.0) {
            return Err(Error::InvalidTolerance(options.tol));
        }
        Ok(Self {
            graph,
            sqrt_w: graph.edges().iter().map(|e| e.weight.sqrt()).collect(),
            op_norm: (2.0 * graph.max_weighted_degree()).sqrt(),
            options,
        })
    }

    fn apply_k(&self, u: &[f64], out: &mut [f64]) {
        for (e, edge) in self.graph.edges().iter().enumerate() {
            out[e] = self.sqrt_w[e] * (u[edge.b] - u[edge.a]);
        }
    }

    /// `K^T p`, zeroed on `Γ`.
    fn apply_kt(&self, p: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|v| *v = 0.0);
        for (e, edge) in self.graph.edges().iter().enumerate() {
            let flux = self.sqrt_w[e] * p[e];
            out[edge.a] -= flux;
            out[edge.b] += flux;
        }
        for &x in self.graph.boundary() {
            out[x] = 0.0;
        }
    }

    fn primal(&self, u: &[f64], f: &[f64], tau: f64, scratch: &mut [f64]) -> f64 {
        self.apply_k(u, scratch);
        let jmax = scratch.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let fit: f64 = u.iter().zip(f).map(|(a, b)| (a - b) * (a - b)).sum();
        0.5 * fit + tau * jmax
    }

    /// `D(p) = <g, f> - ½||g||²` with `g = K^T p` on the interior.
    fn dual_value(g: &[f64], f: &[f64]) -> f64 {
        g.iter()
            .zip(f)
            .map(|(gi, fi)| gi * fi - 0.5 * gi * gi)
            .sum()
    }

    pub fn solve(&self, f: &VertexFunction, tau: f64) -> Result<ProxResult> {
        self.solve_warm(f, tau, None)
    }

    /// Runs the scheme from the dual `warm` (e.g. the previous flow step).
    pub fn solve_warm(
        &self,
        f: &VertexFunction,
        tau: f64,
        warm: Option<&[f64]>,
    ) -> Result<ProxResult> {
        let graph = self.graph;
        graph.check_len(f.len())?;
        if tau.is_nan() || tau < 0.0 {
            return Err(Error::InvalidStep(tau));
        }
        let n = graph.vertex_count();
        let m = graph.edge_count();
        let mut f = f.values().to_vec();
        for &x in graph.boundary() {
            f[x] = 0.0;
        }
        let half_f_sq = 0.5 * f.iter().map(|v| v * v).sum::<f64>();
        if tau == 0.0 || m == 0 {
            return Ok(ProxResult {
                u: VertexFunction::new(f),
                dual: vec![0.0; m],
                gap: 0.0,
                error_bound: 0.0,
                iterations: 0,
            });
        }

        let mut p = match warm {
            Some(w) if w.len() == m => project_l1_ball(w, tau),
            _ => vec![0.0; m],
        };
        let mut g = vec![0.0; n];
        self.apply_kt(&p, &mut g);
        let mut u: Vec<f64> = f.iter().zip(&g).map(|(fi, gi)| fi - gi).collect();
        let mut u_bar = u.clone();
        let mut u_prev = vec![0.0; n];
        let mut ku = vec![0.0; m];
        let mut candidate = vec![0.0; n];
        let mut scratch = vec![0.0; m];

        let mut step_p = 1.0 / self.op_norm;
        let mut step_d = 1.0 / self.op_norm;
        let check_every = self.options.check_every.max(1);
        let mut best_gap = f64::INFINITY;

        for iter in 0..=self.options.max_iters {
            if iter % check_every == 0 {
                self.apply_kt(&p, &mut g);
                let d = Self::dual_value(&g, &f);
                if half_f_sq - d <= self.options.tol {
                    let gap = (half_f_sq - d).max(0.0);
                    return Ok(ProxResult {
                        u: VertexFunction::zeros(n),
                        dual: p,
                        gap,
                        error_bound: (2.0 * gap).sqrt(),
                        iterations: iter,
                    });
                }
                for i in 0..n {
                    candidate[i] = f[i] - g[i];
                }
                let p_dual = self.primal(&candidate, &f, tau, &mut scratch);
                let p_iter = self.primal(&u, &f, tau, &mut scratch);
                let (best, p_best) = if p_dual <= p_iter {
                    (&candidate, p_dual)
                } else {
                    (&u, p_iter)
                };
                let gap = (p_best - d).max(0.0);
                best_gap = best_gap.min(gap);
                let floor = 4.0 * f64::EPSILON * (p_best.abs() + d.abs());
                if gap <= self.options.tol || gap <= floor {
                    return Ok(ProxResult {
                        u: VertexFunction::new(best.clone()),
                        dual: p,
                        gap,
                        error_bound: (2.0 * gap).sqrt(),
                        iterations: iter,
                    });
                }
            }
            if iter == self.options.max_iters {
                break;
            }

            self.apply_k(&u_bar, &mut ku);
            for e in 0..m {
                ku[e] = p[e] + step_d * ku[e];
            }
            p = project_l1_ball(&ku, tau);

            self.apply_kt(&p, &mut g);
            u_prev.copy_from_slice(&u);
            for i in 0..n {
                u[i] = (u[i] - step_p * g[i] + step_p * f[i]) / (1.0 + step_p);
            }
            for &x in graph.boundary() {
                u[x] = 0.0;
            }
            let theta = 1.0 / (1.0 + 2.0 * step_p).sqrt();
            step_p *= theta;
            step_d /= theta;
            for i in 0..n {
                u_bar[i] = u[i] + theta * (u[i] - u_prev[i]);
            }
        }
        Err(Error::NonconvergedAfterMaxIters {
            iterations: self.options.max_iters,
            gap: best_gap,
        })
    }
}

/// Minimiser of `½||u - f||² + τ J_w(u)`, with primal–dual gap at most `tol`.
pub fn prox_jw(
    graph: &WeightedGraph,
    f: &VertexFunction,
    tau: f64,
    tol: f64,
) -> Result<VertexFunction> {
    let options = ProxOptions {
        tol,
        ..ProxOptions::default()
    };
    Ok(ProxSolver::new(graph, options)?.solve(f, tau)?.u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::path_graph;

    #[test]
    fn l1_projection() {
        assert_eq!(project_l1_ball(&[0.2, -0.3], 1.0), vec![0.2, -0.3]);
        let p = project_l1_ball(&[3.0, -1.0, 0.5], 2.0);
        // threshold 1 keeps only the largest entries: (2, 0, 0)
        assert_eq!(p, vec![2.0, 0.0, 0.0]);
        let p = project_l1_ball(&[1.0, -1.0], 1.0);
        assert_eq!(p, vec![0.5, -0.5]);
        assert_eq!(project_l1_ball(&[1.0, 2.0], 0.0), vec![0.0, 0.0]);
    }

    #[test]
    fn soft_threshold_on_three_path() {
        let g = path_graph(3).unwrap();
        let f: VertexFunction = vec![0.0, 1.0, 0.0].into();
        let u = prox_jw(&g, &f, 0.3, 1e-14).unwrap();
        assert!((u[1] - 0.7).abs() < 1e-7, "{u:?}");
        assert_eq!(u[0], 0.0);
        assert_eq!(u[2], 0.0);
    }

    #[test]
    fn large_step_extinguishes() {
        let g = path_graph(3).unwrap();
        let f: VertexFunction = vec![0.0, 1.0, 0.0].into();
        for tau in [1.0, 1.5, 10.0] {
            let u = prox_jw(&g, &f, tau, 1e-12).unwrap();
            assert!(u.is_zero(), "{tau}: {u:?}");
        }
    }

    #[test]
    fn zero_step_is_identity() {
        let g = path_graph(4).unwrap();
        let f: VertexFunction = vec![0.0, 0.3, -2.0, 0.0].into();
        assert_eq!(prox_jw(&g, &f, 0.0, 1e-12).unwrap(), f);
        assert!(matches!(
            prox_jw(&g, &f, -1.0, 1e-12),
            Err(Error::InvalidStep(_))
        ));
    }

    #[test]
    fn boundary_values_are_projected_out() {
        let g = path_graph(3).unwrap();
        let f: VertexFunction = vec![5.0, 1.0, -5.0].into();
        let u = prox_jw(&g, &f, 0.3, 1e-14).unwrap();
        assert_eq!(u[0], 0.0);
        assert!((u[1] - 0.7).abs() < 1e-7);
    }

    #[test]
    fn warm_start_reuses_dual() {
        let g = path_graph(5).unwrap();
        let f: VertexFunction = vec![0.0, 1.0, 2.0, 1.0, 0.0].into();
        let solver = ProxSolver::new(&g, ProxOptions::default()).unwrap();
        let cold = solver.solve(&f, 0.5).unwrap();
        let warm = solver.solve_warm(&f, 0.5, Some(&cold.dual)).unwrap();
        assert!(warm.iterations <= cold.iterations);
        assert!(warm.u.max_abs_diff(&cold.u) < 1e-6);
    }
}
