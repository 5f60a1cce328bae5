//! Implicit Euler for the gradient flow `u' + ∂J_w(u) ∋ 0` and its asymptotic profile.

use crate::calculus::{j_w, vanishes_on_boundary};
use crate::error::{Error, Result};
use crate::graph::{VertexFunction, WeightedGraph};

use super::prox::{ProxOptions, ProxSolver};

pub const DEFAULT_EXTINCTION_TOL: f64 = 1e-9;
/// Minimum ratio `||u|| / prox error bound` for a sample to count as a profile.
pub const PROFILE_SIGNAL_RATIO: f64 = 1e3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowOptions {
    /// Time step; `None` picks `0.01 ||f||² / J_w(f)`.
    pub step: Option<f64>,
    pub extinction_tol: f64,
    pub prox: ProxOptions,
    pub max_steps: usize,
}

impl Default for FlowOptions {
    fn default() -> Self {
        Self {
            step: None,
            extinction_tol: DEFAULT_EXTINCTION_TOL,
            prox: ProxOptions::default(),
            max_steps: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowTrajectory {
    pub step: f64,
    pub times: Vec<f64>,
    pub states: Vec<VertexFunction>,
    pub norms: Vec<f64>,
    pub j_values: Vec<f64>,
    /// Error bound of the prox step that produced each state (0 for `f`).
    pub error_bounds: Vec<f64>,
    pub extinction_time_estimate: f64,
    /// Unit-norm profile, absent when `f` is already extinct.
    pub profile: Option<VertexFunction>,
    pub profile_eigenvalue: Option<f64>,
}

impl FlowTrajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// Default implicit-Euler step `0.01 ||f||² / J_w(f)`.
pub fn default_step(graph: &WeightedGraph, f: &VertexFunction) -> Result<f64> {
    let j = j_w(graph, f)?;
    if j == 0.0 || !j.is_finite() {
        return Ok(0.01);
    }
    Ok(0.01 * f.inner(f) / j)
}

pub fn gradient_flow(
    graph: &WeightedGraph,
    f: &VertexFunction,
    step: Option<f64>,
    tol: f64,
) -> Result<FlowTrajectory> {
    let options = FlowOptions {
        step,
        extinction_tol: tol,
        ..FlowOptions::default()
    };
    gradient_flow_with(graph, f, &options)
}

pub fn gradient_flow_with(
    graph: &WeightedGraph,
    f: &VertexFunction,
    options: &FlowOptions,
) -> Result<FlowTrajectory> {
    graph.check_len(f.len())?;
    if !vanishes_on_boundary(graph, f) {
        return Err(Error::BoundaryNotZero);
    }
    if !(options.extinction_tol > 0.0) {
        return Err(Error::InvalidTolerance(options.extinction_tol));
    }
    let step = match options.step {
        Some(h) if h > 0.0 && h.is_finite() => h,
        Some(h) => return Err(Error::InvalidStep(h)),
        None => default_step(graph, f)?,
    };
    let solver = ProxSolver::new(graph, options.prox)?;

    let mut traj = FlowTrajectory {
        step,
        times: vec![0.0],
        states: vec![f.clone()],
        norms: vec![f.norm2()],
        j_values: vec![j_w(graph, f)?],
        error_bounds: vec![0.0],
        extinction_time_estimate: 0.0,
        profile: None,
        profile_eigenvalue: None,
    };
    let mut u = f.clone();
    let mut dual: Option<Vec<f64>> = None;
    let mut k = 0usize;
    while u.norm2() > options.extinction_tol {
        if k == options.max_steps {
            return Err(Error::NonconvergedAfterMaxIters {
                iterations: k,
                gap: u.norm2(),
            });
        }
        k += 1;
        let result = solver.solve_warm(&u, step, dual.as_deref())?;
        u = result.u;
        dual = Some(result.dual);
        traj.times.push(k as f64 * step);
        traj.norms.push(u.norm2());
        traj.j_values.push(j_w(graph, &u)?);
        traj.error_bounds.push(result.error_bound);
        traj.states.push(u.clone());
    }
    traj.extinction_time_estimate = *traj.times.last().expect("nonempty");
    if let Ok((profile, lambda)) = asymptotic_profile(graph, &traj) {
        traj.profile = Some(profile);
        traj.profile_eigenvalue = Some(lambda);
    }
    Ok(traj)
}

/// Index of the sample used as asymptotic profile: the last pre-extinction
/// state whose norm dominates its solver error by [`PROFILE_SIGNAL_RATIO`].
pub fn profile_index(traj: &FlowTrajectory) -> Result<usize> {
    let last = traj.len().checked_sub(1).ok_or(Error::EmptyTrajectory)?;
    (0..last)
        .rev()
        .find(|&k| {
            traj.norms[k] > 0.0 && traj.norms[k] >= PROFILE_SIGNAL_RATIO * traj.error_bounds[k]
        })
        .or_else(|| (0..last).rev().find(|&k| traj.norms[k] > 0.0))
        .ok_or(Error::EmptyTrajectory)
}

/// `(u/||u||_2, J_w(u)²/||u||_2²)` at the profile sample.
///
/// The eigenvalue is that of `u / J_w(u)`, the representative with unit
/// Lipschitz constant; for `u ∝ d` it equals `1/||d||_2²`.
pub fn asymptotic_profile(
    graph: &WeightedGraph,
    traj: &FlowTrajectory,
) -> Result<(VertexFunction, f64)> {
    let k = profile_index(traj)?;
    let u = &traj.states[k];
    let norm = traj.norms[k];
    let j = j_w(graph, u)?;
    Ok((u.scaled(1.0 / norm), (j / norm) * (j / norm)))
}
