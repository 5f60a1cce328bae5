//! Subdifferential membership and eigen-certificates for `J_w`.
//!
//! A vertex function `u ∈ H_0(V)` is an eigenfunction when some calibration
//! `q` with `-div_w q ∈ ∂J_w(u)` satisfies `λ u(x) = -div_w q(x)` on every
//! interior vertex. Elements of `∂J_w(u)` are characterised by three
//! conditions on `q`: unit ℓ¹ mass, support inside `E_max` (the edges where
//! `|∇_w u|` attains `J_w(u)`), and orientation parallel to `∇_w u` there.

use crate::calculus::{j_w, vanishes_on_boundary, weighted_divergence, weighted_gradient};
use crate::error::{Error, Result};
use crate::graph::{EdgeFunction, VertexFunction, WeightedGraph};

use super::lp::{find_feasible_point, Feasibility};

/// Relative tolerance deciding `|∇_w u| = J_w(u)` for membership in `E_max`.
pub const EMAX_REL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MembershipDiagnostics {
    pub j_w: f64,
    /// `| ||q||_1 - 1 |`.
    pub norm_gap: f64,
    /// Largest `|q(x, y)|` on ordered pairs outside `E_max`.
    pub support_violation: f64,
    /// Largest `|q||∇_w u| - q ∇_w u` on `E_max`.
    pub parallel_violation: f64,
    pub passed: bool,
}

/// Per-edge `E_max` membership for `u`, with `J_w(u)` already known.
pub fn e_max(graph: &WeightedGraph, u: &VertexFunction, j: f64) -> Result<Vec<bool>> {
    let grad = weighted_gradient(graph, u)?;
    Ok(grad
        .forward()
        .iter()
        .map(|g| j > 0.0 && g.abs() >= j - EMAX_REL_TOL * j)
        .collect())
}

fn check_admissible(graph: &WeightedGraph, u: &VertexFunction) -> Result<f64> {
    graph.check_len(u.len())?;
    if u.is_zero() {
        return Err(Error::ZeroFunction);
    }
    if !vanishes_on_boundary(graph, u) {
        return Err(Error::BoundaryNotZero);
    }
    j_w(graph, u)
}

/// Checks whether `-div_w q ∈ ∂J_w(u)` and reports each violation.
pub fn subgradient_membership(
    graph: &WeightedGraph,
    u: &VertexFunction,
    q: &EdgeFunction,
    tol: f64,
) -> Result<MembershipDiagnostics> {
    let j = check_admissible(graph, u)?;
    let in_max = e_max(graph, u, j)?;
    let grad = weighted_gradient(graph, u)?;

    let mut support_violation: f64 = 0.0;
    let mut parallel_violation: f64 = 0.0;
    for (e, &saturated) in in_max.iter().enumerate() {
        let pairs = [
            (q.forward()[e], grad.forward()[e]),
            (q.backward()[e], grad.backward()[e]),
        ];
        for (qv, gv) in pairs {
            if saturated {
                parallel_violation = parallel_violation.max(qv.abs() * gv.abs() - qv * gv);
            } else {
                support_violation = support_violation.max(qv.abs());
            }
        }
    }
    let norm_gap = (q.norm(1.0)? - 1.0).abs();
    Ok(MembershipDiagnostics {
        j_w: j,
        norm_gap,
        support_violation,
        parallel_violation,
        passed: norm_gap <= tol && support_violation <= tol && parallel_violation <= tol,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenCertificate {
    /// `J_w(u) / ||u||_2^2`.
    pub lambda: f64,
    /// Antisymmetric calibration.
    pub q: EdgeFunction,
    /// `max_{x ∉ Γ} |λ u(x) + div_w q(x)|`.
    pub residual_inf: f64,
    pub support_violation: f64,
    pub parallel_violation: f64,
    pub norm_gap: f64,
}

impl EigenCertificate {
    pub fn is_valid(&self, tol: f64) -> bool {
        self.residual_inf <= tol
            && self.support_violation <= tol
            && self.parallel_violation <= tol
            && self.norm_gap <= tol
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Certification {
    Certified(EigenCertificate),
    /// No calibration exists; `residual` is the optimal phase-one value
    /// `min ||A m - b||_1` of the sign-fixed feasibility problem.
    Infeasible {
        lambda: f64,
        residual: f64,
    },
}

impl Certification {
    pub fn certificate(&self) -> Option<&EigenCertificate> {
        match self {
            Certification::Certified(c) => Some(c),
            Certification::Infeasible { .. } => None,
        }
    }

    pub fn lambda(&self) -> f64 {
        match self {
            Certification::Certified(c) => c.lambda,
            Certification::Infeasible { lambda, .. } => *lambda,
        }
    }
}

/// `max_{x ∉ Γ} |λ u(x) + div_w q(x)|`.
pub fn eigen_residual(
    graph: &WeightedGraph,
    u: &VertexFunction,
    q: &EdgeFunction,
    lambda: f64,
) -> Result<f64> {
    let div = weighted_divergence(graph, q)?;
    Ok(graph
        .interior()
        .map(|x| (lambda * u[x] + div[x]).abs())
        .fold(0.0, f64::max))
}

/// Searches a calibration `q` proving `λ u ∈ ∂J_w(u)` with `λ = J_w(u)/||u||_2^2`.
///
/// On `E_max` the calibration is `q(a, b) = m_e sign((∇_w u)(a, b))` with
/// `m_e ≥ 0` and `q(b, a) = -q(a, b)`; off `E_max` it is zero. The unknown
/// magnitudes solve the interior balance equations `λ u(x) = -div_w q(x)`
/// together with `||q||_1 = 2 sum_e m_e = 1`.
pub fn eigen_certificate(
    graph: &WeightedGraph,
    u: &VertexFunction,
    tol: f64,
) -> Result<Certification> {
    let j = check_admissible(graph, u)?;
    let norm_sq = u.inner(u);
    let lambda = j / norm_sq;
    let in_max = e_max(graph, u, j)?;
    let grad = weighted_gradient(graph, u)?;

    let columns: Vec<usize> = (0..graph.edge_count()).filter(|&e| in_max[e]).collect();
    let interior: Vec<usize> = graph.interior().collect();
    let mut row_of = vec![usize::MAX; graph.vertex_count()];
    for (r, &x) in interior.iter().enumerate() {
        row_of[x] = r;
    }

    let mut a = vec![vec![0.0; columns.len()]; interior.len() + 1];
    let mut b: Vec<f64> = interior.iter().map(|&x| lambda * u[x]).collect();
    b.push(1.0);
    for (c, &e) in columns.iter().enumerate() {
        let edge = graph.edge(e);
        let sign = grad.forward()[e].signum();
        // -div_w q at a is -2 sqrt(w) q(a, b); at b it is +2 sqrt(w) q(a, b)
        let coeff = 2.0 * edge.weight.sqrt() * sign;
        if row_of[edge.a] != usize::MAX {
            a[row_of[edge.a]][c] -= coeff;
        }
        if row_of[edge.b] != usize::MAX {
            a[row_of[edge.b]][c] += coeff;
        }
        a[interior.len()][c] = 2.0;
    }

    let magnitudes = match find_feasible_point(&a, &b, tol) {
        Feasibility::Feasible(m) => m,
        Feasibility::Infeasible { residual } => {
            return Ok(Certification::Infeasible { lambda, residual })
        }
    };

    let mut forward = vec![0.0; graph.edge_count()];
    for (c, &e) in columns.iter().enumerate() {
        forward[e] = magnitudes[c] * grad.forward()[e].signum();
    }
    let q = EdgeFunction::antisymmetric(forward);
    let residual_inf = eigen_residual(graph, u, &q, lambda)?;
    let membership = subgradient_membership(graph, u, &q, tol)?;
    let certificate = EigenCertificate {
        lambda,
        q,
        residual_inf,
        support_violation: membership.support_violation,
        parallel_violation: membership.parallel_violation,
        norm_gap: membership.norm_gap,
    };
    if certificate.is_valid(tol) {
        Ok(Certification::Certified(certificate))
    } else {
        let residual = certificate
            .residual_inf
            .max(certificate.norm_gap)
            .max(certificate.parallel_violation)
            .max(certificate.support_violation);
        Ok(Certification::Infeasible { lambda, residual })
    }
}
