//! Weighted gradient, divergence and the functional `J_w(u) = ||∇_w u||_∞`.
//!
//! The divergence is the negative adjoint of the gradient,
//! `<q, ∇_w u> = -<div_w q, u>` for every `u` and every (not necessarily
//! antisymmetric) `q`, with the edge inner product summing over ordered pairs.

use crate::error::Result;
use crate::graph::{EdgeFunction, VertexFunction, WeightedGraph};

/// `(∇_w u)(x, y) = w(x, y)^{1/2} (u(y) - u(x))`.
pub fn weighted_gradient(graph: &WeightedGraph, u: &VertexFunction) -> Result<EdgeFunction> {
    graph.check_len(u.len())?;
    let forward = graph
        .edges()
        .iter()
        .map(|e| e.weight.sqrt() * (u[e.b] - u[e.a]))
        .collect();
    Ok(EdgeFunction::antisymmetric(forward))
}

/// `(div_w q)(x) = sum_{y ~ x} w(x, y)^{1/2} (q(x, y) - q(y, x))`.
pub fn weighted_divergence(graph: &WeightedGraph, q: &EdgeFunction) -> Result<VertexFunction> {
    assert_eq!(
        q.edge_count(),
        graph.edge_count(),
        "edge function from another graph"
    );
    let mut div = vec![0.0; graph.vertex_count()];
    for (e, edge) in graph.edges().iter().enumerate() {
        let flux = edge.weight.sqrt() * (q.forward()[e] - q.backward()[e]);
        div[edge.a] += flux;
        div[edge.b] -= flux;
    }
    Ok(VertexFunction::new(div))
}

/// `(∇⁻_w u)(x, y) = w(x, y)^{1/2} (u(y) - u(x))_-` with `(s)_- = -min(s, 0)`.
pub fn one_sided_gradient(graph: &WeightedGraph, u: &VertexFunction) -> Result<EdgeFunction> {
    graph.check_len(u.len())?;
    let mut forward = Vec::with_capacity(graph.edge_count());
    let mut backward = Vec::with_capacity(graph.edge_count());
    for e in graph.edges() {
        let s = e.weight.sqrt();
        forward.push(s * negative_part(u[e.b] - u[e.a]));
        backward.push(s * negative_part(u[e.a] - u[e.b]));
    }
    Ok(EdgeFunction::from_orientations(forward, backward))
}

fn negative_part(s: f64) -> f64 {
    -s.min(0.0)
}

pub fn vanishes_on_boundary(graph: &WeightedGraph, u: &VertexFunction) -> bool {
    graph.boundary().iter().all(|&x| u[x] == 0.0)
}

/// Largest `|(∇_w u)(x, y)|` over all edges, ignoring the boundary condition.
pub fn gradient_max(graph: &WeightedGraph, u: &VertexFunction) -> Result<f64> {
    graph.check_len(u.len())?;
    Ok(graph
        .edges()
        .iter()
        .map(|e| (e.weight.sqrt() * (u[e.b] - u[e.a])).abs())
        .fold(0.0, f64::max))
}

/// `J_w(u)`; `f64::INFINITY` when `u` does not vanish on the boundary.
pub fn j_w(graph: &WeightedGraph, u: &VertexFunction) -> Result<f64> {
    graph.check_len(u.len())?;
    if !vanishes_on_boundary(graph, u) {
        return Ok(f64::INFINITY);
    }
    gradient_max(graph, u)
}
