//! Graph distance to the boundary set and the shortest-path structure of its gradient.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::calculus::{j_w, one_sided_gradient, weighted_gradient};
use crate::error::{Error, Result};
use crate::graph::{VertexFunction, WeightedGraph};

/// Relative tolerance for path-length ties and gradient saturation.
pub const SATURATION_TOL: f64 = 1e-12;

/// Distance `d(x) = min_{y∈Γ} d_w(x, y)` together with, for every vertex, the
/// neighbours that begin a shortest path from it to `Γ`.
#[derive(Debug, Clone)]
pub struct DistanceField {
    pub d: VertexFunction,
    pub predecessors: Vec<Vec<usize>>,
}

impl DistanceField {
    /// Whether `y` is the first step of some shortest path from `x`.
    pub fn is_first_step(&self, x: usize, y: usize) -> bool {
        self.predecessors[x].contains(&y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Entry {
    dist: f64,
    vertex: usize,
}

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.vertex.cmp(&self.vertex))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn ties(a: f64, b: f64) -> bool {
    (a - b).abs() <= SATURATION_TOL * a.abs().max(b.abs()).max(1.0)
}

/// Multi-source Dijkstra from `Γ` with edge lengths `w^{-1/2}`.
pub fn graph_distance(graph: &WeightedGraph) -> DistanceField {
    let n = graph.vertex_count();
    let mut dist = vec![f64::INFINITY; n];
    let mut heap = BinaryHeap::new();
    for &x in graph.boundary() {
        dist[x] = 0.0;
        heap.push(Entry {
            dist: 0.0,
            vertex: x,
        });
    }
    while let Some(Entry {
        dist: dx,
        vertex: x,
    }) = heap.pop()
    {
        if dx > dist[x] {
            continue;
        }
        for inc in graph.neighbors(x) {
            let candidate = dx + graph.edge(inc.edge).length();
            if candidate < dist[inc.neighbor] {
                dist[inc.neighbor] = candidate;
                heap.push(Entry {
                    dist: candidate,
                    vertex: inc.neighbor,
                });
            }
        }
    }

    let predecessors = (0..n)
        .map(|x| {
            if graph.is_boundary(x) {
                return Vec::new();
            }
            graph
                .neighbors(x)
                .iter()
                .filter(|inc| ties(dist[x], dist[inc.neighbor] + graph.edge(inc.edge).length()))
                .map(|inc| inc.neighbor)
                .collect()
        })
        .collect();

    DistanceField {
        d: VertexFunction::new(dist),
        predecessors,
    }
}

/// Maximiser of `||u||_2` over `u ∈ H_0(V)` with `|∇_w u| ≤ 1`.
///
/// The maximiser is the distance function for every `p`; the argument is
/// accepted so callers can treat all norms alike.
pub fn ground_state(graph: &WeightedGraph, p_norm: f64) -> Result<VertexFunction> {
    if p_norm.is_nan() || p_norm < 1.0 {
        return Err(Error::InvalidP(p_norm));
    }
    Ok(graph_distance(graph).d)
}

/// `J_w(u) / ||u||_2`.
pub fn rayleigh_quotient(graph: &WeightedGraph, u: &VertexFunction) -> Result<f64> {
    let norm = u.norm2();
    if norm == 0.0 {
        return Err(Error::ZeroFunction);
    }
    Ok(j_w(graph, u)? / norm)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Saturation {
    /// `|∇_w d| = 1`: the edge lies on a shortest path to `Γ`.
    Saturated,
    Strict,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeSaturation {
    pub edge: usize,
    pub gradient: f64,
    pub class: Saturation,
    /// One endpoint is a shortest-path first step of the other.
    pub on_shortest_path: bool,
}

pub fn gradient_saturation(graph: &WeightedGraph, field: &DistanceField) -> Vec<EdgeSaturation> {
    let grad = weighted_gradient(graph, &field.d).expect("field computed on this graph");
    graph
        .edges()
        .iter()
        .enumerate()
        .map(|(e, edge)| {
            let gradient = grad.forward()[e];
            let class = if (gradient.abs() - 1.0).abs() <= SATURATION_TOL {
                Saturation::Saturated
            } else {
                Saturation::Strict
            };
            EdgeSaturation {
                edge: e,
                gradient,
                class,
                on_shortest_path: field.is_first_step(edge.a, edge.b)
                    || field.is_first_step(edge.b, edge.a),
            }
        })
        .collect()
}

/// Number of neighbours of `x` that begin a shortest path to `Γ`, computed as
/// `sum_{y ~ x} (∇⁻_w d)(x, y)`. Unit weights only.
pub fn shortest_path_count(
    graph: &WeightedGraph,
    field: &DistanceField,
    x: usize,
) -> Result<usize> {
    if !graph.has_unit_weights() {
        return Err(Error::NonUnitWeights);
    }
    if x >= graph.vertex_count() {
        return Err(Error::VertexOutOfRange {
            index: x,
            len: graph.vertex_count(),
        });
    }
    let minus = one_sided_gradient(graph, &field.d)?;
    let total: f64 = graph
        .neighbors(x)
        .iter()
        .map(|inc| minus.get(graph, x, inc.neighbor).unwrap_or(0.0))
        .sum();
    Ok(total.round() as usize)
}
