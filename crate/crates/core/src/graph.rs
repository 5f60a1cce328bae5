//! Finite weighted graphs with a Dirichlet boundary, and the vertex/edge
//! function spaces living on them.
//!
//! Edges are stored once as unordered pairs `(a, b)` with `a < b`; every
//! stored edge stands for the two ordered pairs `(a, b)` and `(b, a)` with the
//! same weight. Edge functions keep one value per orientation.

use std::collections::HashMap;
use std::ops::Index;

use crate::error::{Error, Result};

/// An undirected edge, `a < b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub weight: f64,
}

impl Edge {
    /// Edge length `w^{-1/2}` used by the graph metric.
    pub fn length(&self) -> f64 {
        1.0 / self.weight.sqrt()
    }

    pub fn other(&self, x: usize) -> usize {
        if x == self.a {
            self.b
        } else {
            self.a
        }
    }
}

/// One entry of a vertex's adjacency list.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Incidence {
    pub neighbor: usize,
    pub edge: usize,
}

#[derive(Debug, Clone)]
pub struct WeightedGraph {
    edges: Vec<Edge>,
    adjacency: Vec<Vec<Incidence>>,
    lookup: HashMap<(usize, usize), usize>,
    on_boundary: Vec<bool>,
    boundary: Vec<usize>,
}

impl WeightedGraph {
    /// Builds a graph on vertices `0..vertex_count`.
    ///
    /// Each `(i, j, w)` adds the symmetric pair `i ~ j`. Repeating an edge with
    /// the same weight is accepted, with a different weight it is rejected.
    pub fn new(
        vertex_count: usize,
        weighted_edges: &[(usize, usize, f64)],
        boundary: &[usize],
    ) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::EmptyGraph);
        }
        let check = |index: usize| {
            if index >= vertex_count {
                Err(Error::VertexOutOfRange {
                    index,
                    len: vertex_count,
                })
            } else {
                Ok(())
            }
        };

        let mut edges = Vec::with_capacity(weighted_edges.len());
        let mut lookup = HashMap::with_capacity(weighted_edges.len());
        for &(i, j, w) in weighted_edges {
            check(i)?;
            check(j)?;
            if i == j {
                return Err(Error::SelfLoop(i));
            }
            if !(w > 0.0) || !w.is_finite() {
                return Err(Error::NonpositiveWeight(i, j, w));
            }
            let key = (i.min(j), i.max(j));
            match lookup.get(&key) {
                Some(&e) => {
                    let existing: &Edge = &edges[e];
                    if existing.weight != w {
                        return Err(Error::ConflictingEdge(key.0, key.1));
                    }
                }
                None => {
                    lookup.insert(key, edges.len());
                    edges.push(Edge {
                        a: key.0,
                        b: key.1,
                        weight: w,
                    });
                }
            }
        }

        let mut adjacency = vec![Vec::new(); vertex_count];
        for (e, edge) in edges.iter().enumerate() {
            adjacency[edge.a].push(Incidence {
                neighbor: edge.b,
                edge: e,
            });
            adjacency[edge.b].push(Incidence {
                neighbor: edge.a,
                edge: e,
            });
        }
        for list in &mut adjacency {
            list.sort_by_key(|inc| inc.neighbor);
        }

        let mut on_boundary = vec![false; vertex_count];
        for &x in boundary {
            check(x)?;
            on_boundary[x] = true;
        }
        let boundary: Vec<usize> = (0..vertex_count).filter(|&x| on_boundary[x]).collect();
        if boundary.is_empty() {
            return Err(Error::EmptyBoundary);
        }
        if boundary.len() == vertex_count {
            return Err(Error::BoundaryIsEverything);
        }

        let graph = WeightedGraph {
            edges,
            adjacency,
            lookup,
            on_boundary,
            boundary,
        };
        if let Some(unreached) = graph.first_unreachable() {
            return Err(Error::DisconnectedGraph(unreached));
        }
        Ok(graph)
    }

    fn first_unreachable(&self) -> Option<usize> {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for inc in &self.adjacency[x] {
                if !seen[inc.neighbor] {
                    seen[inc.neighbor] = true;
                    stack.push(inc.neighbor);
                }
            }
        }
        seen.iter().position(|s| !s)
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn neighbors(&self, x: usize) -> &[Incidence] {
        &self.adjacency[x]
    }

    pub fn edge_index(&self, x: usize, y: usize) -> Option<usize> {
        self.lookup.get(&(x.min(y), x.max(y))).copied()
    }

    pub fn weight(&self, x: usize, y: usize) -> Option<f64> {
        self.edge_index(x, y).map(|e| self.edges[e].weight)
    }

    pub fn is_boundary(&self, x: usize) -> bool {
        self.on_boundary[x]
    }

    /// Boundary vertices in increasing order.
    pub fn boundary(&self) -> &[usize] {
        &self.boundary
    }

    pub fn interior(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.vertex_count()).filter(move |&x| !self.on_boundary[x])
    }

    pub fn has_unit_weights(&self) -> bool {
        self.edges.iter().all(|e| e.weight == 1.0)
    }

    /// Largest weighted degree `max_x sum_y w(x, y)`.
    pub fn max_weighted_degree(&self) -> f64 {
        self.adjacency
            .iter()
            .map(|list| {
                list.iter()
                    .map(|inc| self.edges[inc.edge].weight)
                    .sum::<f64>()
            })
            .fold(0.0, f64::max)
    }

    pub(crate) fn check_len(&self, len: usize) -> Result<()> {
        if len != self.vertex_count() {
            return Err(Error::DomainMismatch {
                expected: self.vertex_count(),
                got: len,
            });
        }
        Ok(())
    }
}

/// `p`-norm of a finite family of values; `p = f64::INFINITY` gives the max norm.
pub fn norm_p(values: impl Iterator<Item = f64>, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidP(p));
    }
    if p == f64::INFINITY {
        return Ok(values.map(f64::abs).fold(0.0, f64::max));
    }
    if p == 1.0 {
        return Ok(values.map(f64::abs).sum());
    }
    if p == 2.0 {
        return Ok(values.map(|v| v * v).sum::<f64>().sqrt());
    }
    Ok(values.map(|v| v.abs().powf(p)).sum::<f64>().powf(1.0 / p))
}

/// A real-valued function on the vertices of a graph.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexFunction(Vec<f64>);

impl VertexFunction {
    pub fn new(values: Vec<f64>) -> Self {
        VertexFunction(values)
    }

    pub fn zeros(n: usize) -> Self {
        VertexFunction(vec![0.0; n])
    }

    pub fn constant(n: usize, c: f64) -> Self {
        VertexFunction(vec![c; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.0
    }

    pub fn into_values(self) -> Vec<f64> {
        self.0
    }

    pub fn inner(&self, other: &VertexFunction) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self, p: f64) -> Result<f64> {
        norm_p(self.0.iter().copied(), p)
    }

    pub fn norm2(&self) -> f64 {
        self.0.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn scaled(&self, c: f64) -> Self {
        VertexFunction(self.0.iter().map(|v| c * v).collect())
    }

    pub fn max_abs_diff(&self, other: &VertexFunction) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&v| v == 0.0)
    }
}

impl Index<usize> for VertexFunction {
    type Output = f64;

    fn index(&self, x: usize) -> &f64 {
        &self.0[x]
    }
}

impl From<Vec<f64>> for VertexFunction {
    fn from(values: Vec<f64>) -> Self {
        VertexFunction(values)
    }
}

/// A real-valued function on the ordered edge pairs of a graph.
///
/// `forward[e]` holds `q(a, b)` and `backward[e]` holds `q(b, a)` for the
/// stored edge `e = (a, b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeFunction {
    forward: Vec<f64>,
    backward: Vec<f64>,
    antisymmetric: bool,
}

impl EdgeFunction {
    pub fn zeros(graph: &WeightedGraph) -> Self {
        let m = graph.edge_count();
        EdgeFunction {
            forward: vec![0.0; m],
            backward: vec![0.0; m],
            antisymmetric: true,
        }
    }

    /// Antisymmetric edge function from its values on the stored orientations.
    pub fn antisymmetric(forward: Vec<f64>) -> Self {
        let backward = forward.iter().map(|v| -v).collect();
        EdgeFunction {
            forward,
            backward,
            antisymmetric: true,
        }
    }

    pub fn from_orientations(forward: Vec<f64>, backward: Vec<f64>) -> Self {
        assert_eq!(forward.len(), backward.len());
        EdgeFunction {
            forward,
            backward,
            antisymmetric: false,
        }
    }

    /// Builds an edge function from `(x, y, value)` triples on ordered pairs.
    /// When `antisymmetric` is set, each triple also fixes `q(y, x) = -value`.
    pub fn from_triples(
        graph: &WeightedGraph,
        triples: &[(usize, usize, f64)],
        antisymmetric: bool,
    ) -> Result<Self> {
        let mut q = EdgeFunction::zeros(graph);
        q.antisymmetric = antisymmetric;
        for &(x, y, v) in triples {
            q.set(graph, x, y, v)?;
        }
        Ok(q)
    }

    pub fn edge_count(&self) -> usize {
        self.forward.len()
    }

    pub fn forward(&self) -> &[f64] {
        &self.forward
    }

    pub fn backward(&self) -> &[f64] {
        &self.backward
    }

    pub fn antisymmetric_flag(&self) -> bool {
        self.antisymmetric
    }

    /// Value on the ordered pair `(x, y)`, or `None` when `x` and `y` are not adjacent.
    pub fn get(&self, graph: &WeightedGraph, x: usize, y: usize) -> Option<f64> {
        let e = graph.edge_index(x, y)?;
        Some(self.oriented(graph.edge(e), e, x))
    }

    pub(crate) fn oriented(&self, edge: &Edge, e: usize, from: usize) -> f64 {
        if from == edge.a {
            self.forward[e]
        } else {
            self.backward[e]
        }
    }

    pub fn set(&mut self, graph: &WeightedGraph, x: usize, y: usize, value: f64) -> Result<()> {
        let e = graph.edge_index(x, y).ok_or(Error::VertexOutOfRange {
            index: y,
            len: graph.vertex_count(),
        })?;
        let forward = x == graph.edge(e).a;
        let (same, opposite) = if forward {
            (&mut self.forward, &mut self.backward)
        } else {
            (&mut self.backward, &mut self.forward)
        };
        same[e] = value;
        if self.antisymmetric {
            opposite[e] = -value;
        }
        Ok(())
    }

    /// All values, both orientations of every edge.
    pub fn ordered_values(&self) -> impl Iterator<Item = f64> + '_ {
        self.forward.iter().chain(&self.backward).copied()
    }

    /// `(x, y, q(x, y))` over every ordered pair.
    pub fn ordered_triples<'a>(
        &'a self,
        graph: &'a WeightedGraph,
    ) -> impl Iterator<Item = (usize, usize, f64)> + 'a {
        graph.edges().iter().enumerate().flat_map(move |(e, edge)| {
            [
                (edge.a, edge.b, self.forward[e]),
                (edge.b, edge.a, self.backward[e]),
            ]
        })
    }

    /// Inner product summing over ordered pairs.
    pub fn inner(&self, other: &EdgeFunction) -> f64 {
        self.ordered_values()
            .zip(other.ordered_values())
            .map(|(a, b)| a * b)
            .sum()
    }

    /// `p`-norm over ordered pairs; each undirected edge contributes twice.
    pub fn norm(&self, p: f64) -> Result<f64> {
        norm_p(self.ordered_values(), p)
    }

    /// Largest `|q(x, y) + q(y, x)|`.
    pub fn antisymmetry_defect(&self) -> f64 {
        self.forward
            .iter()
            .zip(&self.backward)
            .map(|(f, b)| (f + b).abs())
            .fold(0.0, f64::max)
    }
}
