//! Graph generators used by the CLI and the test suites.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::graph::WeightedGraph;

/// Path `x_0 ~ x_1 ~ ... ~ x_{n-1}` with unit weights and `Γ = {x_0, x_{n-1}}`.
pub fn path_graph(n: usize) -> Result<WeightedGraph> {
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i, 1.0)).collect();
    let boundary = if n > 1 { vec![0, n - 1] } else { vec![0] };
    WeightedGraph::new(n, &edges, &boundary)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridBoundary {
    /// Every vertex in the first or last row or column.
    Ring,
    /// The four corner vertices.
    Corners,
}

/// `width × height` 4-neighbour grid with unit weights; vertex `(i, j)` has id `j * width + i`.
pub fn grid_graph(width: usize, height: usize, boundary: GridBoundary) -> Result<WeightedGraph> {
    let id = |i: usize, j: usize| j * width + i;
    let mut edges = Vec::new();
    for j in 0..height {
        for i in 0..width {
            if i + 1 < width {
                edges.push((id(i, j), id(i + 1, j), 1.0));
            }
            if j + 1 < height {
                edges.push((id(i, j), id(i, j + 1), 1.0));
            }
        }
    }
    let gamma: Vec<usize> = match boundary {
        GridBoundary::Ring => (0..height)
            .flat_map(|j| (0..width).map(move |i| (i, j)))
            .filter(|&(i, j)| i == 0 || j == 0 || i + 1 == width || j + 1 == height)
            .map(|(i, j)| id(i, j))
            .collect(),
        GridBoundary::Corners => vec![
            id(0, 0),
            id(width - 1, 0),
            id(0, height - 1),
            id(width - 1, height - 1),
        ],
    };
    WeightedGraph::new(width * height, &edges, &gamma)
}

/// Random connected graph: a random spanning tree plus `extra_edges` further
/// edges (duplicates skipped), weights uniform in `[0.25, 4]`, and a random
/// boundary of between one and `n - 1` vertices.
pub fn random_connected(n: usize, extra_edges: usize, seed: u64) -> Result<WeightedGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_connected_with(n, extra_edges, &mut rng)
}

pub fn random_connected_with<R: Rng>(
    n: usize,
    extra_edges: usize,
    rng: &mut R,
) -> Result<WeightedGraph> {
    assert!(n >= 2, "random graph needs at least two vertices");
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut pairs = std::collections::BTreeSet::new();
    let mut edges = Vec::new();
    let mut push = |a: usize, b: usize, w: f64, edges: &mut Vec<(usize, usize, f64)>| {
        if pairs.insert((a.min(b), a.max(b))) {
            edges.push((a, b, w));
        }
    };
    for k in 1..n {
        let parent = order[rng.gen_range(0..k)];
        let w = rng.gen_range(0.25..4.0);
        push(order[k], parent, w, &mut edges);
    }
    for _ in 0..extra_edges {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a != b {
            let w = rng.gen_range(0.25..4.0);
            push(a, b, w, &mut edges);
        }
    }
    let boundary_size = rng.gen_range(1..n);
    let mut ids: Vec<usize> = (0..n).collect();
    ids.shuffle(rng);
    WeightedGraph::new(n, &edges, &ids[..boundary_size])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_ring_sizes() {
        let g = grid_graph(16, 16, GridBoundary::Ring).unwrap();
        assert_eq!(g.vertex_count(), 256);
        assert_eq!(g.edge_count(), 2 * 16 * 15);
        assert_eq!(g.boundary().len(), 60);
        assert_eq!(g.interior().count(), 196);
    }

    #[test]
    fn random_graphs_are_valid_and_reproducible() {
        for seed in 0..50 {
            let a = random_connected(7, 5, seed).unwrap();
            let b = random_connected(7, 5, seed).unwrap();
            assert_eq!(a.edges(), b.edges());
            assert_eq!(a.boundary(), b.boundary());
            assert!(a.boundary().len() < 7);
        }
    }
}
