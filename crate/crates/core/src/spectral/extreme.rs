//! Extreme points of the unit ball `{u ∈ H_0(V) : J_w(u) ≤ 1}`.
//!
//! `u` is extreme exactly when every vertex is joined to `Γ` by a path whose
//! edges all carry `|∇_w u| = 1`.

use std::collections::VecDeque;

use crate::calculus::{j_w, weighted_gradient};
use crate::distance::graph_distance;
use crate::error::{Error, Result};
use crate::graph::{VertexFunction, WeightedGraph};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExtremeVerdict {
    Extreme,
    NotExtreme {
        /// Unreachable vertex closest to `Γ` in graph distance, ties by index.
        witness: usize,
        /// Every vertex without a saturated path to `Γ`, ascending.
        unreachable: Vec<usize>,
    },
}

impl ExtremeVerdict {
    pub fn is_extreme(&self) -> bool {
        matches!(self, ExtremeVerdict::Extreme)
    }
}

pub fn extreme_point_check(
    graph: &WeightedGraph,
    u: &VertexFunction,
    tol: f64,
) -> Result<ExtremeVerdict> {
    let j = j_w(graph, u)?;
    if j.is_infinite() {
        return Err(Error::BoundaryNotZero);
    }
    if j > 1.0 + tol {
        return Err(Error::NotInUnitBall(j));
    }
    let grad = weighted_gradient(graph, u)?;
    let saturated: Vec<bool> = grad
        .forward()
        .iter()
        .map(|g| (g.abs() - 1.0).abs() <= tol)
        .collect();

    let n = graph.vertex_count();
    let mut reached = vec![false; n];
    let mut queue = VecDeque::new();
    for &x in graph.boundary() {
        reached[x] = true;
        queue.push_back(x);
    }
    while let Some(x) = queue.pop_front() {
        for inc in graph.neighbors(x) {
            if saturated[inc.edge] && !reached[inc.neighbor] {
                reached[inc.neighbor] = true;
                queue.push_back(inc.neighbor);
            }
        }
    }

    let unreachable: Vec<usize> = (0..n).filter(|&x| !reached[x]).collect();
    if unreachable.is_empty() {
        return Ok(ExtremeVerdict::Extreme);
    }
    let d = graph_distance(graph).d;
    let witness = *unreachable
        .iter()
        .min_by(|&&x, &&y| d[x].total_cmp(&d[y]).then(x.cmp(&y)))
        .expect("nonempty");
    Ok(ExtremeVerdict::NotExtreme {
        witness,
        unreachable,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::path_graph;

    #[test]
    fn distance_on_p4_is_extreme() {
        let g = path_graph(4).unwrap();
        let v = extreme_point_check(&g, &vec![0.0, 1.0, 1.0, 0.0].into(), 1e-12).unwrap();
        assert_eq!(v, ExtremeVerdict::Extreme);
    }

    #[test]
    fn p5_plateau_is_not_extreme() {
        let g = path_graph(5).unwrap();
        let v = extreme_point_check(&g, &vec![0.0, 1.0, 1.0, 0.0, 0.0].into(), 1e-12).unwrap();
        assert_eq!(
            v,
            ExtremeVerdict::NotExtreme {
                witness: 3,
                unreachable: vec![2, 3]
            }
        );
    }

    #[test]
    fn zero_is_not_extreme() {
        let g = path_graph(4).unwrap();
        let v = extreme_point_check(&g, &VertexFunction::zeros(4), 1e-12).unwrap();
        assert!(!v.is_extreme());
    }

    #[test]
    fn outside_unit_ball() {
        let g = path_graph(4).unwrap();
        let out = extreme_point_check(&g, &vec![0.0, 2.0, 2.0, 0.0].into(), 1e-9);
        assert_eq!(out, Err(Error::NotInUnitBall(2.0)));
    }
}
