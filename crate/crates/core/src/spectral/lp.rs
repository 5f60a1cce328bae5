//! Dense phase-one simplex for small feasibility problems `A x = b, x ≥ 0`.

const PIVOT_EPS: f64 = 1e-11;

#[derive(Debug, Clone, PartialEq)]
pub enum Feasibility {
    Feasible(Vec<f64>),
    /// `residual` is the optimal phase-one objective `min ||A x - b||_1` over `x ≥ 0`.
    Infeasible {
        residual: f64,
    },
}

/// Minimises the sum of artificial variables with Bland's rule. The problem is
/// declared feasible when the phase-one optimum is at most
/// `tol * (1 + ||b||_1)`.
pub fn find_feasible_point(a: &[Vec<f64>], b: &[f64], tol: f64) -> Feasibility {
    let rows = a.len();
    assert_eq!(rows, b.len());
    let cols = a.first().map_or(0, Vec::len);
    let width = cols + rows + 1;
    let rhs = width - 1;

    let mut tableau = vec![vec![0.0; width]; rows];
    for (i, row) in a.iter().enumerate() {
        assert_eq!(row.len(), cols);
        let sign = if b[i] < 0.0 { -1.0 } else { 1.0 };
        for (j, &v) in row.iter().enumerate() {
            tableau[i][j] = sign * v;
        }
        tableau[i][cols + i] = 1.0;
        tableau[i][rhs] = sign * b[i];
    }
    let mut basis: Vec<usize> = (cols..cols + rows).collect();

    // reduced costs of the phase-one objective, last entry is -objective
    let mut cost = vec![0.0; width];
    for row in &tableau {
        for j in 0..cols {
            cost[j] -= row[j];
        }
        cost[rhs] -= row[rhs];
    }

    loop {
        let entering = (0..cols + rows).find(|&j| cost[j] < -PIVOT_EPS);
        let Some(j) = entering else { break };

        let mut leaving: Option<(usize, f64)> = None;
        for (i, row) in tableau.iter().enumerate() {
            if row[j] > PIVOT_EPS {
                let ratio = row[rhs] / row[j];
                let better = match leaving {
                    None => true,
                    Some((k, best)) => {
                        ratio < best - 1e-15 || (ratio <= best + 1e-15 && basis[i] < basis[k])
                    }
                };
                if better {
                    leaving = Some((i, ratio));
                }
            }
        }
        // phase one is bounded below by zero, so a column with no positive
        // entry can only carry a rounding-level negative cost
        let Some((pivot_row, _)) = leaving else {
            cost[j] = 0.0;
            continue;
        };

        let pivot = tableau[pivot_row][j];
        for v in tableau[pivot_row].iter_mut() {
            *v /= pivot;
        }
        let pivot_values = tableau[pivot_row].clone();
        for (i, row) in tableau.iter_mut().enumerate() {
            if i != pivot_row && row[j] != 0.0 {
                let factor = row[j];
                for (v, p) in row.iter_mut().zip(&pivot_values) {
                    *v -= factor * p;
                }
            }
        }
        let factor = cost[j];
        for (v, p) in cost.iter_mut().zip(&pivot_values) {
            *v -= factor * p;
        }
        basis[pivot_row] = j;
    }

    let mut x = vec![0.0; cols];
    for (i, &var) in basis.iter().enumerate() {
        if var < cols {
            x[var] = tableau[i][rhs].max(0.0);
        }
    }
    let residual: f64 = a
        .iter()
        .zip(b)
        .map(|(row, bi)| (row.iter().zip(&x).map(|(r, xi)| r * xi).sum::<f64>() - bi).abs())
        .sum();
    let scale = 1.0 + b.iter().map(|v| v.abs()).sum::<f64>();
    if residual <= tol * scale {
        Feasibility::Feasible(x)
    } else {
        Feasibility::Infeasible { residual }
    }
}
