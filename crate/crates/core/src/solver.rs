//! Exact assignment solver for rectangular matrices.
//!
//! Shortest-augmenting-path with dual potentials, run natively on the
//! rectangular shape: one augmentation per row, each a Dijkstra-style scan
//! over columns using reduced costs. Maximization negates the costs and
//! minimizes, so there is a single code path; the duals are negated back so
//! the certificate reads in the requested direction.
//!
//! Comparisons on reduced costs are exact (`<`, no tolerance): tolerance in
//! path selection would make the returned assignment depend on summation
//! noise. Only the external certificate uses a tolerance. Among equal reduced
//! costs the lowest column index wins, so results are deterministic.

use crate::matrix::{AssignmentResult, CostMatrix, GeneralizedPermutation, Objective};
use crate::{Error, Result};

/// Dual variables and counters emitted by [`solve`]; a certificate of
/// optimality checkable in `O(n*m)` by [`verify_certificate`].
#[derive(Debug, Clone)]
pub struct SolverDiagnostics {
    /// Number of augmenting paths (equals the number of assigned rows).
    pub augmenting_paths: usize,
    /// Row potentials, one per row of the solved orientation.
    pub dual_row: Vec<f64>,
    /// Column potentials, one per column of the solved orientation.
    pub dual_col: Vec<f64>,
    /// Wall time of the solve in nanoseconds (not part of any report).
    pub runtime_ns: u64,
    /// Certificate tolerance: `1e-9 * max(1, max|entry|)`.
    pub tolerance: f64,
}

/// Certificate tolerance for a given matrix.
pub fn certificate_tolerance(matrix: &CostMatrix) -> f64 {
    1e-9 * matrix.max_abs_entry().max(1.0)
}

// Minimize over injective row->column maps; requires n <= m. Returns the
// assignment and dual potentials (u, v) with u[i] + v[j] <= cost[i][j]
// everywhere and equality on assigned pairs.
fn solve_min(matrix: &CostMatrix) -> (Vec<usize>, Vec<f64>, Vec<f64>) {
    let n = matrix.rows();
    let m = matrix.cols();
    debug_assert!(n <= m);

    // col_row[w] = row currently matched to column w; column m is virtual and
    // carries the row being inserted.
    let mut col_row: Vec<Option<usize>> = vec![None; m + 1];
    let mut u = vec![0.0; n];
    let mut v = vec![0.0; m + 1];

    let mut min_to = vec![f64::INFINITY; m + 1];
    let mut prev = vec![usize::MAX; m + 1];
    let mut in_tree = vec![false; m + 1];

    for row in 0..n {
        let mut w_cur = m;
        col_row[m] = Some(row);
        min_to[..=m].fill(f64::INFINITY);
        prev[..=m].fill(usize::MAX);
        in_tree[..=m].fill(false);

        while let Some(i) = col_row[w_cur] {
            in_tree[w_cur] = true;
            let mut delta = f64::INFINITY;
            let mut w_next = m;
            let row_i = matrix.row(i);
            let ui = u[i];
            for w in 0..m {
                if in_tree[w] {
                    continue;
                }
                let reduced = row_i[w] - ui - v[w];
                if reduced < min_to[w] {
                    min_to[w] = reduced;
                    prev[w] = w_cur;
                }
                if min_to[w] < delta {
                    delta = min_to[w];
                    w_next = w;
                }
            }
            for w in 0..=m {
                if in_tree[w] {
                    u[col_row[w].expect("tree column is matched")] += delta;
                    v[w] -= delta;
                } else {
                    min_to[w] -= delta;
                }
            }
            w_cur = w_next;
        }

        // Backtrack the augmenting path, shifting matches toward the virtual
        // column.
        while w_cur != m {
            let w_prev = prev[w_cur];
            col_row[w_cur] = col_row[w_prev];
            w_cur = w_prev;
        }
    }

    let mut row_col = vec![usize::MAX; n];
    for (w, &matched) in col_row[..m].iter().enumerate() {
        if let Some(i) = matched {
            row_col[i] = w;
        }
    }
    let v_cols = v[..m].to_vec();
    (row_col, u, v_cols)
}

/// Exact optimum of the assignment process over all injective assignments.
///
/// For `n > m` the matrix is transposed internally and the result is reported
/// in the transposed orientation: the assignment maps each column of `matrix`
/// to a distinct row, and the duals follow that orientation. The optimal
/// value is unaffected.
pub fn solve(
    matrix: &CostMatrix,
    objective: Objective,
) -> Result<(AssignmentResult, SolverDiagnostics)> {
    if matrix.rows() > matrix.cols() {
        return solve_oriented(&matrix.transpose(), objective);
    }
    solve_oriented(matrix, objective)
}

fn solve_oriented(
    matrix: &CostMatrix,
    objective: Objective,
) -> Result<(AssignmentResult, SolverDiagnostics)> {
    let start = std::time::Instant::now();
    let (row_col, u, v) = match objective {
        Objective::Min => solve_min(matrix),
        Objective::Max => {
            let (row_col, u, v) = solve_min(&matrix.negate());
            (
                row_col,
                u.iter().map(|x| -x).collect(),
                v.iter().map(|x| -x).collect(),
            )
        }
    };

    let mut value = 0.0;
    for (i, &j) in row_col.iter().enumerate() {
        value += matrix.entry(i, j);
    }
    let permutation = GeneralizedPermutation::new(row_col, matrix.cols())
        .expect("augmenting paths produce an injective assignment");

    let diagnostics = SolverDiagnostics {
        augmenting_paths: matrix.rows(),
        dual_row: u,
        dual_col: v,
        runtime_ns: start.elapsed().as_nanos() as u64,
        tolerance: certificate_tolerance(matrix),
    };
    Ok((
        AssignmentResult {
            value,
            permutation,
            objective,
        },
        diagnostics,
    ))
}

/// Checks the dual certificate: dual feasibility on every pair and
/// complementary slackness on the assigned pairs, within the stored
/// tolerance. A `true` answer proves the assignment's value is optimal.
///
/// Accepts results in either orientation (the solver transposes internally
/// when `n > m`); errors when the shapes fit neither.
pub fn verify_certificate(
    matrix: &CostMatrix,
    result: &AssignmentResult,
    diag: &SolverDiagnostics,
) -> Result<bool> {
    let fits_direct = diag.dual_row.len() == matrix.rows()
        && diag.dual_col.len() == matrix.cols()
        && result.permutation.len() == matrix.rows()
        && result.permutation.cols() == matrix.cols();
    if fits_direct {
        return Ok(certificate_holds(matrix, result, diag));
    }
    let fits_transposed = diag.dual_row.len() == matrix.cols()
        && diag.dual_col.len() == matrix.rows()
        && result.permutation.len() == matrix.cols()
        && result.permutation.cols() == matrix.rows();
    if fits_transposed {
        return Ok(certificate_holds(&matrix.transpose(), result, diag));
    }
    Err(Error::DimensionMismatch(format!(
        "certificate shapes (duals {}x{}, assignment {}->{}) fit neither {}x{} nor its transpose",
        diag.dual_row.len(),
        diag.dual_col.len(),
        result.permutation.len(),
        result.permutation.cols(),
        matrix.rows(),
        matrix.cols()
    )))
}

fn certificate_holds(
    matrix: &CostMatrix,
    result: &AssignmentResult,
    diag: &SolverDiagnostics,
) -> bool {
    let tol = diag.tolerance;
    let n = matrix.rows();

    // Dual feasibility on all pairs; direction depends on the objective.
    for i in 0..n {
        let row = matrix.row(i);
        let ui = diag.dual_row[i];
        for (&entry, &vj) in row.iter().zip(&diag.dual_col) {
            let slack = ui + vj - entry;
            let feasible = match result.objective {
                Objective::Max => slack >= -tol,
                Objective::Min => slack <= tol,
            };
            if !feasible {
                return false;
            }
        }
    }

    // Complementary slackness and value consistency on the assignment.
    let mut value = 0.0;
    for i in 0..n {
        let j = result.permutation.column(i);
        let entry = matrix.entry(i, j);
        if (diag.dual_row[i] + diag.dual_col[j] - entry).abs() > tol {
            return false;
        }
        value += entry;
    }
    (value - result.value).abs() <= tol
}
