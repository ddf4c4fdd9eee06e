//! Self-contained dense two-phase simplex for the witness search.
//!
//! Minimizes c^T x subject to A x = b, x >= 0 in binary64. Bland's rule
//! keeps the pivot sequence finite and deterministic; a hard iteration cap
//! turns any residual degeneracy into an explicit numerical failure that
//! callers report as "unknown", never as "contained".

#[derive(Debug, Clone)]
pub struct StandardLp {
    /// Dense constraint rows.
    pub a: Vec<Vec<f64>>,
    /// Right-hand sides (any sign; rows are normalized internally).
    pub b: Vec<f64>,
    /// Objective coefficients.
    pub c: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { objective: f64, x: Vec<f64> },
    Infeasible,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LpFailure {
    #[error("simplex exceeded the pivot cap")]
    IterationLimit,
    #[error("objective is unbounded below")]
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<f64>>, // m x (n_total + 1), last column is the rhs
    basis: Vec<usize>,
    n_total: usize,
    tol: f64,
}

impl Tableau {
    fn rhs(&self, i: usize) -> f64 {
        self.rows[i][self.n_total]
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let piv = self.rows[row][col];
        let inv = 1.0 / piv;
        for v in self.rows[row].iter_mut() {
            *v *= inv;
        }
        let pivot_row = self.rows[row].clone();
        for (i, r) in self.rows.iter_mut().enumerate() {
            if i == row {
                continue;
            }
            let factor = r[col];
            if factor == 0.0 {
                continue;
            }
            for (v, p) in r.iter_mut().zip(&pivot_row) {
                *v -= factor * p;
            }
        }
        self.basis[row] = col;
    }

    /// Reduced-cost row for objective `c` under the current basis.
    fn reduced_costs(&self, c: &[f64]) -> (Vec<f64>, f64) {
        let m = self.rows.len();
        let mut r = c.to_vec();
        let mut obj = 0.0;
        for i in 0..m {
            let cb = c[self.basis[i]];
            if cb == 0.0 {
                continue;
            }
            obj += cb * self.rhs(i);
            for (rj, aij) in r.iter_mut().zip(&self.rows[i]) {
                *rj -= cb * aij;
            }
        }
        (r, obj)
    }

    /// Run simplex on objective `c`, restricting entering variables to
    /// indices below `enter_limit`. Returns the objective value.
    fn optimize(
        &mut self,
        c: &[f64],
        enter_limit: usize,
        max_iter: &mut usize,
    ) -> Result<f64, LpFailure> {
        loop {
            let (r, obj) = self.reduced_costs(c);
            // Bland: smallest index with a meaningfully negative reduced cost.
            let entering = (0..enter_limit).find(|&j| r[j] < -self.tol);
            let Some(col) = entering else {
                return Ok(obj);
            };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.rows.len() {
                let a = self.rows[i][col];
                if a > self.tol {
                    let ratio = self.rhs(i) / a;
                    match leave {
                        None => leave = Some((i, ratio)),
                        Some((bi, br)) => {
                            if ratio < br - self.tol
                                || ((ratio - br).abs() <= self.tol
                                    && self.basis[i] < self.basis[bi])
                            {
                                leave = Some((i, ratio));
                            }
                        }
                    }
                }
            }
            let Some((row, _)) = leave else {
                return Err(LpFailure::Unbounded);
            };
            if *max_iter == 0 {
                return Err(LpFailure::IterationLimit);
            }
            *max_iter -= 1;
            self.pivot(row, col);
        }
    }
}

/// Solve the LP. `tol` is the pivot/feasibility tolerance and `max_iter`
/// caps the total pivot count across both phases.
pub fn solve(lp: &StandardLp, tol: f64, max_iter: usize) -> Result<LpOutcome, LpFailure> {
    let m = lp.a.len();
    let n = lp.c.len();
    debug_assert!(lp.a.iter().all(|row| row.len() == n));
    debug_assert_eq!(lp.b.len(), m);

    // Build [A | I_artificial | b] with the rhs normalized non-negative.
    let n_total = n + m;
    let mut rows = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = vec![0.0; n_total + 1];
        let flip = if lp.b[i] < 0.0 { -1.0 } else { 1.0 };
        for (rj, aij) in row.iter_mut().zip(&lp.a[i]) {
            *rj = flip * aij;
        }
        row[n + i] = 1.0;
        row[n_total] = flip * lp.b[i];
        rows.push(row);
    }
    let mut t = Tableau {
        rows,
        basis: (n..n_total).collect(),
        n_total,
        tol,
    };
    let mut budget = max_iter;

    // Phase 1: minimize the artificial sum.
    let mut c1 = vec![0.0; n_total];
    c1[n..].fill(1.0);
    let art_sum = t.optimize(&c1, n_total, &mut budget)?;
    // Scale feasibility tolerance with the problem data.
    let scale = 1.0 + lp.b.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    if art_sum > tol * scale * (m as f64 + 1.0) {
        return Ok(LpOutcome::Infeasible);
    }
    // Drive residual artificials out of the basis; rows with no usable
    // pivot are redundant and get dropped.
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= n {
            if let Some(col) = (0..n).find(|&j| t.rows[i][j].abs() > tol) {
                t.pivot(i, col);
                i += 1;
            } else {
                t.rows.remove(i);
                t.basis.remove(i);
            }
        } else {
            i += 1;
        }
    }

    // Phase 2 over the original variables only.
    let mut c2 = vec![0.0; n_total];
    c2[..n].copy_from_slice(&lp.c);
    let objective = t.optimize(&c2, n, &mut budget)?;

    let mut x = vec![0.0; n];
    for (i, &b) in t.basis.iter().enumerate() {
        if b < n {
            x[b] = t.rhs(i);
        }
    }
    Ok(LpOutcome::Optimal { objective, x })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn solve_ok(lp: &StandardLp) -> (f64, Vec<f64>) {
        match solve(lp, 1e-9, 10_000).unwrap() {
            LpOutcome::Optimal { objective, x } => (objective, x),
            other => panic!("expected optimum, got {other:?}"),
        }
    }

    #[test]
    fn simple_equality_problem() {
        // min x + y s.t. x + y + z = 2, x - y = 0
        let lp = StandardLp {
            a: vec![vec![1.0, 1.0, 1.0], vec![1.0, -1.0, 0.0]],
            b: vec![2.0, 0.0],
            c: vec![1.0, 1.0, 0.0],
        };
        let (obj, x) = solve_ok(&lp);
        assert!(obj.abs() < 1e-9);
        assert!((x[0] + x[1] + x[2] - 2.0).abs() < 1e-9);
    }

    #[test]
    fn binding_optimum() {
        // min s s.t. x = 1, x <= s  (as x - s + slack = 0)
        let lp = StandardLp {
            a: vec![vec![1.0, 0.0, 0.0], vec![1.0, -1.0, 1.0]],
            b: vec![1.0, 0.0],
            c: vec![0.0, 1.0, 0.0],
        };
        let (obj, _) = solve_ok(&lp);
        assert!((obj - 1.0).abs() < 1e-9);
    }

    #[test]
    fn infeasible_detected() {
        // x + y = 1 and x + y = 3 cannot both hold
        let lp = StandardLp {
            a: vec![vec![1.0, 1.0], vec![1.0, 1.0]],
            b: vec![1.0, 3.0],
            c: vec![1.0, 0.0],
        };
        assert_eq!(solve(&lp, 1e-9, 10_000).unwrap(), LpOutcome::Infeasible);
    }

    #[test]
    fn negative_rhs_rows_normalize() {
        // x - y = -2 with x, y >= 0: y = x + 2
        let lp = StandardLp {
            a: vec![vec![1.0, -1.0]],
            b: vec![-2.0],
            c: vec![1.0, 1.0],
        };
        let (obj, x) = solve_ok(&lp);
        assert!((obj - 2.0).abs() < 1e-9);
        assert!((x[1] - x[0] - 2.0).abs() < 1e-9);
    }

    #[test]
    fn unbounded_reported() {
        // min -x s.t. x - y = 0: both can grow forever
        let lp = StandardLp {
            a: vec![vec![1.0, -1.0]],
            b: vec![0.0],
            c: vec![-1.0, 0.0],
        };
        assert_eq!(solve(&lp, 1e-9, 10_000), Err(LpFailure::Unbounded));
    }

    #[test]
    fn redundant_rows_are_dropped() {
        // duplicated constraint keeps an artificial basic at zero
        let lp = StandardLp {
            a: vec![vec![1.0, 1.0], vec![1.0, 1.0]],
            b: vec![1.0, 1.0],
            c: vec![1.0, 2.0],
        };
        let (obj, x) = solve_ok(&lp);
        assert!((obj - 1.0).abs() < 1e-9);
        assert!((x[0] - 1.0).abs() < 1e-9);
    }
}
