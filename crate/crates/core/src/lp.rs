//! Dense simplex solver for small linear programs with free variables.
//!
//! Solves `min c.x subject to A x <= b` with `x` free and few variables by
//! running a two-phase tableau simplex (Bland's rule) on the dual
//! `min b.y subject to A^T y = -c, y >= 0`. The optimal dual basis names the
//! active primal constraints; the primal point solves `A_B x = b_B`.

use crate::error::{GeomError, Result};

const PIVOT_EPS: f64 = 1e-12;
const MAX_ITERATIONS: usize = 100_000;

#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    objective: Vec<f64>,
    rows: Vec<Vec<f64>>,
    rhs: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub value: f64,
    /// Indices of the constraints in the optimal basis.
    pub active: Vec<usize>,
    pub iterations: usize,
}

impl LinearProgram {
    pub fn new(objective: Vec<f64>) -> Self {
        LinearProgram { objective, rows: Vec::new(), rhs: Vec::new() }
    }

    /// Adds the constraint `row . x <= bound`.
    pub fn constrain(&mut self, row: Vec<f64>, bound: f64) {
        assert_eq!(row.len(), self.objective.len(), "constraint width");
        self.rows.push(row);
        self.rhs.push(bound);
    }

    pub fn objective(&self) -> &[f64] {
        &self.objective
    }

    /// Same constraints, different objective.
    pub fn with_objective(&self, objective: Vec<f64>) -> Self {
        assert_eq!(objective.len(), self.objective.len(), "objective width");
        LinearProgram { objective, rows: self.rows.clone(), rhs: self.rhs.clone() }
    }

    pub fn dim(&self) -> usize {
        self.objective.len()
    }

    pub fn max_violation(&self, x: &[f64]) -> f64 {
        self.rows.iter().zip(&self.rhs).map(|(row, b)| dot(row, x) - b).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn solve(&self) -> Result<LpSolution> {
        let d = self.dim();
        let m = self.rows.len();
        if m < d {
            return Err(GeomError::Solver(format!("{m} constraints cannot bound {d} free variables")));
        }
        // Tableau rows: sum_j A[j][i] y_j + art_i = -c_i (sign-normalized).
        let width = m + d + 1;
        let mut tab = vec![vec![0.0; width]; d];
        for (i, row) in tab.iter_mut().enumerate() {
            let sign = if -self.objective[i] < 0.0 { -1.0 } else { 1.0 };
            for j in 0..m {
                row[j] = sign * self.rows[j][i];
            }
            row[m + i] = 1.0;
            row[width - 1] = sign * -self.objective[i];
        }
        let mut basis: Vec<usize> = (m..m + d).collect();
        let mut iterations = 0;

        // phase 1: drive artificials out
        let phase1: Vec<f64> = (0..m + d).map(|j| if j >= m { 1.0 } else { 0.0 }).collect();
        iterations += run_simplex(&mut tab, &mut basis, &phase1, m + d)?;
        let infeasibility: f64 = basis.iter().zip(&tab).filter(|(b, _)| **b >= m).map(|(_, r)| r[width - 1]).sum();
        let scale = 1.0 + self.objective.iter().fold(0.0_f64, |a, c| a.max(c.abs()));
        if infeasibility > 1e-9 * scale {
            return Err(GeomError::Solver("primal problem is unbounded".into()));
        }
        for i in 0..d {
            if basis[i] >= m {
                let col = (0..m)
                    .find(|&j| tab[i][j].abs() > 1e-9)
                    .ok_or_else(|| GeomError::Solver("constraint matrix is rank deficient".into()))?;
                pivot(&mut tab, &mut basis, i, col);
            }
        }

        // phase 2 over the original columns only
        let mut phase2 = self.rhs.clone();
        phase2.extend(std::iter::repeat_n(f64::INFINITY, d));
        iterations += run_simplex(&mut tab, &mut basis, &phase2, m)?;

        let active = basis.clone();
        let a: Vec<Vec<f64>> = active.iter().map(|&j| self.rows[j].clone()).collect();
        let b: Vec<f64> = active.iter().map(|&j| self.rhs[j]).collect();
        let x = solve_dense(a, b).ok_or_else(|| GeomError::Solver("singular optimal basis".into()))?;
        let value = dot(&self.objective, &x);
        Ok(LpSolution { x, value, active, iterations })
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn pivot(tab: &mut [Vec<f64>], basis: &mut [usize], row: usize, col: usize) {
    let p = tab[row][col];
    tab[row].iter_mut().for_each(|v| *v /= p);
    let pivot_row = tab[row].clone();
    for (i, r) in tab.iter_mut().enumerate() {
        if i != row {
            let f = r[col];
            if f != 0.0 {
                r.iter_mut().zip(&pivot_row).for_each(|(v, pv)| *v -= f * pv);
            }
        }
    }
    basis[row] = col;
}

/// Minimizes `cost . y` over columns `0..columns` from the current feasible
/// basis. Columns with infinite cost never enter.
fn run_simplex(tab: &mut [Vec<f64>], basis: &mut [usize], cost: &[f64], columns: usize) -> Result<usize> {
    let width = tab[0].len();
    let rhs = width - 1;
    for iter in 0..MAX_ITERATIONS {
        let duals: Vec<f64> = basis.iter().map(|&b| cost[b]).collect();
        let entering = (0..columns).find(|&j| {
            if basis.contains(&j) || !cost[j].is_finite() {
                return false;
            }
            let reduced = cost[j] - tab.iter().zip(&duals).map(|(r, c)| r[j] * c).sum::<f64>();
            reduced < -PIVOT_EPS * (1.0 + cost[j].abs())
        });
        let Some(col) = entering else {
            return Ok(iter);
        };
        let mut leave: Option<(usize, f64)> = None;
        for (i, r) in tab.iter().enumerate() {
            if r[col] > PIVOT_EPS {
                let ratio = r[rhs] / r[col];
                let better = match leave {
                    None => true,
                    Some((k, best)) => ratio < best - 1e-14 || (ratio <= best + 1e-14 && basis[i] < basis[k]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((row, _)) = leave else {
            return Err(GeomError::Solver("dual problem unbounded: primal infeasible".into()));
        };
        pivot(tab, basis, row, col);
    }
    Err(GeomError::Solver("iteration limit reached".into()))
}

/// Gaussian elimination with partial pivoting.
fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs()))?;
        if a[p][k].abs() < 1e-14 {
            return None;
        }
        a.swap(k, p);
        b.swap(k, p);
        for i in k + 1..n {
            let f = a[i][k] / a[k][k];
            for j in k..n {
                a[i][j] -= f * a[k][j];
            }
            b[i] -= f * b[k];
        }
    }
    let mut x = vec![0.0; n];
    for k in (0..n).rev() {
        let s: f64 = (k + 1..n).map(|j| a[k][j] * x[j]).sum();
        x[k] = (b[k] - s) / a[k][k];
    }
    Some(x)
}
