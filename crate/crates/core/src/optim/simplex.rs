//! Dense two-phase tableau simplex with Bland's pivoting rule.
//!
//! The core works on the standard form `min c·x  s.t.  A x = b, x ≥ 0`.
//! Inequality programs with free variables are reduced to it in `lp_max`.

use crate::error::{GeomError, Result};
use crate::linalg::{vector, Vector};

const PIVOT_EPS: f64 = 1e-11;

#[derive(Debug, Clone)]
pub(crate) enum StandardOutcome {
    Optimal {
        x: Vec<f64>,
        value: f64,
        /// Multipliers `y = c_B B⁻¹` of the equality rows.
        duals: Vec<f64>,
    },
    Infeasible,
    Unbounded,
}

struct Tableau {
    rows: usize,
    cols: usize, // structural + artificial, rhs stored separately
    a: Vec<f64>,
    rhs: Vec<f64>,
    cost: Vec<f64>,
    objective: f64,
    basis: Vec<usize>,
}

impl Tableau {
    fn at(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.cols + j]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let cols = self.cols;
        let p = self.a[r * cols + c];
        for j in 0..cols {
            self.a[r * cols + j] /= p;
        }
        self.rhs[r] /= p;
        for i in 0..self.rows {
            if i == r {
                continue;
            }
            let f = self.a[i * cols + c];
            if f != 0.0 {
                for j in 0..cols {
                    self.a[i * cols + j] -= f * self.a[r * cols + j];
                }
                self.rhs[i] -= f * self.rhs[r];
                self.a[i * cols + c] = 0.0;
            }
        }
        let f = self.cost[c];
        if f != 0.0 {
            for j in 0..cols {
                self.cost[j] -= f * self.a[r * cols + j];
            }
            self.objective -= f * self.rhs[r];
            self.cost[c] = 0.0;
        }
        self.basis[r] = c;
    }

    /// Runs Bland-rule iterations over columns `< allowed`. Returns false when unbounded.
    fn optimize(&mut self, allowed: usize, scale: f64) -> bool {
        let tol = PIVOT_EPS * scale.max(1.0);
        let max_iter = 50_000;
        for _ in 0..max_iter {
            let Some(enter) = (0..allowed).find(|&j| self.cost[j] < -tol) else {
                return true;
            };
            let mut leave: Option<usize> = None;
            let mut best = f64::INFINITY;
            for i in 0..self.rows {
                let aij = self.at(i, enter);
                if aij > PIVOT_EPS {
                    let ratio = self.rhs[i] / aij;
                    let better = match leave {
                        None => true,
                        Some(l) => {
                            ratio < best - 1e-14 * best.abs().max(1.0)
                                || (ratio <= best + 1e-14 * best.abs().max(1.0)
                                    && self.basis[i] < self.basis[l])
                        }
                    };
                    if better {
                        best = ratio;
                        leave = Some(i);
                    }
                }
            }
            match leave {
                None => return false,
                Some(r) => self.pivot(r, enter),
            }
        }
        true
    }
}

/// Solves `min c·x s.t. A x = b, x ≥ 0`.
pub(crate) fn solve_standard(c: &[f64], a: &[Vec<f64>], b: &[f64]) -> StandardOutcome {
    let m = a.len();
    let n = c.len();
    let cols = n + m;
    let mut tab = Tableau {
        rows: m,
        cols,
        a: vec![0.0; m * cols],
        rhs: vec![0.0; m],
        cost: vec![0.0; cols],
        objective: 0.0,
        basis: (n..n + m).collect(),
    };
    let mut sign = vec![1.0; m];
    let mut scale: f64 = 1.0;
    for i in 0..m {
        if b[i] < 0.0 {
            sign[i] = -1.0;
        }
        for j in 0..n {
            let v = sign[i] * a[i][j];
            tab.a[i * cols + j] = v;
            scale = scale.max(v.abs());
        }
        tab.a[i * cols + n + i] = 1.0;
        tab.rhs[i] = sign[i] * b[i];
        scale = scale.max(tab.rhs[i].abs());
    }
    // Phase 1: minimise the sum of artificials.
    for j in 0..n {
        tab.cost[j] = -(0..m).map(|i| tab.at(i, j)).sum::<f64>();
    }
    tab.objective = -tab.rhs.iter().sum::<f64>();
    tab.optimize(n, scale);
    let infeasibility = -tab.objective;
    if infeasibility > 1e-9 * scale {
        return StandardOutcome::Infeasible;
    }
    // Drive remaining artificials out of the basis; rows that cannot be are redundant.
    let mut redundant = vec![false; m];
    for r in 0..m {
        if tab.basis[r] >= n {
            match (0..n).find(|&j| tab.at(r, j).abs() > 1e-9) {
                Some(j) => tab.pivot(r, j),
                None => redundant[r] = true,
            }
        }
    }
    // Phase 2.
    tab.cost = vec![0.0; cols];
    tab.cost[..n].copy_from_slice(c);
    tab.objective = 0.0;
    for r in 0..m {
        let bj = tab.basis[r];
        let cb = if bj < n { c[bj] } else { 0.0 };
        if cb != 0.0 {
            for j in 0..cols {
                tab.cost[j] -= cb * tab.a[r * cols + j];
            }
            tab.objective -= cb * tab.rhs[r];
        }
    }
    let cscale = c.iter().fold(scale, |s, v| s.max(v.abs()));
    if !tab.optimize(n, cscale) {
        return StandardOutcome::Unbounded;
    }
    let mut x = vec![0.0; n];
    for r in 0..m {
        if tab.basis[r] < n && !redundant[r] {
            x[tab.basis[r]] = tab.rhs[r].max(0.0);
        }
    }
    let value = c.iter().zip(&x).map(|(ci, xi)| ci * xi).sum();
    let duals = (0..m).map(|i| -tab.cost[n + i] * sign[i]).collect();
    StandardOutcome::Optimal { x, value, duals }
}

/// `maximize c·x  s.t.  A x ≤ b`, with `x` free.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub objective: Vector,
    pub rows: Vec<Vector>,
    pub rhs: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { value: f64, argmax: Vector },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn optimal(self) -> Result<(f64, Vector)> {
        match self {
            LpOutcome::Optimal { value, argmax } => Ok((value, argmax)),
            LpOutcome::Infeasible => Err(GeomError::Infeasible),
            LpOutcome::Unbounded => Err(GeomError::Unbounded),
        }
    }
}

/// Solves a linear program in inequality form by splitting free variables
/// and adding slacks. Pivoting is deterministic.
pub fn lp_max(lp: &LinearProgram) -> LpOutcome {
    let n = lp.objective.len();
    let m = lp.rows.len();
    let width = 2 * n + m;
    let mut c = vec![0.0; width];
    for j in 0..n {
        c[j] = -lp.objective[j];
        c[n + j] = lp.objective[j];
    }
    let a: Vec<Vec<f64>> = lp
        .rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = vec![0.0; width];
            for j in 0..n {
                r[j] = row[j];
                r[n + j] = -row[j];
            }
            r[2 * n + i] = 1.0;
            r
        })
        .collect();
    match solve_standard(&c, &a, &lp.rhs) {
        StandardOutcome::Optimal { x, value, .. } => {
            let argmax: Vec<f64> = (0..n).map(|j| x[j] - x[n + j]).collect();
            LpOutcome::Optimal {
                value: -value,
                argmax: vector(&argmax),
            }
        }
        StandardOutcome::Infeasible => LpOutcome::Infeasible,
        StandardOutcome::Unbounded => LpOutcome::Unbounded,
    }
}

/// Support value and maximiser of `{x : a_i·x ≤ b_i}` in direction `u`,
/// solved through the dual program `min b·λ, Σ λ_i a_i = u, λ ≥ 0`.
/// Suited to many halfspaces in low dimension.
pub(crate) fn support_via_dual(normals: &[Vector], offsets: &[f64], u: &Vector) -> Result<(f64, Vector)> {
    let n = u.len();
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|k| normals.iter().map(|a| a[k]).collect())
        .collect();
    let rhs: Vec<f64> = u.iter().copied().collect();
    match solve_standard(offsets, &rows, &rhs) {
        StandardOutcome::Optimal { value, duals, .. } => Ok((value, vector(&duals))),
        StandardOutcome::Infeasible => Err(GeomError::Unbounded),
        StandardOutcome::Unbounded => Err(GeomError::Empty),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(obj: &[f64], rows: &[&[f64]], rhs: &[f64]) -> LinearProgram {
        LinearProgram {
            objective: vector(obj),
            rows: rows.iter().map(|r| vector(r)).collect(),
            rhs: rhs.to_vec(),
        }
    }

    #[test]
    fn unit_square_corner() {
        let p = lp(
            &[1.0, 1.0],
            &[&[1.0, 0.0], &[-1.0, 0.0], &[0.0, 1.0], &[0.0, -1.0]],
            &[1.0, 0.0, 1.0, 0.0],
        );
        let (v, x) = lp_max(&p).optimal().unwrap();
        assert!((v - 2.0).abs() < 1e-12);
        assert!((x - vector(&[1.0, 1.0])).norm() < 1e-12);
    }

    #[test]
    fn contradictory_bounds_are_infeasible() {
        let p = lp(&[1.0], &[&[1.0], &[-1.0]], &[0.0, -1.0]);
        assert_eq!(lp_max(&p), LpOutcome::Infeasible);
    }

    #[test]
    fn free_direction_is_unbounded() {
        let p = lp(&[1.0, 0.0], &[&[0.0, 1.0]], &[1.0]);
        assert_eq!(lp_max(&p), LpOutcome::Unbounded);
    }

    #[test]
    fn dual_support_matches_primal() {
        let normals = vec![vector(&[1.0, 0.0]), vector(&[-1.0, 0.0]), vector(&[0.0, 1.0]), vector(&[0.0, -1.0]), vector(&[1.0, 1.0])];
        let offsets = vec![2.0, 0.0, 2.0, 0.0, 3.0];
        let u = vector(&[1.0, 2.0]);
        let (v, x) = support_via_dual(&normals, &offsets, &u).unwrap();
        assert!((v - 5.0).abs() < 1e-12, "{v}");
        assert!((u.dot(&x) - 5.0).abs() < 1e-9);
        let empty = vec![0.0, -1.0, 2.0, 0.0, 3.0];
        assert_eq!(support_via_dual(&normals, &empty, &u), Err(GeomError::Empty));
    }
}
