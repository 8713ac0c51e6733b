//! Ordinary convex-hull queries by linear programming.

use crate::error::Result;
use crate::linalg::{check_dim, Vector};
use crate::optim::simplex::{lp_max, LinearProgram};

/// `min_{λ ∈ Δ} |Σ λ_i x_i − p|_∞`: zero exactly when `p ∈ conv X`.
pub fn hull_distance_inf(points: &[Vector], p: &Vector) -> Result<f64> {
    let n = p.len();
    for x in points {
        check_dim(n, x.len())?;
    }
    let k = points.len();
    // Variables (λ_1..λ_k, s); maximise −s.
    let var = |f: &dyn Fn(usize) -> f64, s: f64| {
        let mut r = Vector::zeros(k + 1);
        for i in 0..k {
            r[i] = f(i);
        }
        r[k] = s;
        r
    };
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for j in 0..n {
        rows.push(var(&|i| points[i][j], -1.0));
        rhs.push(p[j]);
        rows.push(var(&|i| -points[i][j], -1.0));
        rhs.push(-p[j]);
    }
    rows.push(var(&|_| 1.0, 0.0));
    rhs.push(1.0);
    rows.push(var(&|_| -1.0, 0.0));
    rhs.push(-1.0);
    for i in 0..k {
        rows.push(var(&|j| if i == j { -1.0 } else { 0.0 }, 0.0));
        rhs.push(0.0);
    }
    let lp = LinearProgram {
        objective: var(&|_| 0.0, -1.0),
        rows,
        rhs,
    };
    let (value, _) = lp_max(&lp).optimal()?;
    Ok((-value).max(0.0))
}

/// `p ∈ conv X` up to `eps` in the max norm.
pub fn in_convex_hull(points: &[Vector], p: &Vector, eps: f64) -> Result<bool> {
    Ok(hull_distance_inf(points, p)? <= eps)
}
