//! Log-barrier path following for small convex programs whose constraints are
//! linear or second-order-cone; here the inscribed-ellipsoid program.

use crate::error::{GeomError, Result};
use crate::linalg::{Matrix, Vector};

/// `a·z ≤ b`
#[derive(Debug, Clone)]
pub(crate) struct LinCon {
    pub a: Vector,
    pub b: f64,
}

/// `|W z + w0| ≤ q·z + q0`
#[derive(Debug, Clone)]
pub(crate) struct SocCon {
    pub w: Matrix,
    pub w0: Vector,
    pub q: Vector,
    pub q0: f64,
}

#[derive(Debug, Clone, Default)]
pub(crate) struct Constraints {
    pub lin: Vec<LinCon>,
    pub soc: Vec<SocCon>,
}

impl Constraints {
    fn nu(&self) -> f64 {
        (self.lin.len() + 2 * self.soc.len()) as f64
    }

    /// Barrier value, gradient and Hessian; `None` outside the interior.
    fn eval(&self, z: &Vector) -> Option<(f64, Vector, Matrix)> {
        let d = z.len();
        let mut f = 0.0;
        let mut g = Vector::zeros(d);
        let mut h = Matrix::zeros(d, d);
        for c in &self.lin {
            let s = c.b - c.a.dot(z);
            if !(s > 0.0) {
                return None;
            }
            f -= s.ln();
            g += &c.a / s;
            h.ger(1.0 / (s * s), &c.a, &c.a, 1.0);
        }
        for c in &self.soc {
            let w = &c.w * z + &c.w0;
            let s = c.q.dot(z) + c.q0;
            let ww = w.norm_squared();
            if !(s > 0.0) || !(s * s > ww) {
                return None;
            }
            let dd = s * s - ww;
            f -= dd.ln();
            let wt_w = c.w.transpose() * &w;
            let grad_d = &c.q * (2.0 * s) - &wt_w * 2.0;
            g -= &grad_d / dd;
            h.ger(1.0 / (dd * dd), &grad_d, &grad_d, 1.0);
            h.ger(-2.0 / dd, &c.q, &c.q, 1.0);
            h += (c.w.transpose() * &c.w) * (2.0 / dd);
        }
        Some((f, g, h))
    }
}

/// A smooth convex objective; `None` marks points outside its domain.
pub(crate) trait Objective {
    fn eval(&self, z: &Vector) -> Option<(f64, Vector, Matrix)>;
}

#[cfg(test)]
pub(crate) struct LinearObjective(pub Vector);

#[cfg(test)]
impl Objective for LinearObjective {
    fn eval(&self, z: &Vector) -> Option<(f64, Vector, Matrix)> {
        let d = z.len();
        Some((self.0.dot(z), self.0.clone(), Matrix::zeros(d, d)))
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct BarrierOptions {
    /// Target duality gap `ν/τ`.
    pub gap: f64,
    pub tau0: f64,
    pub growth: f64,
    pub max_newton: usize,
}

impl Default for BarrierOptions {
    fn default() -> Self {
        Self {
            gap: 1e-11,
            tau0: 1.0,
            growth: 12.0,
            max_newton: 60,
        }
    }
}

fn solve_spd(h: &Matrix, g: &Vector) -> Option<Vector> {
    if let Some(ch) = h.clone().cholesky() {
        return Some(ch.solve(&(-g)));
    }
    let ridge = 1e-12 * (1.0 + h.diagonal().amax());
    let mut hr = h.clone();
    for i in 0..hr.nrows() {
        hr[(i, i)] += ridge;
    }
    hr.cholesky().map(|ch| ch.solve(&(-g)))
}

/// Minimises `τ f(z) + φ(z)` by damped Newton from a strictly feasible `z`.
fn center<O: Objective>(
    obj: &O,
    cons: &Constraints,
    tau: f64,
    mut z: Vector,
    opts: &BarrierOptions,
) -> Result<Vector> {
    let eval = |z: &Vector| -> Option<(f64, Vector, Matrix)> {
        let (f0, g0, h0) = obj.eval(z)?;
        let (fb, gb, hb) = cons.eval(z)?;
        Some((tau * f0 + fb, g0 * tau + gb, h0 * tau + hb))
    };
    let (mut f, mut g, mut h) = eval(&z)
        .ok_or_else(|| GeomError::Internal("barrier start is not strictly feasible".into()))?;
    for _ in 0..opts.max_newton {
        let Some(step) = solve_spd(&h, &g) else {
            break;
        };
        let decrement = -g.dot(&step);
        if !(decrement > 1e-14) {
            break;
        }
        let mut s = 1.0;
        let mut accepted = None;
        for _ in 0..80 {
            let cand = &z + &step * s;
            if let Some(val) = eval(&cand) {
                if val.0 <= f - 0.25 * s * decrement {
                    accepted = Some((cand, val));
                    break;
                }
            }
            s *= 0.5;
        }
        let Some((cand, (nf, ng, nh))) = accepted else {
            break;
        };
        z = cand;
        f = nf;
        g = ng;
        h = nh;
        if decrement < 1e-12 {
            break;
        }
    }
    Ok(z)
}

/// Path-following minimisation of a convex objective over the constraint
/// interior, starting from a strictly feasible point.
pub(crate) fn minimize<O: Objective>(
    obj: &O,
    cons: &Constraints,
    start: Vector,
    opts: &BarrierOptions,
) -> Result<Vector> {
    let nu = cons.nu().max(1.0);
    let mut tau = opts.tau0;
    let mut z = start;
    for _ in 0..200 {
        z = center(obj, cons, tau, z, opts)?;
        if nu / tau < opts.gap {
            return Ok(z);
        }
        tau *= opts.growth;
    }
    Err(GeomError::NoConvergence(format!("barrier gap {:e}", nu / tau)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::vector;

    fn disk(cx: f64, cy: f64, r: f64) -> SocCon {
        SocCon {
            w: Matrix::identity(2, 2),
            w0: vector(&[-cx, -cy]),
            q: Vector::zeros(2),
            q0: r,
        }
    }

    #[test]
    fn linear_objective_over_two_disks() {
        let cons = Constraints {
            lin: vec![],
            soc: vec![disk(-0.5, 0.0, 1.0), disk(0.5, 0.0, 1.0)],
        };
        let start = vector(&[0.0, 0.0]);
        // Lens top vertex is (0, sqrt(3)/2).
        let z = minimize(&LinearObjective(vector(&[0.0, -1.0])), &cons, start, &BarrierOptions::default()).unwrap();
        assert!((z[1] - 0.75f64.sqrt()).abs() < 1e-8, "{z}");
    }
}
