//! Maximal-volume ellipsoid inscribed in a polytope.

use crate::body::HPolytope;
use crate::error::{GeomError, Result};
use crate::linalg::{Matrix, Vector};
use crate::optim::barrier::{minimize, BarrierOptions, Constraints, Objective, SocCon};
use crate::tolerance::ToleranceConfig;

/// `{center + shape·s : |s| ≤ 1}` with `shape` symmetric positive definite.
#[derive(Debug, Clone, PartialEq)]
pub struct Ellipsoid {
    pub center: Vector,
    pub shape: Matrix,
}

impl Ellipsoid {
    pub fn volume_factor(&self) -> f64 {
        self.shape.determinant()
    }

    pub fn support(&self, u: &Vector) -> f64 {
        u.dot(&self.center) + (&self.shape * u).norm()
    }
}

#[derive(Debug, Clone)]
pub struct InscribedEllipsoid {
    pub ellipsoid: Ellipsoid,
    /// Facets touching the ellipsoid (normalised slack ≤ 1e-5).
    pub active: Vec<usize>,
    /// Touching point on each active facet.
    pub tangency: Vec<Vector>,
    /// Largest constraint violation `|B a_i| − (b_i − a_i·d)` (≤ 0 when feasible).
    pub residual: f64,
}

/// Symmetric `n×n` matrices as vectors of their upper-triangular entries.
struct SymBasis {
    n: usize,
    pairs: Vec<(usize, usize)>,
}

impl SymBasis {
    fn new(n: usize) -> Self {
        let pairs = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
        Self { n, pairs }
    }

    fn len(&self) -> usize {
        self.pairs.len()
    }

    fn unit(&self, k: usize) -> Matrix {
        let (i, j) = self.pairs[k];
        let mut e = Matrix::zeros(self.n, self.n);
        e[(i, j)] = 1.0;
        e[(j, i)] = 1.0;
        e
    }

    fn matrix(&self, z: &Vector) -> Matrix {
        let mut b = Matrix::zeros(self.n, self.n);
        for (k, &(i, j)) in self.pairs.iter().enumerate() {
            b[(i, j)] = z[k];
            b[(j, i)] = z[k];
        }
        b
    }
}

/// `−log det B` over the symmetric part of the variables.
struct NegLogDet<'a> {
    sym: &'a SymBasis,
    units: Vec<Matrix>,
}

impl Objective for NegLogDet<'_> {
    fn eval(&self, z: &Vector) -> Option<(f64, Vector, Matrix)> {
        let k = self.sym.len();
        let d = z.len();
        let b = self.sym.matrix(&z.rows(0, k).into_owned());
        let ch = b.cholesky()?;
        let logdet = 2.0 * ch.l().diagonal().iter().map(|v| v.ln()).sum::<f64>();
        let inv = ch.inverse();
        let prods: Vec<Matrix> = self.units.iter().map(|e| &inv * e).collect();
        let mut g = Vector::zeros(d);
        let mut h = Matrix::zeros(d, d);
        for a in 0..k {
            g[a] = -prods[a].trace();
            for c in a..k {
                let v = (&prods[a] * &prods[c]).trace();
                h[(a, c)] = v;
                h[(c, a)] = v;
            }
        }
        Some((-logdet, g, h))
    }
}

/// Solves `max log det B` subject to `|B a_i| ≤ b_i − a_i·d` by log-barrier
/// path following from the Chebyshev ball.
pub fn inscribed_ellipsoid(k: &HPolytope, tol: &ToleranceConfig) -> Result<InscribedEllipsoid> {
    let n = k.dim();
    let sym = SymBasis::new(n);
    let ks = sym.len();
    let (c, r) = k.chebyshev_center()?;
    if !(r > tol.eps_feas) {
        return Err(GeomError::Precondition("polytope has empty interior".into()));
    }
    let units: Vec<Matrix> = (0..ks).map(|i| sym.unit(i)).collect();
    let mut cons = Constraints::default();
    for (a, b) in k.normals().iter().zip(k.offsets()) {
        let mut w = Matrix::zeros(n, ks + n);
        for (col, e) in units.iter().enumerate() {
            w.set_column(col, &(e * a));
        }
        let mut q = Vector::zeros(ks + n);
        q.rows_mut(ks, n).copy_from(&-a);
        cons.soc.push(SocCon {
            w,
            w0: Vector::zeros(n),
            q,
            q0: *b,
        });
    }
    let mut start = Vector::zeros(ks + n);
    for (idx, &(i, j)) in sym.pairs.iter().enumerate() {
        if i == j {
            start[idx] = 0.5 * r;
        }
    }
    start.rows_mut(ks, n).copy_from(&c);
    let obj = NegLogDet { sym: &sym, units };
    let z = minimize(&obj, &cons, start, &BarrierOptions::default())?;
    let shape = sym.matrix(&z.rows(0, ks).into_owned());
    let center = z.rows(ks, n).into_owned();

    let mut residual = f64::NEG_INFINITY;
    let mut active = Vec::new();
    let mut tangency = Vec::new();
    for (i, (a, b)) in k.normals().iter().zip(k.offsets()).enumerate() {
        let ba = &shape * a;
        let gap = b - a.dot(&center) - ba.norm();
        residual = residual.max(-gap);
        if gap / a.norm() <= 1e-5 {
            active.push(i);
            tangency.push(&center + &shape * (&ba / ba.norm()));
        }
    }
    if residual > 1e-7 {
        return Err(GeomError::NoConvergence(format!("ellipsoid constraint residual {residual:e}")));
    }
    Ok(InscribedEllipsoid {
        ellipsoid: Ellipsoid { center, shape },
        active,
        tangency,
        residual,
    })
}
