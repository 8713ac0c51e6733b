//! Convex body representations and their primitive queries.

use std::fmt;
use std::sync::{Arc, OnceLock};

use itertools::Itertools;

use crate::directions::sphere_grid;
use crate::error::{GeomError, Result};
use crate::linalg::{basis, block, check_dim, concat, vector, Matrix, Vector};
use crate::optim::simplex::{lp_max, support_via_dual, LinearProgram, LpOutcome};
use crate::polygon::{self, P2};
use crate::tolerance::ToleranceConfig;

/// Largest number of `n`-subsets of facets tried by brute-force vertex enumeration.
const VERTEX_ENUM_LIMIT: usize = 200_000;

/// `{x : a_i·x ≤ b_i}`, bounded.
#[derive(Clone)]
pub struct HPolytope {
    normals: Vec<Vector>,
    offsets: Vec<f64>,
    dim: usize,
    vertices: OnceLock<Option<Vec<Vector>>>,
}

impl fmt::Debug for HPolytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HPolytope")
            .field("normals", &self.normals.iter().map(|a| a.as_slice().to_vec()).collect_vec())
            .field("offsets", &self.offsets)
            .finish()
    }
}

impl HPolytope {
    /// Validated constructor: nonzero normals, nonempty and bounded.
    pub fn new(normals: Vec<Vector>, offsets: Vec<f64>) -> Result<Self> {
        let dim = normals.first().map(|a| a.len()).ok_or(GeomError::Unbounded)?;
        if normals.len() != offsets.len() {
            return Err(GeomError::Precondition("normals and offsets differ in length".into()));
        }
        for (i, a) in normals.iter().enumerate() {
            check_dim(dim, a.len())?;
            if !(a.norm() > 1e-14) || a.iter().any(|v| !v.is_finite()) {
                return Err(GeomError::DegenerateNormal(i));
            }
            if !offsets[i].is_finite() {
                return Err(GeomError::Precondition(format!("offset {i} is not finite")));
            }
        }
        let poly = Self::from_raw(normals, offsets);
        for i in 0..dim {
            for s in [1.0, -1.0] {
                let u = basis(dim, i) * s;
                match poly.lp_support(&u) {
                    Ok(_) => {}
                    Err(e) => return Err(e),
                }
            }
        }
        Ok(poly)
    }

    /// Unchecked constructor for sets known to be bounded (erosions, hulls).
    pub(crate) fn from_raw(normals: Vec<Vector>, offsets: Vec<f64>) -> Self {
        let dim = normals.first().map(|a| a.len()).unwrap_or(0);
        Self {
            normals,
            offsets,
            dim,
            vertices: OnceLock::new(),
        }
    }

    /// Axis-aligned box `[lo, hi]`.
    pub fn boxed(lo: &[f64], hi: &[f64]) -> Result<Self> {
        let n = lo.len();
        check_dim(n, hi.len())?;
        let mut normals = Vec::new();
        let mut offsets = Vec::new();
        for i in 0..n {
            normals.push(basis(n, i));
            offsets.push(hi[i]);
            normals.push(-basis(n, i));
            offsets.push(-lo[i]);
        }
        Self::new(normals, offsets)
    }

    /// Cube `[-c, c]^n`.
    pub fn cube(n: usize, c: f64) -> Self {
        Self::boxed(&vec![-c; n], &vec![c; n]).expect("cube is bounded")
    }

    /// Cross-polytope `{x : Σ|x_i| ≤ r}`.
    pub fn cross_polytope(n: usize, r: f64) -> Self {
        let mut normals = Vec::new();
        for signs in (0..n).map(|_| [1.0, -1.0]).multi_cartesian_product() {
            normals.push(vector(&signs));
        }
        let offsets = vec![r; normals.len()];
        Self::new(normals, offsets).expect("cross-polytope is bounded")
    }

    /// Convex hull of planar points as a polygon.
    pub fn from_vertices_2d(points: &[P2]) -> Result<Self> {
        if points.is_empty() {
            return Err(GeomError::EmptyPointSet);
        }
        let (normals, offsets) = polygon::halfspaces_of_hull(points);
        Self::new(normals, offsets)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn normals(&self) -> &[Vector] {
        &self.normals
    }

    pub fn offsets(&self) -> &[f64] {
        &self.offsets
    }

    fn lp_support(&self, u: &Vector) -> Result<(f64, Vector)> {
        if self.normals.len() > 64 {
            return support_via_dual(&self.normals, &self.offsets, u);
        }
        let lp = LinearProgram {
            objective: u.clone(),
            rows: self.normals.clone(),
            rhs: self.offsets.clone(),
        };
        match lp_max(&lp) {
            LpOutcome::Optimal { value, argmax } => Ok((value, argmax)),
            LpOutcome::Infeasible => Err(GeomError::Empty),
            LpOutcome::Unbounded => Err(GeomError::Unbounded),
        }
    }

    fn enumeration_feasible(&self) -> bool {
        let m = self.normals.len();
        let n = self.dim;
        if n == 0 || n > 4 {
            return false;
        }
        // C(m, n) without overflow.
        let mut c: usize = 1;
        for k in 0..n {
            c = c.saturating_mul(m.saturating_sub(k)) / (k + 1);
        }
        c <= VERTEX_ENUM_LIMIT
    }

    /// Vertices by brute force over `n`-subsets of facets, when affordable.
    pub fn vertices(&self) -> Option<&[Vector]> {
        self.vertices
            .get_or_init(|| {
                if !self.enumeration_feasible() {
                    return None;
                }
                Some(self.enumerate_vertices())
            })
            .as_deref()
    }

    fn enumerate_vertices(&self) -> Vec<Vector> {
        let n = self.dim;
        let scale = self.offsets.iter().fold(1.0f64, |s, b| s.max(b.abs()));
        let units: Vec<(Vector, f64)> = self
            .normals
            .iter()
            .zip(&self.offsets)
            .map(|(a, b)| {
                let l = a.norm();
                (a / l, b / l)
            })
            .collect();
        let tol = 1e-9 * scale;
        let mut out: Vec<Vector> = Vec::new();
        for combo in (0..units.len()).combinations(n) {
            let mut m = Matrix::zeros(n, n);
            let mut rhs = Vector::zeros(n);
            for (r, &i) in combo.iter().enumerate() {
                m.row_mut(r).copy_from(&units[i].0.transpose());
                rhs[r] = units[i].1;
            }
            let lu = m.lu();
            if lu.determinant().abs() < 1e-10 {
                continue;
            }
            let Some(x) = lu.solve(&rhs) else { continue };
            if units.iter().all(|(a, b)| a.dot(&x) <= b + tol)
                && !out.iter().any(|v| (v - &x).amax() < 1e-9 * scale)
            {
                out.push(x);
            }
        }
        out
    }

    /// Support value and a maximiser.
    pub fn support_point(&self, u: &Vector) -> Result<(f64, Vector)> {
        check_dim(self.dim, u.len())?;
        match self.vertices() {
            Some([]) => Err(GeomError::Empty),
            Some(vs) => {
                let (best, val) = vs
                    .iter()
                    .map(|v| (v, u.dot(v)))
                    .max_by(|a, b| a.1.total_cmp(&b.1))
                    .expect("nonempty");
                Ok((val, best.clone()))
            }
            None => self.lp_support(u),
        }
    }

    pub fn is_empty(&self) -> bool {
        match self.vertices() {
            Some(vs) => vs.is_empty(),
            None => matches!(self.lp_support(&basis(self.dim, 0)), Err(GeomError::Empty)),
        }
    }

    pub fn contains(&self, x: &Vector, eps: f64) -> bool {
        self.normals
            .iter()
            .zip(&self.offsets)
            .all(|(a, b)| a.dot(x) - b <= eps * a.norm())
    }

    /// Largest normalised constraint violation (negative inside).
    pub fn violation(&self, x: &Vector) -> f64 {
        self.normals
            .iter()
            .zip(&self.offsets)
            .map(|(a, b)| (a.dot(x) - b) / a.norm())
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Center of the largest inscribed ball and its radius.
    pub fn chebyshev_center(&self) -> Result<(Vector, f64)> {
        let n = self.dim;
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for (a, b) in self.normals.iter().zip(&self.offsets) {
            let mut r = Vector::zeros(n + 1);
            r.rows_mut(0, n).copy_from(a);
            r[n] = a.norm();
            rows.push(r);
            rhs.push(*b);
        }
        let mut neg = Vector::zeros(n + 1);
        neg[n] = -1.0;
        rows.push(neg);
        rhs.push(0.0);
        let lp = LinearProgram {
            objective: basis(n + 1, n),
            rows,
            rhs,
        };
        let (_, z) = lp_max(&lp).optimal().map_err(|e| match e {
            GeomError::Infeasible => GeomError::Empty,
            e => e,
        })?;
        Ok((z.rows(0, n).into_owned(), z[n]))
    }

    /// Image under `x ↦ M x + s`.
    pub fn transformed(&self, inv_t: &Matrix, shift: &Vector) -> Self {
        let mut normals = Vec::new();
        let mut offsets = Vec::new();
        for (a, b) in self.normals.iter().zip(&self.offsets) {
            let na = inv_t * a;
            offsets.push(b + na.dot(shift));
            normals.push(na);
        }
        Self::from_raw(normals, offsets)
    }

    /// Planar vertices in counter-clockwise order.
    pub fn polygon(&self) -> Result<Vec<P2>> {
        check_dim(2, self.dim)?;
        let vs = self.vertices().ok_or_else(|| GeomError::Unsupported("too many facets".into()))?;
        if vs.is_empty() {
            return Err(GeomError::Empty);
        }
        Ok(polygon::convex_hull(&vs.iter().map(polygon::to_p2).collect_vec()))
    }
}

/// Euclidean ball.
#[derive(Debug, Clone, PartialEq)]
pub struct Ball {
    pub center: Vector,
    pub radius: f64,
}

impl Ball {
    pub fn new(center: Vector, radius: f64) -> Result<Self> {
        if !(radius >= 0.0) || !radius.is_finite() {
            return Err(GeomError::Precondition("ball radius must be ≥ 0".into()));
        }
        Ok(Self { center, radius })
    }
}

/// Convex hull of a horizontal disk and the point `apex_height` above its
/// center (last coordinate vertical).
#[derive(Debug, Clone, PartialEq)]
pub struct ConeBody {
    pub base_center: Vector,
    pub base_radius: f64,
    pub apex_height: f64,
}

impl ConeBody {
    pub fn new(base_center: Vector, base_radius: f64, apex_height: f64) -> Result<Self> {
        check_dim(3, base_center.len())?;
        if !(base_radius > 0.0) || !(apex_height > 0.0) {
            return Err(GeomError::Precondition("cone radius and height must be > 0".into()));
        }
        Ok(Self {
            base_center,
            base_radius,
            apex_height,
        })
    }

    pub fn apex(&self) -> Vector {
        let mut a = self.base_center.clone();
        a[2] += self.apex_height;
        a
    }

    /// Radius of the horizontal section at height `z` above the base.
    pub fn section_radius(&self, z: f64) -> f64 {
        self.base_radius * (1.0 - z / self.apex_height)
    }
}

/// Cartesian product of bodies on consecutive coordinate blocks.
#[derive(Debug, Clone)]
pub struct ProductBody {
    pub factors: Vec<Body>,
}

impl ProductBody {
    pub fn new(factors: Vec<Body>) -> Result<Self> {
        if factors.is_empty() {
            return Err(GeomError::Precondition("product needs at least one factor".into()));
        }
        Ok(Self { factors })
    }

    pub fn dims(&self) -> Vec<usize> {
        self.factors.iter().map(Body::dim).collect()
    }

    /// `(start, len)` of every factor block.
    pub fn blocks(&self) -> Vec<(usize, usize)> {
        let mut start = 0;
        self.dims()
            .into_iter()
            .map(|d| {
                let b = (start, d);
                start += d;
                b
            })
            .collect()
    }

    pub fn split(&self, v: &Vector) -> Vec<Vector> {
        self.blocks().into_iter().map(|(s, l)| block(v, s, l)).collect()
    }
}

pub type SupportFn = Arc<dyn Fn(&Vector) -> f64 + Send + Sync>;
pub type MembershipFn = Arc<dyn Fn(&Vector, f64) -> bool + Send + Sync>;

/// A body known only through its support function, optionally with an exact
/// membership test. Queries without one are answered on a direction grid.
#[derive(Clone)]
pub struct SupportOracle {
    pub dim: usize,
    pub support: SupportFn,
    pub membership: Option<MembershipFn>,
    pub label: String,
}

impl fmt::Debug for SupportOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SupportOracle({}, dim {})", self.label, self.dim)
    }
}

#[derive(Debug, Clone)]
pub enum Body {
    Polytope(HPolytope),
    Ball(Ball),
    Cone(ConeBody),
    Product(ProductBody),
    Oracle(SupportOracle),
}

impl From<HPolytope> for Body {
    fn from(p: HPolytope) -> Self {
        Body::Polytope(p)
    }
}

impl From<Ball> for Body {
    fn from(b: Ball) -> Self {
        Body::Ball(b)
    }
}

impl From<ConeBody> for Body {
    fn from(c: ConeBody) -> Self {
        Body::Cone(c)
    }
}

impl From<ProductBody> for Body {
    fn from(p: ProductBody) -> Self {
        Body::Product(p)
    }
}

fn similarity_factor(m: &Matrix) -> Option<f64> {
    let g = m.transpose() * m;
    let s = g[(0, 0)];
    let n = g.nrows();
    for i in 0..n {
        for j in 0..n {
            let want = if i == j { s } else { 0.0 };
            if (g[(i, j)] - want).abs() > 1e-12 * s.max(1.0) {
                return None;
            }
        }
    }
    Some(s.sqrt())
}

impl Body {
    pub fn dim(&self) -> usize {
        match self {
            Body::Polytope(p) => p.dim(),
            Body::Ball(b) => b.center.len(),
            Body::Cone(_) => 3,
            Body::Product(p) => p.dims().iter().sum(),
            Body::Oracle(o) => o.dim,
        }
    }

    /// Support function `h(u) = max_{x ∈ body} u·x`; `u` need not be unit.
    pub fn support(&self, u: &Vector) -> Result<f64> {
        check_dim(self.dim(), u.len())?;
        if u.norm() == 0.0 {
            return Err(GeomError::ZeroDirection);
        }
        Ok(match self {
            Body::Polytope(p) => p.support_point(u)?.0,
            Body::Ball(b) => u.dot(&b.center) + b.radius * u.norm(),
            Body::Cone(c) => {
                let planar = (u[0] * u[0] + u[1] * u[1]).sqrt();
                let base = u.dot(&c.base_center);
                (base + c.base_radius * planar).max(base + c.apex_height * u[2])
            }
            Body::Product(p) => {
                let mut h = 0.0;
                for (f, part) in p.factors.iter().zip(p.split(u)) {
                    if part.norm() > 0.0 {
                        h += f.support(&part)?;
                    }
                }
                h
            }
            Body::Oracle(o) => (o.support)(u),
        })
    }

    /// Closed membership with `eps_feas` slack.
    pub fn contains(&self, x: &Vector, tol: &ToleranceConfig) -> Result<bool> {
        check_dim(self.dim(), x.len())?;
        let eps = tol.eps_feas;
        Ok(match self {
            Body::Polytope(p) => p.contains(x, eps),
            Body::Ball(b) => (x - &b.center).norm() <= b.radius + eps,
            Body::Cone(c) => {
                let z = x[2] - c.base_center[2];
                let planar = ((x[0] - c.base_center[0]).powi(2) + (x[1] - c.base_center[1]).powi(2)).sqrt();
                z >= -eps && z <= c.apex_height + eps && planar <= c.section_radius(z) + eps * (1.0 + c.base_radius / c.apex_height)
            }
            Body::Product(p) => {
                for (f, part) in p.factors.iter().zip(p.split(x)) {
                    if !f.contains(&part, tol)? {
                        return Ok(false);
                    }
                }
                true
            }
            Body::Oracle(o) => match &o.membership {
                Some(m) => m(x, eps),
                None => sphere_grid(o.dim, tol.direction_grid_size)
                    .iter()
                    .all(|u| u.dot(x) <= (o.support)(u) + eps),
            },
        })
    }

    /// Largest separation `max_u u·x − h(u)` over unit `u` in the grid: a
    /// lower bound on the distance from `x` to the body when positive.
    pub fn separation(&self, x: &Vector, grid: &[Vector]) -> Result<(f64, Vector)> {
        let mut best = (f64::NEG_INFINITY, grid[0].clone());
        for u in grid {
            let v = u.dot(x) - self.support(u)?;
            if v > best.0 {
                best = (v, u.clone());
            }
        }
        Ok(best)
    }

    /// Image under `x ↦ M x + s`.
    pub fn transform(&self, map: &Matrix, shift: &Vector) -> Result<Body> {
        let n = self.dim();
        if map.nrows() != n || map.ncols() != n {
            return Err(GeomError::DimensionMismatch { expected: n, got: map.nrows() });
        }
        check_dim(n, shift.len())?;
        let inv = map.clone().try_inverse().ok_or(GeomError::Singular)?;
        if inv.iter().any(|v| !v.is_finite()) || map.determinant().abs() < 1e-14 {
            return Err(GeomError::Singular);
        }
        match self {
            Body::Polytope(p) => Ok(Body::Polytope(p.transformed(&inv.transpose(), shift))),
            Body::Ball(b) => match similarity_factor(map) {
                Some(s) => Ok(Body::Ball(Ball {
                    center: map * &b.center + shift,
                    radius: b.radius * s,
                })),
                None => Ok(self.oracle_image(map, &inv, shift)),
            },
            _ => Ok(self.oracle_image(map, &inv, shift)),
        }
    }

    fn oracle_image(&self, map: &Matrix, inv: &Matrix, shift: &Vector) -> Body {
        let inner = Arc::new(self.clone());
        let mt = map.transpose();
        let s = shift.clone();
        let support_inner = inner.clone();
        let support: SupportFn = Arc::new(move |u: &Vector| {
            support_inner.support(&(&mt * u)).unwrap_or(f64::NAN) + u.dot(&s)
        });
        let inv = inv.clone();
        let s2 = shift.clone();
        let membership: MembershipFn = Arc::new(move |x: &Vector, eps: f64| {
            let tol = ToleranceConfig {
                eps_feas: eps,
                ..ToleranceConfig::default()
            };
            inner.contains(&(&inv * (x - &s2)), &tol).unwrap_or(false)
        });
        Body::Oracle(SupportOracle {
            dim: self.dim(),
            support,
            membership: Some(membership),
            label: "linear image".into(),
        })
    }

    /// Translate by `t`.
    pub fn translate(&self, t: &Vector) -> Result<Body> {
        let n = self.dim();
        check_dim(n, t.len())?;
        Ok(match self {
            Body::Polytope(p) => Body::Polytope(p.transformed(&Matrix::identity(n, n), t)),
            Body::Ball(b) => Body::Ball(Ball {
                center: &b.center + t,
                radius: b.radius,
            }),
            Body::Cone(c) => Body::Cone(ConeBody {
                base_center: &c.base_center + t,
                ..c.clone()
            }),
            Body::Product(p) => Body::Product(ProductBody {
                factors: p
                    .factors
                    .iter()
                    .zip(p.split(t))
                    .map(|(f, part)| f.translate(&part))
                    .collect::<Result<_>>()?,
            }),
            Body::Oracle(_) => self.transform(&Matrix::identity(n, n), t)?,
        })
    }

    /// Uniform scaling about the origin.
    pub fn scaled(&self, s: f64) -> Result<Body> {
        let n = self.dim();
        match self {
            Body::Cone(c) => Ok(Body::Cone(ConeBody {
                base_center: &c.base_center * s,
                base_radius: c.base_radius * s,
                apex_height: c.apex_height * s,
            })),
            Body::Product(p) => Ok(Body::Product(ProductBody {
                factors: p.factors.iter().map(|f| f.scaled(s)).collect::<Result<_>>()?,
            })),
            _ => self.transform(&(Matrix::identity(n, n) * s), &Vector::zeros(n)),
        }
    }

    /// A point in the interior (or relative interior) of the body.
    pub fn interior_point(&self) -> Result<Vector> {
        Ok(match self {
            Body::Polytope(p) => p.chebyshev_center()?.0,
            Body::Ball(b) => b.center.clone(),
            Body::Cone(c) => {
                let mut x = c.base_center.clone();
                x[2] += c.apex_height / 4.0;
                x
            }
            Body::Product(p) => concat(
                &p.factors
                    .iter()
                    .map(Body::interior_point)
                    .collect::<Result<Vec<_>>>()?,
            ),
            Body::Oracle(o) => {
                let mut c = Vector::zeros(o.dim);
                for i in 0..o.dim {
                    let e = basis(o.dim, i);
                    c[i] = ((o.support)(&e) - (o.support)(&-e)) / 2.0;
                }
                c
            }
        })
    }

    /// Per-coordinate bounds `(lo, hi)`.
    pub fn bounding_box(&self) -> Result<(Vector, Vector)> {
        let n = self.dim();
        let mut lo = Vector::zeros(n);
        let mut hi = Vector::zeros(n);
        for i in 0..n {
            let e = basis(n, i);
            hi[i] = self.support(&e)?;
            lo[i] = -self.support(&-e)?;
        }
        Ok((lo, hi))
    }

    /// Width scale: the bounding-box diagonal.
    pub fn diameter(&self) -> Result<f64> {
        let (lo, hi) = self.bounding_box()?;
        Ok((hi - lo).norm())
    }

    /// Exact H-form for polytopes and products of polytopes.
    pub fn as_polytope(&self) -> Option<HPolytope> {
        match self {
            Body::Polytope(p) => Some(p.clone()),
            Body::Product(p) => {
                let n = self.dim();
                let mut normals = Vec::new();
                let mut offsets = Vec::new();
                for (f, (start, len)) in p.factors.iter().zip(p.blocks()) {
                    let fp = f.as_polytope()?;
                    for (a, b) in fp.normals().iter().zip(fp.offsets()) {
                        let mut full = Vector::zeros(n);
                        full.rows_mut(start, len).copy_from(a);
                        normals.push(full);
                        offsets.push(*b);
                    }
                }
                Some(HPolytope::from_raw(normals, offsets))
            }
            _ => None,
        }
    }

    /// Outer polyhedral approximation with the grid directions as normals.
    pub fn polytope_approximation(&self, grid_size: usize) -> Result<HPolytope> {
        let grid = sphere_grid(self.dim(), grid_size);
        let offsets = grid.iter().map(|u| self.support(u)).collect::<Result<Vec<_>>>()?;
        Ok(HPolytope::from_raw(grid, offsets))
    }
}

/// Minkowski sum. Exact for balls and planar polytopes, a support oracle
/// (`h_a + h_b`) otherwise.
pub fn minkowski_sum(a: &Body, b: &Body) -> Result<Body> {
    check_dim(a.dim(), b.dim())?;
    match (a, b) {
        (Body::Ball(x), Body::Ball(y)) => Ok(Body::Ball(Ball {
            center: &x.center + &y.center,
            radius: x.radius + y.radius,
        })),
        (Body::Polytope(x), Body::Polytope(y)) if a.dim() == 2 => {
            let sum = polygon::minkowski_sum(&x.polygon()?, &y.polygon()?);
            Ok(Body::Polytope(HPolytope::from_vertices_2d(&sum)?))
        }
        _ => {
            let dim = a.dim();
            let (a, b) = (Arc::new(a.clone()), Arc::new(b.clone()));
            let support: SupportFn =
                Arc::new(move |u: &Vector| a.support(u).unwrap_or(f64::NAN) + b.support(u).unwrap_or(f64::NAN));
            Ok(Body::Oracle(SupportOracle {
                dim,
                support,
                membership: None,
                label: "minkowski sum".into(),
            }))
        }
    }
}
