//! The set of covering translates `T = {t : X ⊆ K + t} = ⋂_{x∈X} (x − K)`.

use itertools::Itertools;

use crate::body::{Body, ConeBody, HPolytope};
use crate::disks::{support_unequal, DiskIntersection};
use crate::error::{GeomError, Result};
use crate::linalg::{block, check_dim, concat, Matrix, Vector};
use crate::optim::meb::min_enclosing_ball;
use crate::polygon::{to_p2, P2};
use crate::tolerance::ToleranceConfig;

#[derive(Debug, Clone)]
enum Kind {
    Empty,
    /// Nonempty without interior, numerically a single point.
    Point(Vector),
    Polytope(HPolytope),
    Disks(DiskIntersection),
    Balls(BallTranslates),
    Cone(ConeTranslates),
    Product { blocks: Vec<(usize, usize)>, parts: Vec<TranslateSet> },
}

/// Covering translates of a point set by a gauge.
#[derive(Debug, Clone)]
pub struct TranslateSet {
    dim: usize,
    kind: Kind,
}

/// `T` for gauge `k` and points `x`, with default tolerances.
pub fn translate_feasible_set(k: &Body, x: &[Vector]) -> Result<TranslateSet> {
    translate_feasible_set_with(k, x, &ToleranceConfig::default())
}

/// `T` for gauge `k` and points `x`. Oracle gauges are replaced by their
/// outer polyhedral approximation on the configured direction grid.
pub fn translate_feasible_set_with(k: &Body, x: &[Vector], tol: &ToleranceConfig) -> Result<TranslateSet> {
    if x.is_empty() {
        return Err(GeomError::EmptyPointSet);
    }
    let n = k.dim();
    for p in x {
        check_dim(n, p.len())?;
    }
    if let Some(poly) = k.as_polytope() {
        return Ok(polytope_translates(&poly, x));
    }
    match k {
        Body::Ball(b) => {
            let centers: Vec<Vector> = x.iter().map(|p| p - &b.center).collect();
            if n == 2 {
                let disks = DiskIntersection::new(centers.iter().map(to_p2).collect(), b.radius);
                let kind = if disks.is_empty() { Kind::Empty } else { Kind::Disks(disks) };
                return Ok(TranslateSet { dim: n, kind });
            }
            let meb = min_enclosing_ball(&centers).expect("nonempty");
            let slack = tol.eps_feas * (1.0 + b.radius);
            if meb.radius > b.radius + slack {
                return Ok(TranslateSet { dim: n, kind: Kind::Empty });
            }
            if meb.radius >= b.radius - slack || n == 1 {
                let kind = if n == 1 {
                    let lo = centers.iter().map(|c| c[0]).fold(f64::NEG_INFINITY, f64::max) - b.radius;
                    let hi = centers.iter().map(|c| c[0]).fold(f64::INFINITY, f64::min) + b.radius;
                    let poly = HPolytope::boxed(&[lo], &[hi.max(lo)])?;
                    Kind::Polytope(poly)
                } else {
                    Kind::Point(meb.center)
                };
                return Ok(TranslateSet { dim: n, kind });
            }
            Ok(TranslateSet {
                dim: n,
                kind: Kind::Balls(BallTranslates {
                    centers,
                    radius: b.radius,
                    inner: meb.center,
                }),
            })
        }
        Body::Product(prod) => {
            let blocks = prod.blocks();
            let parts = prod
                .factors
                .iter()
                .zip(&blocks)
                .map(|(f, &(s, l))| {
                    let proj: Vec<Vector> = x.iter().map(|p| block(p, s, l)).collect();
                    translate_feasible_set_with(f, &proj, tol)
                })
                .collect::<Result<Vec<_>>>()?;
            if parts.iter().any(|t| t.is_empty()) {
                return Ok(TranslateSet { dim: n, kind: Kind::Empty });
            }
            Ok(TranslateSet { dim: n, kind: Kind::Product { blocks, parts } })
        }
        Body::Oracle(_) => {
            let poly = k.polytope_approximation(tol.direction_grid_size)?;
            Ok(polytope_translates(&poly, x))
        }
        Body::Cone(c) => {
            let kind = match ConeTranslates::new(c, x) {
                Some(ct) => Kind::Cone(ct),
                None => Kind::Empty,
            };
            Ok(TranslateSet { dim: 3, kind })
        }
        Body::Polytope(_) => unreachable!("handled above"),
    }
}

/// `a·(x − t) ≤ b` for all `x` becomes `−a·t ≤ b − h_X(a)`.
fn polytope_translates(k: &HPolytope, x: &[Vector]) -> TranslateSet {
    let mut normals = Vec::with_capacity(k.normals().len());
    let mut offsets = Vec::with_capacity(k.normals().len());
    for (a, b) in k.normals().iter().zip(k.offsets()) {
        let hx = x.iter().map(|p| a.dot(p)).fold(f64::NEG_INFINITY, f64::max);
        normals.push(-a);
        offsets.push(b - hx);
    }
    let poly = HPolytope::from_raw(normals, offsets);
    let kind = if poly.is_empty() { Kind::Empty } else { Kind::Polytope(poly) };
    TranslateSet { dim: k.dim(), kind }
}

/// `⋂ B(c_i, R)` in dimension ≥ 3.
#[derive(Debug, Clone)]
struct BallTranslates {
    centers: Vec<Vector>,
    radius: f64,
    /// Center of the smallest enclosing ball of the centers, a member.
    inner: Vector,
}

impl BallTranslates {
    fn slack(&self) -> f64 {
        1e-9 * (1.0 + self.radius)
    }

    fn contains(&self, t: &Vector, eps: f64) -> bool {
        self.centers.iter().all(|c| (t - c).norm() <= self.radius + eps)
    }

    /// The maximiser lies on the intersection of the spheres of its active
    /// balls, itself a sphere; enumerate active sets of size ≤ n.
    fn support(&self, u: &Vector) -> (f64, Vector) {
        let n = u.len();
        let r = self.radius;
        let slack = self.slack();
        let mut best = (u.dot(&self.inner), self.inner.clone());
        for size in 1..=n.min(self.centers.len()) {
            for set in (0..self.centers.len()).combinations(size) {
                let x0 = &self.centers[set[0]];
                let mut a = Matrix::zeros(n, size - 1);
                for (col, &j) in set[1..].iter().enumerate() {
                    a.set_column(col, &(&self.centers[j] - x0));
                }
                let (center, d) = if size == 1 {
                    (x0.clone(), u.clone())
                } else {
                    let gram = a.transpose() * &a;
                    let Some(inv) = gram.clone().try_inverse() else { continue };
                    if gram.determinant().abs() < 1e-14 {
                        continue;
                    }
                    let rhs = Vector::from_iterator(size - 1, (0..size - 1).map(|c| a.column(c).norm_squared() / 2.0));
                    let center = x0 + &a * (&inv * rhs);
                    let d = u - &a * (&inv * (a.transpose() * u));
                    (center, d)
                };
                let rho2 = r * r - (&center - x0).norm_squared();
                if rho2 < -slack {
                    continue;
                }
                let rho = rho2.max(0.0).sqrt();
                let len = d.norm();
                let t = if len > 1e-12 * u.norm() { &center + d * (rho / len) } else { center };
                if self.contains(&t, slack) {
                    let v = u.dot(&t);
                    if v > best.0 {
                        best = (v, t);
                    }
                }
            }
        }
        best
    }
}

/// Translates `(c, τ)` of an upright cone covering points `(a_j, α_j)`:
/// `τ ∈ [τ_lo, τ_hi]` and `|a_j − c| ≤ ρ_j(τ)` with radii growing in `τ`.
#[derive(Debug, Clone)]
struct ConeTranslates {
    centers: Vec<P2>,
    levels: Vec<f64>,
    radius: f64,
    height: f64,
    tau_lo: f64,
    tau_hi: f64,
}

impl ConeTranslates {
    fn new(k: &ConeBody, x: &[Vector]) -> Option<Self> {
        let b = &k.base_center;
        let mut ct = Self {
            centers: x.iter().map(|p| [p[0] - b[0], p[1] - b[1]]).collect(),
            levels: x.iter().map(|p| p[2] - b[2]).collect(),
            radius: k.base_radius,
            height: k.apex_height,
            tau_lo: 0.0,
            tau_hi: 0.0,
        };
        let hi = ct.levels.iter().copied().fold(f64::INFINITY, f64::min);
        let mut lo = ct.levels.iter().copied().fold(f64::NEG_INFINITY, f64::max) - ct.height;
        if lo > hi + ct.slack() || !ct.feasible(hi) {
            return None;
        }
        if !ct.feasible(lo) {
            let mut top = hi;
            for _ in 0..200 {
                let mid = 0.5 * (lo + top);
                if mid <= lo || mid >= top {
                    break;
                }
                if ct.feasible(mid) {
                    top = mid;
                } else {
                    lo = mid;
                }
            }
            lo = top;
        }
        ct.tau_lo = lo.min(hi);
        ct.tau_hi = hi;
        Some(ct)
    }

    fn slack(&self) -> f64 {
        1e-9 * (1.0 + self.radius)
    }

    fn radii(&self, tau: f64) -> Vec<f64> {
        self.levels
            .iter()
            .map(|a| (self.radius * (1.0 - (a - tau) / self.height)).max(0.0))
            .collect()
    }

    fn slice_support(&self, tau: f64, u: P2) -> Option<(f64, P2)> {
        support_unequal(&self.centers, &self.radii(tau), u, self.slack())
    }

    fn feasible(&self, tau: f64) -> bool {
        self.slice_support(tau, [1.0, 0.0]).is_some()
    }

    fn contains(&self, t: &Vector, eps: f64) -> bool {
        let tau = t[2];
        self.levels.iter().all(|a| a - tau >= -eps && a - tau <= self.height + eps)
            && self
                .centers
                .iter()
                .zip(self.radii(tau))
                .all(|(c, r)| ((c[0] - t[0]).powi(2) + (c[1] - t[1]).powi(2)).sqrt() <= r + eps)
    }

    fn point_at(&self, tau: f64, u: P2) -> Vector {
        let (_, c) = self.slice_support(tau, u).or_else(|| self.slice_support(self.tau_hi, u)).expect("nonempty slice");
        Vector::from_column_slice(&[c[0], c[1], tau])
    }

    /// `max u·t`: the slice value `u_z τ + h_{D(τ)}(u_xy)` is concave in `τ`;
    /// golden-section search over `[τ_lo, τ_hi]`.
    fn support(&self, u: &Vector) -> (f64, Vector) {
        let uxy = [u[0], u[1]];
        if uxy[0].hypot(uxy[1]) <= 1e-15 * u.norm() {
            let tau = if u[2] >= 0.0 { self.tau_hi } else { self.tau_lo };
            let t = self.point_at(tau, [1.0, 0.0]);
            return (u.dot(&t), t);
        }
        let g = |tau: f64| match self.slice_support(tau, uxy) {
            Some((v, _)) => v + u[2] * tau,
            None => f64::NEG_INFINITY,
        };
        let ratio = 0.5 * (5f64.sqrt() - 1.0);
        let (mut a, mut b) = (self.tau_lo, self.tau_hi);
        let mut c = b - ratio * (b - a);
        let mut d = a + ratio * (b - a);
        let (mut gc, mut gd) = (g(c), g(d));
        for _ in 0..90 {
            if b - a <= 1e-15 * (1.0 + a.abs() + b.abs()) {
                break;
            }
            if gc >= gd {
                b = d;
                d = c;
                gd = gc;
                c = b - ratio * (b - a);
                gc = g(c);
            } else {
                a = c;
                c = d;
                gc = gd;
                d = a + ratio * (b - a);
                gd = g(d);
            }
        }
        let mut best = (g(self.tau_lo), self.tau_lo);
        for tau in [self.tau_hi, c, d] {
            let v = g(tau);
            if v > best.0 {
                best = (v, tau);
            }
        }
        let t = self.point_at(best.1, uxy);
        (u.dot(&t), t)
    }

    fn feasible_point(&self) -> Vector {
        let tau = 0.5 * (self.tau_lo + self.tau_hi);
        let pts: Vec<Vector> = [[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]]
            .iter()
            .map(|&d| self.point_at(tau, d))
            .collect();
        pts.iter().fold(Vector::zeros(3), |s, p| s + p) / 4.0
    }
}

impl TranslateSet {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_empty(&self) -> bool {
        match &self.kind {
            Kind::Empty => true,
            Kind::Product { parts, .. } => parts.iter().any(TranslateSet::is_empty),
            _ => false,
        }
    }

    /// The halfspace description, when `T` is polytopal.
    pub fn as_polytope(&self) -> Option<&HPolytope> {
        match &self.kind {
            Kind::Polytope(p) => Some(p),
            _ => None,
        }
    }

    /// `T` for a planar ball gauge.
    pub fn as_disks(&self) -> Option<&DiskIntersection> {
        match &self.kind {
            Kind::Disks(d) => Some(d),
            _ => None,
        }
    }

    /// Factor sets, when `T` splits as a product.
    pub fn factors(&self) -> Option<&[TranslateSet]> {
        match &self.kind {
            Kind::Product { parts, .. } => Some(parts),
            _ => None,
        }
    }

    /// `max_{t∈T} u·t` with a maximiser.
    pub fn support(&self, u: &Vector) -> Result<(f64, Vector)> {
        check_dim(self.dim, u.len())?;
        match &self.kind {
            Kind::Empty => Err(GeomError::NoCoveringTranslate),
            Kind::Point(p) => Ok((u.dot(p), p.clone())),
            Kind::Polytope(p) => p.support_point(u),
            Kind::Disks(d) => {
                let (v, q) = d.support(to_p2(u)).ok_or(GeomError::NoCoveringTranslate)?;
                Ok((v, Vector::from_column_slice(&q)))
            }
            Kind::Balls(b) => Ok(b.support(u)),
            Kind::Cone(c) => Ok(c.support(u)),
            Kind::Product { blocks, parts } => {
                let mut value = 0.0;
                let mut pts = Vec::with_capacity(parts.len());
                for (&(s, l), part) in blocks.iter().zip(parts) {
                    let sub = block(u, s, l);
                    let (v, t) = if sub.norm() == 0.0 {
                        (0.0, part.feasible_point()?)
                    } else {
                        part.support(&sub)?
                    };
                    value += v;
                    pts.push(t);
                }
                Ok((value, concat(&pts)))
            }
        }
    }

    pub fn contains(&self, t: &Vector, eps: f64) -> bool {
        match &self.kind {
            Kind::Empty => false,
            Kind::Point(p) => (t - p).norm() <= eps.max(1e-9),
            Kind::Polytope(p) => p.contains(t, eps),
            Kind::Disks(d) => d.contains(to_p2(t), eps),
            Kind::Balls(b) => b.contains(t, eps),
            Kind::Cone(c) => c.contains(t, eps),
            Kind::Product { blocks, parts } => blocks
                .iter()
                .zip(parts)
                .all(|(&(s, l), part)| part.contains(&block(t, s, l), eps)),
        }
    }

    /// A deterministic member of `T`: Chebyshev center for polytopes, the
    /// enclosing-ball center for ball gauges, a mid-height slice point for
    /// cones.
    pub fn feasible_point(&self) -> Result<Vector> {
        match &self.kind {
            Kind::Empty => Err(GeomError::NoCoveringTranslate),
            Kind::Point(p) => Ok(p.clone()),
            Kind::Polytope(p) => match p.chebyshev_center() {
                Ok((c, _)) => Ok(c),
                Err(_) => Ok(p.vertices().and_then(|v| v.first().cloned()).ok_or(GeomError::NoCoveringTranslate)?),
            },
            Kind::Disks(d) => {
                let pts = d.centers.iter().map(|c| Vector::from_column_slice(c)).collect_vec();
                Ok(min_enclosing_ball(&pts).expect("nonempty").center)
            }
            Kind::Balls(b) => Ok(b.inner.clone()),
            Kind::Cone(c) => Ok(c.feasible_point()),
            Kind::Product { parts, .. } => Ok(concat(&parts.iter().map(|p| p.feasible_point()).collect::<Result<Vec<_>>>()?)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::body::{Ball, ConeBody};
    use crate::linalg::vector;

    #[test]
    fn square_pair_translates() {
        let k = Body::Polytope(HPolytope::boxed(&[0.0, 0.0], &[2.0, 2.0]).unwrap());
        let t = translate_feasible_set(&k, &[vector(&[0.0, 0.0]), vector(&[1.0, 1.0])]).unwrap();
        let poly = t.as_polytope().unwrap();
        for (u, want) in [([1.0, 0.0], 0.0), ([-1.0, 0.0], 1.0), ([0.0, 1.0], 0.0), ([0.0, -1.0], 1.0)] {
            assert!((poly.support_point(&vector(&u)).unwrap().0 - want).abs() < 1e-12);
        }
    }

    #[test]
    fn diameter_pair_pins_ball_translate() {
        let k = Body::Ball(Ball::new(vector(&[0.0, 0.0]), 1.0).unwrap());
        let t = translate_feasible_set(&k, &[vector(&[-1.0, 0.0]), vector(&[1.0, 0.0])]).unwrap();
        assert!(!t.is_empty());
        assert!(t.feasible_point().unwrap().norm() < 1e-9);
        let small = Body::Ball(Ball::new(vector(&[0.0, 0.0]), 0.9).unwrap());
        assert!(translate_feasible_set(&small, &[vector(&[-1.0, 0.0]), vector(&[1.0, 0.0])]).unwrap().is_empty());
    }

    #[test]
    fn ball_lens_in_space() {
        let k = Body::Ball(Ball::new(vector(&[0.0, 0.0, 0.0]), 1.0).unwrap());
        let t = translate_feasible_set(&k, &[vector(&[0.5, 0.0, 0.0]), vector(&[-0.5, 0.0, 0.0])]).unwrap();
        let (v, p) = t.support(&vector(&[0.0, 0.0, 1.0])).unwrap();
        assert!((v - 0.75f64.sqrt()).abs() < 1e-12 && p[0].abs() < 1e-12);
        let (v, _) = t.support(&vector(&[2.0, 0.0, 0.0])).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_point_gives_reflected_gauge() {
        let k = Body::Cone(ConeBody::new(vector(&[0.0, 0.0, 0.0]), 1.0, 1.0).unwrap());
        let x = vector(&[0.3, -0.2, 0.5]);
        let t = translate_feasible_set(&k, std::slice::from_ref(&x)).unwrap();
        for u in crate::directions::sphere_grid(3, 40) {
            let (v, _) = t.support(&u).unwrap();
            let want = u.dot(&x) + k.support(&-&u).unwrap();
            assert!((v - want).abs() < 1e-7, "{u} {v} {want}");
        }
    }
}
