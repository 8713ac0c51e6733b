//! Erosion `K ⊛ S`, strongly convex hulls `conv_K X = K ⊛ (K ⊛ X)` and hull
//! membership.

use crate::body::{Ball, Body, HPolytope};
use crate::covering::CoverWitness;
use crate::directions::sphere_grid;
use crate::error::{GeomError, Result};
use crate::linalg::{block, check_dim, concat, Vector};
use crate::optim::feasible::{translate_feasible_set_with, TranslateSet};
use crate::optim::search::{exact_search, max_convex_search, MaxConvexResult};
use crate::polygon::to_p2;
use crate::tolerance::ToleranceConfig;

/// What is eroded away from the gauge.
#[derive(Debug, Clone, Copy)]
pub enum Subtrahend<'a> {
    Points(&'a [Vector]),
    Body(&'a Body),
    Set(&'a StrongSet),
}

#[derive(Debug, Clone)]
enum Repr {
    Empty,
    Singleton(Vector),
    /// `−T` where `T` covers the translate list by the gauge.
    Reflected(TranslateSet),
    HForm { poly: HPolytope, approximate: bool },
    Ball(Ball),
    Product { blocks: Vec<(usize, usize)>, parts: Vec<StrongSet> },
}

/// A set of the form `K ⊛ T = ⋂_{t∈T} (K − t)`.
#[derive(Debug, Clone)]
pub struct StrongSet {
    gauge: Body,
    translates: Option<Vec<Vector>>,
    repr: Repr,
}

impl StrongSet {
    pub fn gauge(&self) -> &Body {
        &self.gauge
    }

    /// The finite translate list `T`, when one is known.
    pub fn translates(&self) -> Option<&[Vector]> {
        self.translates.as_deref()
    }

    /// Halfspace form; for polytopal gauges it has the gauge's normals.
    pub fn hform(&self) -> Option<&HPolytope> {
        match &self.repr {
            Repr::HForm { poly, .. } => Some(poly),
            _ => None,
        }
    }

    /// True when the representation is a sampled outer approximation.
    pub fn is_approximate(&self) -> bool {
        match &self.repr {
            Repr::HForm { approximate, .. } => *approximate,
            Repr::Product { parts, .. } => parts.iter().any(StrongSet::is_approximate),
            _ => false,
        }
    }

    pub fn is_empty(&self) -> bool {
        match &self.repr {
            Repr::Empty => true,
            Repr::HForm { poly, .. } => poly.is_empty(),
            Repr::Reflected(t) => t.is_empty(),
            Repr::Product { parts, .. } => parts.iter().any(StrongSet::is_empty),
            Repr::Singleton(_) | Repr::Ball(_) => false,
        }
    }

    pub fn dim(&self) -> usize {
        self.gauge.dim()
    }

    /// Radius of a ball inside the set, when cheaply available: the
    /// Chebyshev radius of an H-form, the radius of a ball, `R` minus the
    /// enclosing radius for planar disk intersections.
    pub fn inradius(&self) -> Option<f64> {
        match &self.repr {
            Repr::Empty => None,
            Repr::Singleton(_) => Some(0.0),
            Repr::HForm { poly, .. } => poly.chebyshev_center().ok().map(|(_, r)| r),
            Repr::Ball(b) => Some(b.radius),
            Repr::Reflected(t) => {
                let d = t.as_disks()?;
                let pts: Vec<Vector> = d.centers.iter().map(|c| Vector::from_column_slice(c)).collect();
                Some(d.radius - crate::optim::meb::min_enclosing_ball(&pts)?.radius)
            }
            Repr::Product { parts, .. } => parts.iter().map(StrongSet::inradius).try_fold(f64::INFINITY, |m, r| Some(m.min(r?))),
        }
    }

    /// Support value and a maximiser.
    pub fn support_point(&self, u: &Vector) -> Result<(f64, Vector)> {
        check_dim(self.dim(), u.len())?;
        match &self.repr {
            Repr::Empty => Err(GeomError::Empty),
            Repr::Singleton(x) => Ok((u.dot(x), x.clone())),
            Repr::Reflected(t) => {
                let (v, p) = t.support(&-u)?;
                Ok((v, -p))
            }
            Repr::HForm { poly, .. } => poly.support_point(u),
            Repr::Ball(b) => {
                let len = u.norm();
                if len == 0.0 {
                    return Err(GeomError::ZeroDirection);
                }
                let x = &b.center + u * (b.radius / len);
                Ok((u.dot(&x), x))
            }
            Repr::Product { blocks, parts } => {
                let mut value = 0.0;
                let mut pts = Vec::new();
                for (&(s, l), part) in blocks.iter().zip(parts) {
                    let sub = block(u, s, l);
                    let (v, x) = if sub.norm() == 0.0 {
                        (0.0, part.any_point()?)
                    } else {
                        part.support_point(&sub)?
                    };
                    value += v;
                    pts.push(x);
                }
                Ok((value, concat(&pts)))
            }
        }
    }

    pub fn support(&self, u: &Vector) -> Result<f64> {
        Ok(self.support_point(u)?.0)
    }

    fn any_point(&self) -> Result<Vector> {
        self.support_point(&crate::linalg::basis(self.dim(), 0)).map(|(_, x)| x)
    }

    /// Membership with slack `eps`.
    pub fn contains(&self, x: &Vector, eps: f64) -> bool {
        match &self.repr {
            Repr::Empty => false,
            Repr::Singleton(c) => (x - c).norm() <= eps,
            Repr::Reflected(t) => t.contains(&-x, eps),
            Repr::HForm { poly, .. } => poly.contains(x, eps),
            Repr::Ball(b) => (x - &b.center).norm() <= b.radius + eps,
            Repr::Product { blocks, parts } => blocks
                .iter()
                .zip(parts)
                .all(|(&(s, l), part)| part.contains(&block(x, s, l), eps)),
        }
    }
}

/// `K ⊛ S` with default tolerances.
pub fn erode(k: &Body, s: Subtrahend<'_>) -> Result<StrongSet> {
    erode_with(k, s, &ToleranceConfig::default())
}

/// `K ⊛ S = {y : y + S ⊆ K}`. Exact for polytopal gauges, ball–ball pairs,
/// finite translate lists and matching products; sampled on the direction
/// grid otherwise.
pub fn erode_with(k: &Body, s: Subtrahend<'_>, tol: &ToleranceConfig) -> Result<StrongSet> {
    let n = k.dim();
    let finish = |translates: Option<Vec<Vector>>, repr: Repr| StrongSet {
        gauge: k.clone(),
        translates,
        repr,
    };
    match s {
        Subtrahend::Points(pts) => {
            if pts.is_empty() {
                return Err(GeomError::EmptyPointSet);
            }
            for p in pts {
                check_dim(n, p.len())?;
            }
            if let Some(poly) = k.as_polytope() {
                let h = |a: &Vector| pts.iter().map(|p| a.dot(p)).fold(f64::NEG_INFINITY, f64::max);
                return Ok(finish(Some(pts.to_vec()), eroded_hform(&poly, h)));
            }
            if let Body::Product(prod) = k {
                let blocks = prod.blocks();
                let parts = prod
                    .factors
                    .iter()
                    .zip(&blocks)
                    .map(|(f, &(st, l))| {
                        let proj: Vec<Vector> = pts.iter().map(|p| block(p, st, l)).collect();
                        erode_with(f, Subtrahend::Points(&proj), tol)
                    })
                    .collect::<Result<Vec<_>>>()?;
                return Ok(finish(Some(pts.to_vec()), Repr::Product { blocks, parts }));
            }
            let t = translate_feasible_set_with(k, pts, tol)?;
            let repr = if t.is_empty() { Repr::Empty } else { Repr::Reflected(t) };
            Ok(finish(Some(pts.to_vec()), repr))
        }
        Subtrahend::Body(a) => {
            check_dim(n, a.dim())?;
            if let (Body::Ball(kb), Body::Ball(ab)) = (k, a) {
                if ab.radius > kb.radius {
                    return Ok(finish(None, Repr::Empty));
                }
                let ball = Ball {
                    center: &kb.center - &ab.center,
                    radius: kb.radius - ab.radius,
                };
                return Ok(finish(None, Repr::Ball(ball)));
            }
            if let Some(verts) = a.as_polytope().and_then(|p| p.vertices().map(<[Vector]>::to_vec)) {
                if verts.is_empty() {
                    return Err(GeomError::Empty);
                }
                return erode_with(k, Subtrahend::Points(&verts), tol);
            }
            if let Some(poly) = k.as_polytope() {
                let repr = eroded_hform_fallible(&poly, |u| a.support(u))?;
                return Ok(finish(None, repr));
            }
            sampled_erosion(k, |u| a.support(u), tol).map(|r| finish(None, r))
        }
        Subtrahend::Set(set) => {
            check_dim(n, set.dim())?;
            if set.is_empty() {
                return Err(GeomError::Empty);
            }
            if let Some(poly) = k.as_polytope() {
                let repr = eroded_hform_fallible(&poly, |u| set.support(u))?;
                return Ok(finish(None, repr));
            }
            sampled_erosion(k, |u| set.support(u), tol).map(|r| finish(None, r))
        }
    }
}

fn eroded_hform(k: &HPolytope, h: impl Fn(&Vector) -> f64) -> Repr {
    eroded_hform_fallible(k, |a| Ok(h(a))).expect("infallible")
}

fn eroded_hform_fallible(k: &HPolytope, h: impl Fn(&Vector) -> Result<f64>) -> Result<Repr> {
    let offsets = k
        .normals()
        .iter()
        .zip(k.offsets())
        .map(|(a, b)| Ok(b - h(a)?))
        .collect::<Result<Vec<_>>>()?;
    let poly = HPolytope::from_raw(k.normals().to_vec(), offsets);
    if poly.is_empty() {
        return Ok(Repr::Empty);
    }
    Ok(Repr::HForm { poly, approximate: false })
}

fn sampled_erosion(k: &Body, h: impl Fn(&Vector) -> Result<f64>, tol: &ToleranceConfig) -> Result<Repr> {
    let grid = sphere_grid(k.dim(), tol.direction_grid_size);
    let offsets = grid
        .iter()
        .map(|u| Ok(k.support(u)? - h(u)?))
        .collect::<Result<Vec<_>>>()?;
    let poly = HPolytope::from_raw(grid, offsets);
    if poly.is_empty() {
        return Ok(Repr::Empty);
    }
    Ok(Repr::HForm { poly, approximate: true })
}

/// `conv_K X` with default tolerances.
pub fn strong_hull(k: &Body, x: &[Vector]) -> Result<StrongSet> {
    strong_hull_with(k, x, &ToleranceConfig::default())
}

/// `conv_K X = K ⊛ (K ⊛ X)`, the intersection of all translates of `K`
/// containing `X`. Fails with `HullUndefined` when no translate contains `X`.
pub fn strong_hull_with(k: &Body, x: &[Vector], tol: &ToleranceConfig) -> Result<StrongSet> {
    let t = translate_feasible_set_with(k, x, tol)?;
    if t.is_empty() {
        return Err(GeomError::HullUndefined);
    }
    let n = k.dim();
    let finish = |translates: Option<Vec<Vector>>, repr: Repr| StrongSet {
        gauge: k.clone(),
        translates,
        repr,
    };
    if let Some(poly) = k.as_polytope() {
        // conv_K X = ⋂_{t∈T} (K + t): offsets b_i + min_t a_i·t.
        let tp = t.as_polytope().expect("polytopal gauge gives polytopal translates");
        let offsets = poly
            .normals()
            .iter()
            .zip(poly.offsets())
            .map(|(a, b)| Ok(b - tp.support_point(&-a)?.0))
            .collect::<Result<Vec<_>>>()?;
        let translates = tp.vertices().map(|vs| vs.iter().map(|v| -v).collect());
        let hull = HPolytope::from_raw(poly.normals().to_vec(), offsets);
        return Ok(finish(translates, Repr::HForm { poly: hull, approximate: false }));
    }
    match k {
        Body::Product(prod) => {
            let blocks = prod.blocks();
            let parts = prod
                .factors
                .iter()
                .zip(&blocks)
                .map(|(f, &(s, l))| {
                    let proj: Vec<Vector> = x.iter().map(|p| block(p, s, l)).collect();
                    strong_hull_with(f, &proj, tol)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(finish(None, Repr::Product { blocks, parts }))
        }
        Body::Ball(b) if n == 2 => {
            let disks = t.as_disks().expect("planar ball gauge gives disks");
            let verts = disks.vertices();
            let first = to_p2(&x[0]);
            let all_same = x.iter().all(|p| (to_p2(p)[0] - first[0]).abs() + (to_p2(p)[1] - first[1]).abs() < 1e-12);
            if all_same || verts.is_empty() {
                return Ok(finish(Some(vec![&b.center - &x[0]]), Repr::Singleton(x[0].clone())));
            }
            // ⋂ over vertices v of T of B(c + v, R); as K ⊛ S, S = {−v}.
            let s: Vec<Vector> = verts.iter().map(|v| -Vector::from_column_slice(v)).collect();
            let inner = translate_feasible_set_with(k, &s, tol)?;
            Ok(finish(Some(s), Repr::Reflected(inner)))
        }
        _ => {
            // Offsets h_K(v) − h_I(v) with I = −T, so h_I(v) = h_T(−v).
            let repr = sampled_erosion(k, |u| Ok(t.support(&-u)?.0), tol)?;
            Ok(finish(None, repr))
        }
    }
}

/// Outcome of a hull membership query.
#[derive(Debug, Clone, PartialEq)]
pub enum Membership {
    /// `margin ≤ eps_margin` is the largest separation found (negative when
    /// `p` is strictly inside); `low_margin` flags `|margin| ≤ eps_margin`.
    Member { margin: f64, low_margin: bool },
    NotMember(CoverWitness),
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member { .. })
    }

    pub fn margin(&self) -> f64 {
        match self {
            Membership::Member { margin, .. } => *margin,
            Membership::NotMember(w) => w.margin,
        }
    }

    pub fn witness(&self) -> Option<&CoverWitness> {
        match self {
            Membership::NotMember(w) => Some(w),
            Membership::Member { .. } => None,
        }
    }
}

/// Largest separation `u·(p − t) − h_K(u)` over covering translates `t`,
/// exact for polytopal, planar-ball and product-of-such gauges.
pub(crate) fn separation(k: &Body, t: &TranslateSet, p: &Vector, tol: &ToleranceConfig) -> Result<MaxConvexResult> {
    if let Some(r) = exact_search(k, t, p)? {
        return Ok(r);
    }
    if let (Body::Product(prod), Some(parts)) = (k, t.factors()) {
        let blocks = prod.blocks();
        let mut best: Option<(usize, MaxConvexResult)> = None;
        let mut evaluations = 0;
        for (i, ((f, part), &(s, l))) in prod.factors.iter().zip(parts).zip(&blocks).enumerate() {
            let r = separation(f, part, &block(p, s, l), tol)?;
            evaluations += r.evaluations;
            if best.as_ref().is_none_or(|(_, b)| r.value > b.value) {
                best = Some((i, r));
            }
        }
        let (i, r) = best.expect("nonempty product");
        let mut ts = Vec::new();
        let mut us = Vec::new();
        for (j, (part, &(_, l))) in parts.iter().zip(&blocks).enumerate() {
            if j == i {
                ts.push(r.best_t.clone());
                us.push(r.best_u.clone());
            } else {
                ts.push(part.feasible_point()?);
                us.push(Vector::zeros(l));
            }
        }
        return Ok(MaxConvexResult {
            best_t: concat(&ts),
            best_u: concat(&us),
            value: r.value,
            evaluations,
        });
    }
    max_convex_search(k, t, p, tol)
}

pub(crate) fn classify(r: MaxConvexResult, tol: &ToleranceConfig) -> Membership {
    if r.value > tol.eps_margin {
        Membership::NotMember(CoverWitness {
            t: r.best_t,
            u: r.best_u,
            margin: r.value,
        })
    } else {
        Membership::Member {
            margin: r.value,
            low_margin: r.value.abs() <= tol.eps_margin,
        }
    }
}

/// Is `p ∈ conv_K X`? A point is outside exactly when some translate of `K`
/// containing `X` misses it; such a translate is returned as the witness.
pub fn hull_member(k: &Body, x: &[Vector], p: &Vector, tol: &ToleranceConfig) -> Result<Membership> {
    check_dim(k.dim(), p.len())?;
    let t = translate_feasible_set_with(k, x, tol)?;
    if t.is_empty() {
        return Err(GeomError::HullUndefined);
    }
    Ok(classify(separation(k, &t, p, tol)?, tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::vector;

    fn square2() -> Body {
        Body::Polytope(HPolytope::boxed(&[0.0, 0.0], &[2.0, 2.0]).unwrap())
    }

    #[test]
    fn erosion_by_origin_is_identity() {
        let k = Body::Polytope(HPolytope::cross_polytope(2, 1.0));
        let e = erode(&k, Subtrahend::Points(&[vector(&[0.0, 0.0])])).unwrap();
        for u in sphere_grid(2, 16) {
            assert!((e.support(&u).unwrap() - k.support(&u).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn erosion_by_segment() {
        let k = Body::Polytope(HPolytope::boxed(&[0.0, 0.0], &[1.0, 1.0]).unwrap());
        let seg = Body::Polytope(HPolytope::from_vertices_2d(&[[0.0, 0.0], [0.5, 0.0]]).unwrap());
        let e = erode(&k, Subtrahend::Body(&seg)).unwrap();
        let want = HPolytope::boxed(&[0.0, 0.0], &[0.5, 1.0]).unwrap();
        for u in sphere_grid(2, 16) {
            assert!((e.support(&u).unwrap() - want.support_point(&u).unwrap().0).abs() < 1e-12);
        }
    }

    #[test]
    fn ball_erosion_subtracts_radii() {
        let k = Body::Ball(Ball::new(vector(&[0.0, 0.0]), 2.0).unwrap());
        let a = Body::Ball(Ball::new(vector(&[0.0, 0.0]), 1.0).unwrap());
        let e = erode(&k, Subtrahend::Body(&a)).unwrap();
        assert!((e.support(&vector(&[0.6, 0.8])).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn square_hull_is_bounding_box() {
        let h = strong_hull(&square2(), &[vector(&[0.0, 0.0]), vector(&[1.0, 1.0])]).unwrap();
        let poly = h.hform().unwrap();
        let want = [1.0, 0.0, 1.0, 0.0]; // offsets for +x, −x, +y, −y
        for (b, w) in poly.offsets().iter().zip(want) {
            assert!((b - w).abs() < 1e-12);
        }
    }

    #[test]
    fn singleton_hull() {
        let x = vector(&[0.3, 0.4]);
        for k in [square2(), Body::Ball(Ball::new(vector(&[0.0, 0.0]), 1.0).unwrap())] {
            let h = strong_hull(&k, std::slice::from_ref(&x)).unwrap();
            for u in sphere_grid(2, 12) {
                assert!((h.support(&u).unwrap() - u.dot(&x)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn disk_hull_of_two_points_is_lens() {
        let k = Body::Ball(Ball::new(vector(&[0.0, 0.0]), 1.0).unwrap());
        let h = strong_hull(&k, &[vector(&[-0.5, 0.0]), vector(&[0.5, 0.0])]).unwrap();
        let c = 0.75f64.sqrt();
        // Top of the lens is the top of B((0, −c), 1).
        assert!((h.support(&vector(&[0.0, 1.0])).unwrap() - (1.0 - c)).abs() < 1e-12);
        assert!((h.support(&vector(&[1.0, 0.0])).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn membership_examples() {
        let tol = ToleranceConfig::default();
        let x = [vector(&[0.0, 0.0]), vector(&[1.0, 1.0])];
        assert!(hull_member(&square2(), &x, &vector(&[0.2, 0.8]), &tol).unwrap().is_member());
        assert!(hull_member(&square2(), &x, &x[1], &tol).unwrap().is_member());
        let out = hull_member(&square2(), &x, &vector(&[1.5, 0.5]), &tol).unwrap();
        let w = out.witness().unwrap();
        assert!((&w.t - vector(&[-1.0, 0.0])).norm() < 1e-12);
        assert!(w.verify(&square2(), &x, &vector(&[1.5, 0.5]), &tol).unwrap());
    }

    #[test]
    fn undefined_hull() {
        let k = Body::Ball(Ball::new(vector(&[0.0, 0.0]), 0.9).unwrap());
        let x = [vector(&[-1.0, 0.0]), vector(&[1.0, 0.0])];
        assert_eq!(strong_hull(&k, &x).unwrap_err(), GeomError::HullUndefined);
    }
}
