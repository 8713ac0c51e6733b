//! Planar contact sets `(A + t) ∩ ∂B` as unions of boundary arcs.

use std::f64::consts::TAU;

use crate::body::Body;
use crate::error::{GeomError, Result};
use crate::linalg::{basis, vector, Vector};
use crate::polygon::{to_p2, P2};
use crate::strong::{erode_with, Subtrahend};
use crate::tolerance::ToleranceConfig;

use super::{is_summand, SummandReport};

/// Polygon sides used when a planar body has neither polygon nor disk form.
const APPROX_SIDES: usize = 256;

/// Planar body with an exact boundary description.
#[derive(Debug, Clone, PartialEq)]
pub enum Shape2 {
    /// Counter-clockwise vertices (a segment or point is allowed).
    Polygon(Vec<P2>),
    Disk { center: P2, radius: f64 },
}

impl Shape2 {
    pub fn from_body(body: &Body) -> Result<Self> {
        if body.dim() != 2 {
            return Err(GeomError::DimensionMismatch { expected: 2, got: body.dim() });
        }
        if let Body::Ball(b) = body {
            return Ok(Shape2::Disk { center: to_p2(&b.center), radius: b.radius });
        }
        let poly = match body.as_polytope() {
            Some(p) => p,
            None => body.polytope_approximation(APPROX_SIDES)?,
        };
        Ok(Shape2::Polygon(poly.polygon()?))
    }

    fn scale(&self) -> f64 {
        match self {
            Shape2::Disk { radius, .. } => *radius,
            Shape2::Polygon(v) => v
                .iter()
                .flat_map(|p| v.iter().map(move |q| dist(*p, *q)))
                .fold(0.0, f64::max),
        }
    }

    fn perimeter(&self) -> f64 {
        match self {
            Shape2::Disk { radius, .. } => TAU * radius,
            Shape2::Polygon(v) => (0..v.len()).map(|i| dist(v[i], v[(i + 1) % v.len()])).sum(),
        }
    }
}

fn dist(a: P2, b: P2) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}

fn dot(a: P2, b: P2) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

fn angle_param(center: P2, radius: f64, p: P2) -> f64 {
    let a = (p[1] - center[1]).atan2(p[0] - center[0]);
    radius * if a < 0.0 { a + TAU } else { a }
}

/// Arc-length intervals of `∂B` touched by `A + t`.
fn contact_intervals(a: &Shape2, b: &Shape2, t: P2, tol: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    match b {
        Shape2::Polygon(bv) => {
            let m = bv.len();
            let mut start = 0.0;
            for i in 0..m {
                let (p, q) = (bv[i], bv[(i + 1) % m]);
                let len = dist(p, q);
                if len == 0.0 {
                    continue;
                }
                let e = [(q[0] - p[0]) / len, (q[1] - p[1]) / len];
                let n = [e[1], -e[0]];
                let offset = dot(n, p);
                let params: Vec<f64> = match a {
                    Shape2::Polygon(av) => av
                        .iter()
                        .map(|v| [v[0] + t[0], v[1] + t[1]])
                        .filter(|w| dot(n, *w) >= offset - tol)
                        .map(|w| dot([w[0] - p[0], w[1] - p[1]], e))
                        .collect(),
                    Shape2::Disk { center, radius } => {
                        let c = [center[0] + t[0], center[1] + t[1]];
                        if dot(n, c) + radius >= offset - tol {
                            vec![dot([c[0] - p[0], c[1] - p[1]], e)]
                        } else {
                            vec![]
                        }
                    }
                };
                if !params.is_empty() {
                    let lo = params.iter().cloned().fold(f64::INFINITY, f64::min).clamp(0.0, len);
                    let hi = params.iter().cloned().fold(f64::NEG_INFINITY, f64::max).clamp(0.0, len);
                    out.push((start + lo, start + hi));
                }
                start += len;
            }
        }
        Shape2::Disk { center, radius } => match a {
            Shape2::Polygon(av) => {
                for v in av {
                    let w = [v[0] + t[0], v[1] + t[1]];
                    if dist(w, *center) >= radius - tol {
                        let s = angle_param(*center, *radius, w);
                        out.push((s, s));
                    }
                }
            }
            Shape2::Disk { center: ca, radius: ra } => {
                let c = [ca[0] + t[0], ca[1] + t[1]];
                let d = dist(c, *center);
                if d + ra >= radius - tol {
                    if d <= tol {
                        out.push((0.0, TAU * radius));
                    } else {
                        let dir = [(c[0] - center[0]) / d, (c[1] - center[1]) / d];
                        let s = angle_param(*center, *radius, [center[0] + dir[0], center[1] + dir[1]]);
                        out.push((s, s));
                    }
                }
            }
        },
    }
    out
}

/// Number of connected components of `(A + t) ∩ ∂B` and whether it is the
/// whole boundary.
pub fn contact_components(a: &Shape2, b: &Shape2, t: P2, tol: f64) -> (usize, bool) {
    let total = b.perimeter();
    let gap = tol.max(1e-9 * total);
    let mut iv = contact_intervals(a, b, t, tol);
    if iv.is_empty() {
        return (0, false);
    }
    iv.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut merged: Vec<(f64, f64)> = Vec::new();
    for (s, e) in iv {
        match merged.last_mut() {
            Some(last) if s <= last.1 + gap => last.1 = last.1.max(e),
            _ => merged.push((s, e)),
        }
    }
    let wraps = merged[0].0 <= gap && merged.last().unwrap().1 >= total - gap;
    let mut count = merged.len();
    if count > 1 && wraps {
        count -= 1;
    }
    let covered: f64 = merged.iter().map(|(s, e)| e - s).sum();
    let full = count == 1 && covered >= total - 2.0 * gap;
    (count, full)
}

#[derive(Debug, Clone, PartialEq)]
pub struct AcyclicityFailure {
    pub t: Vector,
    pub components: usize,
    pub full_boundary: bool,
}

#[derive(Debug, Clone)]
pub struct CriterionReport {
    pub hypothesis_ok: bool,
    /// Some translate of `A` lies in the interior of `B`.
    pub interior_translate: bool,
    pub acyclicity_failures: Vec<AcyclicityFailure>,
    pub summand_verdict: bool,
    pub summand: SummandReport,
    pub t_grid: usize,
    /// Number of translates examined (grid plus boundary samples).
    pub samples: usize,
}

/// Checks the planar hypothesis of the summand criterion on sampled
/// translates `t` with `A + t ⊆ B`: an interior translate exists and every
/// contact set `(A + t) ∩ ∂B` is empty or one proper arc. Samples are a
/// `t_grid × t_grid` grid over the bounding box of the feasible region plus
/// points of its boundary.
pub fn criterion_check_2d(a: &Body, b: &Body, t_grid: usize, tol: &ToleranceConfig) -> Result<CriterionReport> {
    let sa = Shape2::from_body(a)?;
    let sb = Shape2::from_body(b)?;
    let summand = is_summand(a, b, tol)?;
    let scale = sb.scale().max(1e-300);
    let c = erode_with(b, Subtrahend::Body(a), tol)?;
    if c.is_empty() {
        return Ok(CriterionReport {
            hypothesis_ok: false,
            interior_translate: false,
            acyclicity_failures: Vec::new(),
            summand_verdict: summand.verdict,
            summand,
            t_grid,
            samples: 0,
        });
    }
    let interior_translate = c.inradius().unwrap_or(0.0) > tol.eps_margin * scale;
    let mut ts: Vec<Vector> = Vec::new();
    let lo = vector(&[-c.support(&-basis(2, 0))?, -c.support(&-basis(2, 1))?]);
    let hi = vector(&[c.support(&basis(2, 0))?, c.support(&basis(2, 1))?]);
    let g = t_grid.max(1);
    for i in 0..g {
        for j in 0..g {
            let f = |k: usize| if g == 1 { 0.5 } else { k as f64 / (g - 1) as f64 };
            let t = vector(&[lo[0] + f(i) * (hi[0] - lo[0]), lo[1] + f(j) * (hi[1] - lo[1])]);
            if c.contains(&t, tol.eps_feas * scale) {
                ts.push(t);
            }
        }
    }
    for k in 0..4 * g {
        let th = TAU * k as f64 / (4 * g) as f64;
        ts.push(c.support_point(&vector(&[th.cos(), th.sin()]))?.1);
    }
    if let Some(poly) = c.hform().filter(|_| !c.is_approximate()) {
        if let Ok(verts) = poly.polygon() {
            let m = verts.len();
            for i in 0..m {
                let (p, q) = (verts[i], verts[(i + 1) % m]);
                for k in 0..g {
                    let s = k as f64 / g as f64;
                    ts.push(vector(&[p[0] + s * (q[0] - p[0]), p[1] + s * (q[1] - p[1])]));
                }
            }
        }
    }
    ts.sort_by(|s, t| s[0].total_cmp(&t[0]).then(s[1].total_cmp(&t[1])));
    ts.dedup_by(|s, t| (&*s - &*t).norm() <= 1e-12 * scale);
    let contact_tol = 1e3 * tol.eps_feas * scale;
    let acyclicity_failures: Vec<AcyclicityFailure> = ts
        .iter()
        .filter_map(|t| {
            let (components, full_boundary) = contact_components(&sa, &sb, to_p2(t), contact_tol);
            (components > 1 || full_boundary).then(|| AcyclicityFailure {
                t: t.clone(),
                components,
                full_boundary,
            })
        })
        .collect();
    Ok(CriterionReport {
        hypothesis_ok: interior_translate && acyclicity_failures.is_empty(),
        interior_translate,
        acyclicity_failures,
        summand_verdict: summand.verdict,
        summand,
        t_grid,
        samples: ts.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::body::{Ball, HPolytope};

    fn tri() -> Body {
        Body::Polytope(HPolytope::from_vertices_2d(&[[0.0, 0.0], [3.0, 0.0], [0.0, 3.0]]).unwrap())
    }

    #[test]
    fn segment_in_triangle_fails_hypothesis() {
        let seg = Body::Polytope(HPolytope::from_vertices_2d(&[[0.0, 0.0], [1.0, 0.0]]).unwrap());
        let r = criterion_check_2d(&seg, &tri(), 20, &ToleranceConfig::default()).unwrap();
        assert!(r.interior_translate);
        assert!(!r.hypothesis_ok);
        assert!(!r.summand_verdict);
        // The translate placing the segment at height 2 touches two edges.
        assert!(r
            .acyclicity_failures
            .iter()
            .any(|f| f.components == 2 && (&f.t - vector(&[0.0, 2.0])).norm() < 1e-9));
    }

    #[test]
    fn concentric_disks_and_homothets() {
        let big = Body::Ball(Ball::new(vector(&[0.0, 0.0]), 2.0).unwrap());
        let small = Body::Ball(Ball::new(vector(&[0.0, 0.0]), 0.5).unwrap());
        let r = criterion_check_2d(&small, &big, 15, &ToleranceConfig::default()).unwrap();
        assert!(r.hypothesis_ok && r.summand_verdict);

        let half = tri().scaled(0.5).unwrap();
        let r = criterion_check_2d(&half, &tri(), 15, &ToleranceConfig::default()).unwrap();
        assert!(r.hypothesis_ok, "{:?}", r.acyclicity_failures.first());
        assert!(r.summand_verdict);
    }

    #[test]
    fn disk_filling_disk_covers_whole_boundary() {
        let d = Shape2::Disk { center: [0.0, 0.0], radius: 1.0 };
        assert_eq!(contact_components(&d, &d, [0.0, 0.0], 1e-9), (1, true));
        let sq = Shape2::Polygon(vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]);
        assert_eq!(contact_components(&sq, &sq, [0.0, 0.0], 1e-9), (1, true));
        let small = Shape2::Polygon(vec![[0.0, 0.0], [0.5, 0.0], [0.5, 0.5], [0.0, 0.5]]);
        // Corner contact wraps around the start of the boundary.
        assert_eq!(contact_components(&small, &sq, [0.0, 0.0], 1e-9), (1, false));
        assert_eq!(contact_components(&small, &sq, [0.25, 0.25], 1e-9), (0, false));
    }
}
