//! Deterministic SVG output for planar content and the cone base diagram.

use std::fmt::Write;

use strongconvex::polygon::P2;
use strongconvex::witnesses::{Arc2, ConeWitness};
use strongconvex::{Body, StrongSet, Vector};

#[derive(Debug, Clone)]
pub enum Overlay {
    Polygon { class: String, points: Vec<P2> },
    Circle { class: String, center: P2, radius: f64 },
    Arc { class: String, arc: Arc2 },
    Point { class: String, at: P2 },
}

#[derive(Debug, Clone)]
pub struct RenderSpec {
    pub width: f64,
    pub height: f64,
    /// Blank border in pixels.
    pub padding: f64,
    pub stroke_width: f64,
    pub point_radius: f64,
}

impl Default for RenderSpec {
    fn default() -> Self {
        Self {
            width: 600.0,
            height: 600.0,
            padding: 24.0,
            stroke_width: 1.5,
            point_radius: 3.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RenderError {
    #[error("cannot draw {0}-dimensional content")]
    NotPlanar(usize),
    #[error("nothing to draw")]
    Empty,
    #[error("{0}")]
    Geometry(String),
}

fn num(x: f64) -> String {
    let s = format!("{x:.4}");
    if s.trim_start_matches('-').trim_matches(|c| c == '0' || c == '.').is_empty() {
        "0".into()
    } else {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

const STYLE: &str = "\
.body{fill:#e8eef7;stroke:#345;}\
.hull{fill:#cfe3cf;fill-opacity:0.7;stroke:#263;}\
.base-circle{fill:none;stroke:#345;}\
.inner-circle{fill:none;stroke:#888;stroke-dasharray:4 3;}\
.base-polygon{fill:none;stroke:#333;}\
.hull-arc{fill:none;stroke:#c33;}\
.separator{fill:none;stroke:#36c;}\
.translate{fill:none;stroke:#36c;stroke-dasharray:6 3;}\
.center{fill:#36c;}\
.vertex,.point{fill:#111;}\
.dropped-vertex,.test-point{fill:#c33;}";

/// Renders overlays in order; world coordinates are fitted to the viewport
/// with `y` pointing up.
pub fn render_svg(overlays: &[Overlay], spec: &RenderSpec) -> Result<String, RenderError> {
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    let mut grow = |p: P2, r: f64| {
        for i in 0..2 {
            lo[i] = lo[i].min(p[i] - r);
            hi[i] = hi[i].max(p[i] + r);
        }
    };
    for o in overlays {
        match o {
            Overlay::Polygon { points, .. } => points.iter().for_each(|&p| grow(p, 0.0)),
            Overlay::Circle { center, radius, .. } => grow(*center, *radius),
            Overlay::Arc { arc, .. } => {
                grow(arc.from, 0.0);
                grow(arc.to, 0.0);
            }
            Overlay::Point { at, .. } => grow(*at, 0.0),
        }
    }
    if !(lo[0].is_finite() && hi[0].is_finite()) {
        return Err(RenderError::Empty);
    }
    let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-9);
    let scale = ((spec.width.min(spec.height)) - 2.0 * spec.padding) / span;
    let ox = spec.padding + 0.5 * (spec.width - 2.0 * spec.padding - scale * (hi[0] - lo[0]));
    let oy = spec.padding + 0.5 * (spec.height - 2.0 * spec.padding - scale * (hi[1] - lo[1]));
    let map = |p: P2| (num(ox + scale * (p[0] - lo[0])), num(oy + scale * (hi[1] - p[1])));

    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">",
        num(spec.width),
        num(spec.height),
        num(spec.width),
        num(spec.height)
    );
    let _ = writeln!(out, "<style>{STYLE}</style>");
    let _ = writeln!(out, "<g stroke-width=\"{}\">", num(spec.stroke_width));
    for o in overlays {
        match o {
            Overlay::Polygon { class, points } => {
                let pts: Vec<String> = points
                    .iter()
                    .map(|&p| {
                        let (x, y) = map(p);
                        format!("{x},{y}")
                    })
                    .collect();
                let _ = writeln!(out, "<polygon class=\"{class}\" points=\"{}\"/>", pts.join(" "));
            }
            Overlay::Circle { class, center, radius } => {
                let (x, y) = map(*center);
                let _ = writeln!(
                    out,
                    "<circle class=\"{class}\" cx=\"{x}\" cy=\"{y}\" r=\"{}\" data-radius=\"{}\"/>",
                    num(scale * radius),
                    num(*radius)
                );
            }
            Overlay::Arc { class, arc } => {
                let (fx, fy) = map(arc.from);
                let (tx, ty) = map(arc.to);
                let (a, b) = (
                    [arc.from[0] - arc.center[0], arc.from[1] - arc.center[1]],
                    [arc.to[0] - arc.center[0], arc.to[1] - arc.center[1]],
                );
                let cross = a[0] * b[1] - a[1] * b[0];
                let dot = a[0] * b[0] + a[1] * b[1];
                // Counter-clockwise stays counter-clockwise on screen, which
                // is the negative-angle sweep in SVG's downward y axis.
                let angle = cross.atan2(dot).rem_euclid(std::f64::consts::TAU);
                let large = u8::from(angle > std::f64::consts::PI);
                let r = num(scale * arc.radius);
                let _ = writeln!(
                    out,
                    "<path class=\"{class}\" d=\"M {fx} {fy} A {r} {r} 0 {large} 0 {tx} {ty}\" data-radius=\"{}\"/>",
                    num(arc.radius)
                );
            }
            Overlay::Point { class, at } => {
                let (x, y) = map(*at);
                let _ = writeln!(out, "<circle class=\"{class}\" cx=\"{x}\" cy=\"{y}\" r=\"{}\"/>", num(spec.point_radius));
            }
        }
    }
    out.push_str("</g>\n</svg>\n");
    Ok(out)
}

fn p2(v: &Vector) -> P2 {
    [v[0], v[1]]
}

/// Outline of a planar body; cones are drawn by their base disk.
pub fn body_overlay(body: &Body, class: &str) -> Result<Overlay, RenderError> {
    let class = class.to_string();
    match body {
        Body::Ball(b) if b.center.len() == 2 => Ok(Overlay::Circle { class, center: p2(&b.center), radius: b.radius }),
        Body::Cone(c) => Ok(Overlay::Circle { class, center: p2(&c.base_center), radius: c.base_radius }),
        b if b.dim() == 2 => {
            let poly = match b.as_polytope() {
                Some(p) => p,
                None => b.polytope_approximation(256).map_err(|e| RenderError::Geometry(e.to_string()))?,
            };
            let points = poly.polygon().map_err(|e| RenderError::Geometry(e.to_string()))?;
            Ok(Overlay::Polygon { class, points })
        }
        b => Err(RenderError::NotPlanar(b.dim())),
    }
}

/// Outline of a planar strong set, traced by support points.
pub fn set_overlay(set: &StrongSet, class: &str) -> Result<Overlay, RenderError> {
    if set.dim() != 2 {
        return Err(RenderError::NotPlanar(set.dim()));
    }
    let geometry = |e: strongconvex::GeomError| RenderError::Geometry(e.to_string());
    let points = match set.hform().filter(|_| !set.is_approximate()) {
        Some(poly) => poly.polygon().map_err(geometry)?,
        None => {
            let mut pts: Vec<P2> = Vec::new();
            for k in 0..256 {
                let th = std::f64::consts::TAU * k as f64 / 256.0;
                let (_, x) = set.support_point(&Vector::from_vec(vec![th.cos(), th.sin()])).map_err(geometry)?;
                let q = p2(&x);
                if pts.last().is_none_or(|l| (l[0] - q[0]).hypot(l[1] - q[1]) > 1e-9) {
                    pts.push(q);
                }
            }
            pts
        }
    };
    Ok(Overlay::Polygon { class: class.into(), points })
}

/// Base-plane diagram of a cone witness: base circle, the circle through
/// the polygon, the polygon, the unit-radius hull arcs, the center below
/// the test point, and the big circle of the translate that separates the
/// polygon without vertex `dropped`.
pub fn cone_figure(w: &ConeWitness, dropped: usize) -> Vec<Overlay> {
    let s = |c: &str| c.to_string();
    let mut out = vec![
        Overlay::Circle { class: s("base-circle"), center: [0.0, 0.0], radius: 1.0 },
        Overlay::Circle {
            class: s("inner-circle"),
            center: [0.0, 0.0],
            radius: strongconvex::witnesses::cone::POLYGON_RADIUS,
        },
        Overlay::Polygon { class: s("base-polygon"), points: w.polygon.clone() },
    ];
    out.extend(w.hull_arcs.iter().map(|a| Overlay::Arc { class: s("hull-arc"), arc: a.clone() }));
    let sep = w.separators.iter().find(|b| b.dropped == dropped);
    if let Some(sep) = sep {
        out.push(Overlay::Circle { class: s("separator"), center: sep.center, radius: sep.radius });
    }
    out.extend(w.polygon.iter().map(|&v| Overlay::Point { class: s("vertex"), at: v }));
    if let Some(sep) = sep {
        out.push(Overlay::Point { class: s("dropped-vertex"), at: w.polygon[sep.dropped] });
    }
    out.push(Overlay::Point { class: s("center"), at: [0.0, 0.0] });
    out
}
