//! A cone over a disk in ℝ³ whose Carathéodory number is unbounded: the
//! vertices of a regular `m`-gon need all `m` points.

use std::f64::consts::PI;

use super::instance::WitnessInstance;
use crate::body::{Body, ConeBody};
use crate::covering::{cover_avoiding, CoverWitness};
use crate::error::{GeomError, Result};
use crate::linalg::{vector, Vector};
use crate::polygon::P2;
use crate::tolerance::ToleranceConfig;

/// Circumradius of the point polygon; the cone's base radius is 1.
pub const POLYGON_RADIUS: f64 = 0.5;

/// Circular arc from `from` to `to` (counter-clockwise about `center`).
#[derive(Debug, Clone, PartialEq)]
pub struct Arc2 {
    pub center: P2,
    pub radius: f64,
    pub from: P2,
    pub to: P2,
}

/// A base-plane disk of a separating translate for the polygon minus one
/// vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct BigCircle {
    pub dropped: usize,
    pub center: P2,
    pub radius: f64,
    /// Built from the closed form rather than found by search.
    pub analytic: bool,
}

#[derive(Debug, Clone)]
pub struct ConeWitness {
    pub instance: WitnessInstance,
    pub m: usize,
    pub apex_height: f64,
    /// Distance from the polygon center to the boundary of the unit-radius
    /// hull of the polygon.
    pub d_min: f64,
    pub polygon: Vec<P2>,
    /// Boundary arcs of the unit-radius hull, one per polygon edge.
    pub hull_arcs: Vec<Arc2>,
    pub separators: Vec<BigCircle>,
}

fn polar(r: f64, a: f64) -> P2 {
    [r * a.cos(), r * a.sin()]
}

/// `1 + ½cos(π/m) − √(1 − ¼sin²(π/m))`.
pub fn cone_d_min(m: usize) -> f64 {
    let a = PI / m as f64;
    1.0 + 0.5 * a.cos() - (1.0 - 0.25 * a.sin().powi(2)).sqrt()
}

pub fn witness_cone(m: usize, apex_height: f64, tol: &ToleranceConfig) -> Result<ConeWitness> {
    if m < 4 {
        return Err(GeomError::Precondition("the polygon needs at least 4 vertices".into()));
    }
    let cone = ConeBody::new(vector(&[0.0, 0.0, 0.0]), 1.0, apex_height)?;
    let gauge = Body::Cone(cone);
    let step = 2.0 * PI / m as f64;
    let polygon: Vec<P2> = (0..m).map(|k| polar(POLYGON_RADIUS, k as f64 * step)).collect();
    let points: Vec<Vector> = polygon.iter().map(|q| vector(&[q[0], q[1], 0.0])).collect();
    let d_min = cone_d_min(m);
    let p = vector(&[0.0, 0.0, apex_height * d_min]);

    // The arc through x_k, x_{k+1} is centered opposite their midpoint.
    let half = step / 2.0;
    let w = (1.0 - 0.25 * half.sin().powi(2)).sqrt() - 0.5 * half.cos();
    let hull_arcs = (0..m)
        .map(|k| Arc2 {
            center: polar(-w, k as f64 * step + half),
            radius: 1.0,
            from: polygon[k],
            to: polygon[(k + 1) % m],
        })
        .collect();

    // Without x_k the admissible centers reach the intersection of the unit
    // circles about x_{k−1} and x_{k+1}, beyond x_k's opposite side.
    let reach = (1.0 - 0.25 * step.sin().powi(2)).sqrt() - 0.5 * step.cos();
    let slope = 1.0 / apex_height;
    let mut separators = Vec::with_capacity(m);
    let mut certificates = Vec::with_capacity(m);
    for k in 0..m {
        let angle = k as f64 * step;
        let center = polar(-reach, angle);
        let t = vector(&[center[0], center[1], 0.0]);
        let u = vector(&[angle.cos(), angle.sin(), slope]).normalize();
        let margin = u.dot(&(&p - &t)) - gauge.support(&u)?;
        let subset: Vec<usize> = (0..m).filter(|&i| i != k).collect();
        let rest: Vec<Vector> = subset.iter().map(|&i| points[i].clone()).collect();
        let mut cert = CoverWitness { t, u, margin };
        let mut analytic = true;
        if margin <= tol.eps_margin || !cert.verify(&gauge, &rest, &p, tol)? {
            analytic = false;
            cert = cover_avoiding(&gauge, &rest, &p, tol)?
                .ok_or_else(|| GeomError::Internal(format!("no separator without vertex {k}")))?;
        }
        separators.push(BigCircle {
            dropped: k,
            center: [cert.t[0], cert.t[1]],
            radius: 1.0 + cert.t[2] / apex_height,
            analytic,
        });
        certificates.push((subset, cert));
    }

    Ok(ConeWitness {
        instance: WitnessInstance {
            gauge,
            points,
            test_point: p,
            expected_min_subset: m,
            certificate_translates: certificates,
        },
        m,
        apex_height,
        d_min,
        polygon,
        hull_arcs,
        separators,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_base_constant() {
        assert!((cone_d_min(4) - 0.418139).abs() < 1e-6);
    }

    #[test]
    fn analytic_separators_verify() {
        let tol = ToleranceConfig::default();
        for m in [4, 6, 9] {
            let w = witness_cone(m, 1.0, &tol).unwrap();
            assert!(w.separators.iter().all(|s| s.analytic));
            for (idx, c) in &w.instance.certificate_translates {
                let pts: Vec<Vector> = idx.iter().map(|&i| w.instance.points[i].clone()).collect();
                assert!(c.verify(&w.instance.gauge, &pts, &w.instance.test_point, &tol).unwrap());
            }
        }
        assert!(witness_cone(3, 1.0, &tol).is_err());
    }
}
