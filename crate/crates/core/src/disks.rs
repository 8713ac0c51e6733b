//! Exact queries on intersections of equal-radius disks in the plane.
//!
//! Extreme points of such an intersection are either pairwise circle
//! intersections (vertices) or points of a single circle, so support values
//! and farthest points are maxima over a finite candidate list.

use crate::linalg::{vector, Vector};
use crate::polygon::P2;

#[derive(Debug, Clone, PartialEq)]
pub struct DiskIntersection {
    pub centers: Vec<P2>,
    pub radius: f64,
}

fn dist(a: P2, b: P2) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}

impl DiskIntersection {
    pub fn new(centers: Vec<P2>, radius: f64) -> Self {
        Self { centers, radius }
    }

    fn tol(&self) -> f64 {
        1e-9 * self.radius.max(1.0)
    }

    pub fn contains(&self, p: P2, slack: f64) -> bool {
        self.centers
            .iter()
            .all(|&c| dist(c, p) <= self.radius + slack)
    }

    pub fn is_empty(&self) -> bool {
        let pts: Vec<Vector> = self.centers.iter().map(|c| vector(c)).collect();
        match crate::optim::meb::min_enclosing_ball(&pts) {
            None => true,
            Some(b) => b.radius > self.radius + self.tol(),
        }
    }

    /// Pairwise circle intersections lying in every disk.
    pub fn vertices(&self) -> Vec<P2> {
        let r = self.radius;
        let tol = self.tol();
        let mut out: Vec<P2> = Vec::new();
        for i in 0..self.centers.len() {
            for j in i + 1..self.centers.len() {
                let (a, b) = (self.centers[i], self.centers[j]);
                let d = dist(a, b);
                if d < 1e-14 || d > 2.0 * r + tol {
                    continue;
                }
                let h = (r * r - d * d / 4.0).max(0.0).sqrt();
                let m = [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0];
                let perp = [-(b[1] - a[1]) / d, (b[0] - a[0]) / d];
                for s in [1.0, -1.0] {
                    let v = [m[0] + s * h * perp[0], m[1] + s * h * perp[1]];
                    if self.contains(v, tol) && !out.iter().any(|w| dist(*w, v) < tol) {
                        out.push(v);
                    }
                }
            }
        }
        out
    }

    /// Candidate extreme points: vertices plus, for each disk, the point of its
    /// circle in the direction chosen by `dir_of(center)` when it is feasible.
    fn candidates(&self, dir_of: impl Fn(P2) -> Option<P2>) -> Vec<P2> {
        let tol = self.tol();
        let mut out = self.vertices();
        for &c in &self.centers {
            if let Some(d) = dir_of(c) {
                let p = [c[0] + self.radius * d[0], c[1] + self.radius * d[1]];
                if self.contains(p, tol) {
                    out.push(p);
                }
            }
        }
        if out.is_empty() {
            // All centers coincide: a single disk; any boundary point will do.
            if let Some(&c) = self.centers.first() {
                out.push([c[0] + self.radius, c[1]]);
            }
        }
        out
    }

    /// Support value and a maximiser in direction `u`.
    pub fn support(&self, u: P2) -> Option<(f64, P2)> {
        let n = (u[0] * u[0] + u[1] * u[1]).sqrt();
        if !(n > 0.0) {
            return None;
        }
        let d = [u[0] / n, u[1] / n];
        self.candidates(|_| Some(d))
            .into_iter()
            .map(|p| (u[0] * p[0] + u[1] * p[1], p))
            .max_by(|a, b| a.0.total_cmp(&b.0))
    }

    /// Largest distance from `q` to the intersection, with a farthest point.
    pub fn farthest_from(&self, q: P2) -> Option<(f64, P2)> {
        self.candidates(|c| {
            let d = dist(c, q);
            (d > 1e-14).then(|| [(c[0] - q[0]) / d, (c[1] - q[1]) / d])
        })
        .into_iter()
        .map(|p| (dist(p, q), p))
        .max_by(|a, b| a.0.total_cmp(&b.0))
    }
}

/// Support of `⋂ B(c_i, r_i)` for unequal radii; `None` when the
/// intersection is empty (up to `slack`). The maximiser is a disk's extreme
/// point or a pairwise circle intersection.
pub fn support_unequal(centers: &[P2], radii: &[f64], u: P2, slack: f64) -> Option<(f64, P2)> {
    let n = (u[0] * u[0] + u[1] * u[1]).sqrt();
    if !(n > 0.0) {
        return None;
    }
    let d = [u[0] / n, u[1] / n];
    let inside = |p: P2| centers.iter().zip(radii).all(|(&c, &r)| dist(c, p) <= r + slack);
    let mut best: Option<(f64, P2)> = None;
    let mut consider = |p: P2| {
        if inside(p) {
            let v = u[0] * p[0] + u[1] * p[1];
            if best.is_none_or(|(b, _)| v > b) {
                best = Some((v, p));
            }
        }
    };
    for (&c, &r) in centers.iter().zip(radii) {
        consider([c[0] + r * d[0], c[1] + r * d[1]]);
    }
    for i in 0..centers.len() {
        for j in i + 1..centers.len() {
            let (a, b, ra, rb) = (centers[i], centers[j], radii[i], radii[j]);
            let l = dist(a, b);
            if l < 1e-14 || l > ra + rb + slack || l < (ra - rb).abs() - slack {
                continue;
            }
            // Distance from a along the center line to the chord.
            let x = (l * l + ra * ra - rb * rb) / (2.0 * l);
            let h = (ra * ra - x * x).max(0.0).sqrt();
            let e = [(b[0] - a[0]) / l, (b[1] - a[1]) / l];
            let m = [a[0] + x * e[0], a[1] + x * e[1]];
            for s in [1.0, -1.0] {
                consider([m[0] - s * h * e[1], m[1] + s * h * e[0]]);
            }
        }
    }
    best
}
