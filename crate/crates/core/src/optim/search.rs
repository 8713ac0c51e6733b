//! Search for a covering translate that misses a point:
//! `sup_{u, t∈T} u·(p − t) − h_K(u)`.

use std::cmp::Ordering;

use rayon::prelude::*;

use crate::body::Body;
use crate::directions::sphere_grid;
use crate::error::{GeomError, Result};
use crate::linalg::{check_dim, Vector};
use crate::optim::feasible::TranslateSet;
use crate::polygon::to_p2;
use crate::tolerance::ToleranceConfig;

#[derive(Debug, Clone, PartialEq)]
pub struct MaxConvexResult {
    pub best_t: Vector,
    pub best_u: Vector,
    pub value: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone)]
struct Probe {
    u: Vector,
    t: Vector,
    value: f64,
}

fn evaluate(k: &Body, t_set: &TranslateSet, p: &Vector, u: &Vector) -> Result<Probe> {
    let (ht, t) = t_set.support(&-u)?;
    let value = u.dot(p) + ht - k.support(u)?;
    Ok(Probe { u: u.clone(), t, value })
}

/// Larger value wins; equal values prefer the lexicographically smaller `u`.
fn better(a: &Probe, b: &Probe) -> bool {
    match a.value.total_cmp(&b.value) {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => a
            .u
            .iter()
            .zip(b.u.iter())
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            == Some(Ordering::Less),
    }
}

/// Directions where the supremum is attained exactly for polytopal and
/// planar ball gauges.
fn exact_candidates(k: &Body, t_set: &TranslateSet, p: &Vector) -> Vec<Vector> {
    let mut out = Vec::new();
    if let Some(poly) = k.as_polytope() {
        out.extend(poly.normals().iter().map(|a| a / a.norm()));
    }
    if let (Body::Ball(b), Some(d)) = (k, t_set.as_disks()) {
        let q = to_p2(&(p - &b.center));
        if let Some((_, far)) = d.farthest_from(q) {
            let u = Vector::from_column_slice(&[q[0] - far[0], q[1] - far[1]]);
            if u.norm() > 0.0 {
                out.push(&u / u.norm());
            }
        }
    }
    out
}

/// The supremum for polytopal and planar ball gauges, where it is attained
/// on [`exact_candidates`]; `None` for other gauges.
pub(crate) fn exact_search(k: &Body, t_set: &TranslateSet, p: &Vector) -> Result<Option<MaxConvexResult>> {
    let exact = k.as_polytope().is_some() || (matches!(k, Body::Ball(_)) && t_set.as_disks().is_some());
    if !exact {
        return Ok(None);
    }
    if t_set.is_empty() {
        return Err(GeomError::NoCoveringTranslate);
    }
    let dirs = exact_candidates(k, t_set, p);
    let mut best: Option<Probe> = None;
    for u in &dirs {
        let probe = evaluate(k, t_set, p, u)?;
        if best.as_ref().is_none_or(|b| better(&probe, b)) {
            best = Some(probe);
        }
    }
    Ok(best.map(|b| MaxConvexResult {
        best_t: b.t,
        best_u: b.u,
        value: b.value,
        evaluations: dirs.len(),
    }))
}

/// Grid search over unit directions followed by coordinate refinement.
/// A value above `eps_margin` certifies `p ∉ K + best_t` with `X ⊆ K + best_t`.
pub fn max_convex_search(k: &Body, t_set: &TranslateSet, p: &Vector, tol: &ToleranceConfig) -> Result<MaxConvexResult> {
    let n = k.dim();
    check_dim(n, p.len())?;
    check_dim(n, t_set.dim())?;
    if t_set.is_empty() {
        return Err(GeomError::NoCoveringTranslate);
    }
    let mut dirs = sphere_grid(n, tol.direction_grid_size);
    dirs.extend(exact_candidates(k, t_set, p));
    let probes = dirs
        .par_iter()
        .map(|u| evaluate(k, t_set, p, u))
        .collect::<Result<Vec<_>>>()?;
    let mut evaluations = probes.len();
    let mut best = probes[0].clone();
    for probe in &probes[1..] {
        if better(probe, &best) {
            best = probe.clone();
        }
    }

    if n >= 2 {
        let mut step = std::f64::consts::PI / (tol.direction_grid_size as f64).powf(1.0 / (n - 1) as f64);
        for _ in 0..tol.refine_iters {
            let mut candidates = Vec::with_capacity(2 * n);
            for i in 0..n {
                for s in [step, -step] {
                    let mut u = best.u.clone();
                    u[i] += s;
                    let len = u.norm();
                    if len > 0.0 {
                        candidates.push(u / len);
                    }
                }
            }
            let trial = candidates
                .par_iter()
                .map(|u| evaluate(k, t_set, p, u))
                .collect::<Result<Vec<_>>>()?;
            evaluations += trial.len();
            let mut improved = false;
            for probe in trial {
                if probe.value > best.value {
                    best = probe;
                    improved = true;
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
    }

    Ok(MaxConvexResult {
        best_t: best.t,
        best_u: best.u,
        value: best.value,
        evaluations,
    })
}
