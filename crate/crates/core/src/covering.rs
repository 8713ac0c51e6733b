//! Covering a point set by a translate of the gauge, optionally avoiding a
//! point, and the Helly-type check built on it.

use itertools::Itertools;
use rayon::prelude::*;

use crate::body::Body;
use crate::convex::hull_distance_inf;
use crate::error::{GeomError, Result};
use crate::linalg::{check_dim, Vector};
use crate::optim::feasible::translate_feasible_set_with;
use crate::optim::search::exact_search;
use crate::strong::separation;
use crate::tolerance::ToleranceConfig;

/// A translate `K + t` containing `X` with `u·(p − t) − h_K(u) = margin > 0`,
/// so `p ∉ K + t`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverWitness {
    pub t: Vector,
    pub u: Vector,
    pub margin: f64,
}

impl CoverWitness {
    /// Independent recheck: every `x − t ∈ K` and the stated margin is
    /// reproduced and exceeds `eps_margin`.
    pub fn verify(&self, k: &Body, x: &[Vector], p: &Vector, tol: &ToleranceConfig) -> Result<bool> {
        for xi in x {
            if !k.contains(&(xi - &self.t), tol)? {
                return Ok(false);
            }
        }
        let margin = self.u.dot(&(p - &self.t)) - k.support(&self.u)?;
        let scale = 1.0 + p.amax() + self.t.amax();
        Ok(margin > tol.eps_margin && (margin - self.margin).abs() <= 1e-9 * scale)
    }
}

/// Some `t` with `X ⊆ K + t`, chosen deterministically.
pub fn cover_translate(k: &Body, x: &[Vector]) -> Result<Vector> {
    cover_translate_with(k, x, &ToleranceConfig::default())
}

pub fn cover_translate_with(k: &Body, x: &[Vector], tol: &ToleranceConfig) -> Result<Vector> {
    let t = translate_feasible_set_with(k, x, tol)?;
    if t.is_empty() {
        return Err(GeomError::NoCoveringTranslate);
    }
    t.feasible_point()
}

/// A covering translate of `X` missing `p`, or `None` at the configured
/// resolution.
pub fn cover_avoiding(k: &Body, x: &[Vector], p: &Vector, tol: &ToleranceConfig) -> Result<Option<CoverWitness>> {
    check_dim(k.dim(), p.len())?;
    let t = translate_feasible_set_with(k, x, tol)?;
    if t.is_empty() {
        return Err(GeomError::NoCoveringTranslate);
    }
    let r = separation(k, &t, p, tol)?;
    if r.value <= tol.eps_margin {
        return Ok(None);
    }
    Ok(Some(CoverWitness {
        t: r.best_t,
        u: r.best_u,
        margin: r.value,
    }))
}

/// Whether `cover_avoiding` is exact for this gauge (no grid search).
pub fn exact_gauge(k: &Body) -> bool {
    match k {
        Body::Polytope(_) => true,
        Body::Ball(b) => b.center.len() <= 2,
        Body::Product(p) => p.factors.iter().all(exact_gauge),
        _ => false,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HellyReport {
    /// Some translate covers all of `X`.
    pub fits: bool,
    /// `0 ∉ conv X`.
    pub origin_outside_hull: bool,
    /// Every subset of at most `n` points is covered by a translate missing 0.
    pub hypothesis_ok: bool,
    pub failing_subset: Option<Vec<usize>>,
    pub conclusion_witness: Option<CoverWitness>,
    /// The conclusion needed a rerun at 10× direction resolution.
    pub escalated: bool,
}

/// Checks the hypothesis (every `≤ n` points coverable avoiding the origin)
/// and the conclusion (all of `X` coverable avoiding the origin).
pub fn helly_check(k: &Body, x: &[Vector], n: usize, tol: &ToleranceConfig) -> Result<HellyReport> {
    let dim = k.dim();
    if x.is_empty() {
        return Err(GeomError::EmptyPointSet);
    }
    for p in x {
        check_dim(dim, p.len())?;
    }
    let origin = Vector::zeros(dim);
    let fits = !translate_feasible_set_with(k, x, tol)?.is_empty();
    let origin_outside_hull = hull_distance_inf(x, &origin)? > tol.eps_feas;

    let subsets: Vec<Vec<usize>> = (1..=n.min(x.len()))
        .flat_map(|s| (0..x.len()).combinations(s))
        .collect();
    let ok = subsets
        .par_iter()
        .map(|idx| {
            let pts: Vec<Vector> = idx.iter().map(|&i| x[i].clone()).collect();
            match cover_avoiding(k, &pts, &origin, tol) {
                Ok(w) => Ok(w.is_some()),
                Err(GeomError::NoCoveringTranslate) => Ok(false),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<Vec<bool>>>()?;
    let failing_subset = subsets.iter().zip(&ok).find(|(_, ok)| !**ok).map(|(s, _)| s.clone());
    let hypothesis_ok = failing_subset.is_none();

    let mut conclusion_witness = None;
    let mut escalated = false;
    if fits {
        conclusion_witness = cover_avoiding(k, x, &origin, tol)?;
        let searched = exact_search(k, &translate_feasible_set_with(k, x, tol)?, &origin)?.is_none() && !exact_gauge(k);
        if conclusion_witness.is_none() && hypothesis_ok && origin_outside_hull && searched {
            escalated = true;
            conclusion_witness = cover_avoiding(k, x, &origin, &tol.escalated(10))?;
        }
    }
    Ok(HellyReport {
        fits,
        origin_outside_hull,
        hypothesis_ok,
        failing_subset,
        conclusion_witness,
        escalated,
    })
}
