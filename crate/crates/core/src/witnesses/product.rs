//! Product witnesses: minimal instances for two factors combine into one for
//! the product gauge.

use itertools::Itertools;

use super::instance::WitnessInstance;
use crate::body::{Body, ProductBody};
use crate::covering::{cover_avoiding, cover_translate_with, CoverWitness};
use crate::error::{GeomError, Result};
use crate::linalg::{concat, Vector};
use crate::strong::hull_member;
use crate::tolerance::ToleranceConfig;

/// A gauge with a point set `Y` and a point `p_Y` in its strong hull.
#[derive(Debug, Clone)]
pub struct FactorWitness {
    pub gauge: Body,
    pub points: Vec<Vector>,
    pub test_point: Vector,
}

impl From<WitnessInstance> for FactorWitness {
    fn from(w: WitnessInstance) -> Self {
        Self {
            gauge: w.gauge,
            points: w.points,
            test_point: w.test_point,
        }
    }
}

/// For each `y`, a translate covering `Y \ {y}` and missing `p_Y`.
fn drop_certificates(f: &FactorWitness, tol: &ToleranceConfig) -> Result<Vec<Option<CoverWitness>>> {
    if !hull_member(&f.gauge, &f.points, &f.test_point, tol)?.is_member() {
        return Err(GeomError::Precondition("factor point is not in the hull".into()));
    }
    if f.points.len() == 1 {
        return Ok(vec![None]);
    }
    (0..f.points.len())
        .map(|i| {
            let rest: Vec<Vector> = f.points.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, v)| v.clone()).collect();
            match cover_avoiding(&f.gauge, &rest, &f.test_point, tol)? {
                Some(w) => Ok(Some(w)),
                None => Err(GeomError::Precondition("factor witness is not minimal".into())),
            }
        })
        .collect()
}

/// `X = (Y × q_Z) ∪ (q_Y × Z)` and `p = (p_Y, p_Z)` with `q_Y`, `q_Z` the
/// first points. No subset of `X` smaller than `|Y| + |Z| − 2` captures `p`.
pub fn witness_product(l: &FactorWitness, m: &FactorWitness, tol: &ToleranceConfig) -> Result<WitnessInstance> {
    let (ly, mz) = (&l.points, &m.points);
    if ly.is_empty() || mz.is_empty() {
        return Err(GeomError::EmptyPointSet);
    }
    let lcert = drop_certificates(l, tol)?;
    let mcert = drop_certificates(m, tol)?;
    let (qy, qz) = (&ly[0], &mz[0]);

    // Index 0 is (q_Y, q_Z); then (y, q_Z) for the other y; then (q_Y, z).
    let mut points = vec![concat(&[qy.clone(), qz.clone()])];
    points.extend(ly[1..].iter().map(|y| concat(&[y.clone(), qz.clone()])));
    points.extend(mz[1..].iter().map(|z| concat(&[qy.clone(), z.clone()])));
    let test_point = concat(&[l.test_point.clone(), m.test_point.clone()]);
    let gauge = Body::Product(ProductBody::new(vec![l.gauge.clone(), m.gauge.clone()])?);

    let cover_l = cover_translate_with(&l.gauge, ly, tol)?;
    let cover_m = cover_translate_with(&m.gauge, mz, tol)?;
    let zeros_l = Vector::zeros(l.gauge.dim());
    let zeros_m = Vector::zeros(m.gauge.dim());
    let lift = |idx: usize| -> Option<CoverWitness> {
        if idx == 0 {
            return None;
        }
        if idx < ly.len() {
            let w = lcert[idx].as_ref()?;
            Some(CoverWitness {
                t: concat(&[w.t.clone(), cover_m.clone()]),
                u: concat(&[w.u.clone(), zeros_m.clone()]),
                margin: w.margin,
            })
        } else {
            let w = mcert[idx - ly.len() + 1].as_ref()?;
            Some(CoverWitness {
                t: concat(&[cover_l.clone(), w.t.clone()]),
                u: concat(&[zeros_l.clone(), w.u.clone()]),
                margin: w.margin,
            })
        }
    };

    let size = points.len();
    let mut certificates = Vec::new();
    if size >= 3 {
        for dropped in (0..size).combinations(2) {
            let w = dropped
                .iter()
                .find_map(|&i| lift(i))
                .ok_or_else(|| GeomError::Internal("no factor certificate".into()))?;
            let subset = (0..size).filter(|i| !dropped.contains(i)).collect();
            certificates.push((subset, w));
        }
    }
    Ok(WitnessInstance {
        gauge,
        points,
        test_point,
        expected_min_subset: (ly.len() + mz.len()).saturating_sub(2),
        certificate_translates: certificates,
    })
}
