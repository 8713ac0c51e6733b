//! Minkowski summands: `A` is a summand of `B` exactly when
//! `A + (B ⊛ A) = B`.

mod contact2d;

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::body::{Body, SupportOracle};
use crate::directions::sphere_grid;
use crate::error::{GeomError, Result};
use crate::linalg::{basis, Vector};
use crate::strong::{erode_with, StrongSet, Subtrahend};
use crate::tolerance::ToleranceConfig;

pub use contact2d::{contact_components, criterion_check_2d, AcyclicityFailure, CriterionReport, Shape2};

#[derive(Debug, Clone)]
pub struct SummandReport {
    /// `C = B ⊛ A`; `None` when empty.
    pub summand: Option<StrongSet>,
    /// Largest gap `|h_B − h_A − h_C|` over probe directions. When `C` is a
    /// sampled outer approximation only the certified side `h_B − h_A − h_C`
    /// is counted.
    pub residual: f64,
    pub verdict: bool,
    pub witness_direction: Option<Vector>,
    /// Threshold the residual was compared against.
    pub threshold: f64,
    pub explanation: Option<String>,
}

fn probe_directions(a: &Body, b: &Body, c: &StrongSet, tol: &ToleranceConfig) -> Vec<Vector> {
    let mut dirs = Vec::new();
    for body in [a, b] {
        if let Some(p) = body.as_polytope() {
            dirs.extend(p.normals().iter().map(|v| v / v.norm()));
        }
    }
    if let Some(p) = c.hform() {
        if !c.is_approximate() {
            dirs.extend(p.normals().iter().map(|v| v / v.norm()));
        }
    }
    dirs.extend(sphere_grid(b.dim(), tol.direction_grid_size));
    dirs
}

/// Is `A` a Minkowski summand of `B`? Computes `C = B ⊛ A` and compares
/// `h_A + h_C` with `h_B` on the normals of `A`, `B`, `C` and a direction
/// grid; in the plane the normals alone already decide it for polygons.
pub fn is_summand(a: &Body, b: &Body, tol: &ToleranceConfig) -> Result<SummandReport> {
    let n = b.dim();
    if a.dim() != n {
        return Err(GeomError::DimensionMismatch { expected: n, got: a.dim() });
    }
    let scale = b.diameter()?.max(1e-300);
    let c = erode_with(b, Subtrahend::Body(a), tol)?;
    if c.is_empty() {
        return Ok(SummandReport {
            summand: None,
            residual: f64::INFINITY,
            verdict: false,
            witness_direction: None,
            threshold: 0.0,
            explanation: Some("A fits in no translate of B".into()),
        });
    }
    let approximate = c.is_approximate();
    let threshold = if approximate { tol.eps_margin } else { tol.eps_feas } * scale;
    let mut residual: f64 = 0.0;
    let mut witness = None;
    for u in probe_directions(a, b, &c, tol) {
        let gap = b.support(&u)? - a.support(&u)? - c.support(&u)?;
        let gap = if approximate { gap } else { gap.abs() };
        if gap > residual {
            residual = gap;
            witness = Some(u);
        }
    }
    let verdict = residual <= threshold;
    Ok(SummandReport {
        summand: Some(c),
        residual,
        verdict,
        witness_direction: if verdict { None } else { witness },
        threshold,
        explanation: None,
    })
}

#[derive(Debug, Clone)]
pub enum PairTestOutcome {
    Pass { samples: usize },
    Counterexample { t1: Vector, t2: Vector, report: Box<SummandReport> },
}

/// Wraps a strong set as a body known by its support function.
fn as_body(set: &StrongSet) -> Body {
    if let Some(p) = set.hform() {
        if !set.is_approximate() {
            return Body::Polytope(p.clone());
        }
    }
    let inner = Arc::new(set.clone());
    let eps = 1e-12;
    let member = inner.clone();
    Body::Oracle(SupportOracle {
        dim: set.dim(),
        support: Arc::new(move |u: &Vector| inner.support(u).unwrap_or(f64::NAN)),
        membership: Some(Arc::new(move |x: &Vector, slack: f64| member.contains(x, slack.max(eps)))),
        label: "erosion".into(),
    })
}

/// Samples pairs `t₁, t₂` from the bounding box of `K − K` with
/// `K ⊛ {t₁, t₂}` nonempty and checks that the erosion is a summand of `K`.
/// Reports the first failure.
pub fn generating_pair_test(k: &Body, sample_count: usize, seed: u64, tol: &ToleranceConfig) -> Result<PairTestOutcome> {
    let n = k.dim();
    let half: Vec<f64> = (0..n)
        .map(|i| Ok(k.support(&basis(n, i))? + k.support(&-basis(n, i))?))
        .collect::<Result<_>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| Vector::from_iterator(n, half.iter().map(|&w| rng.gen_range(-w..=w)));
    let mut tested = 0;
    let mut attempts = 0;
    while tested < sample_count {
        attempts += 1;
        if attempts > 1000 * sample_count.max(1) {
            return Err(GeomError::NoConvergence("rejection sampling found too few pairs".into()));
        }
        let t1 = draw(&mut rng);
        let t2 = draw(&mut rng);
        let a = erode_with(k, Subtrahend::Points(&[t1.clone(), t2.clone()]), tol)?;
        if a.is_empty() {
            continue;
        }
        tested += 1;
        let report = is_summand(&as_body(&a), k, tol)?;
        if !report.verdict {
            return Ok(PairTestOutcome::Counterexample {
                t1,
                t2,
                report: Box::new(report),
            });
        }
    }
    Ok(PairTestOutcome::Pass { samples: tested })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::body::HPolytope;
    use crate::linalg::vector;

    fn triangle() -> Body {
        Body::Polytope(HPolytope::from_vertices_2d(&[[0.0, 0.0], [3.0, 0.0], [0.0, 3.0]]).unwrap())
    }

    #[test]
    fn homothet_is_a_summand() {
        let b = Body::Polytope(HPolytope::from_vertices_2d(&[[0.0, 0.0], [2.0, 0.0], [3.0, 1.0], [1.0, 2.0]]).unwrap());
        let a = b.scaled(0.4).unwrap().translate(&vector(&[5.0, -1.0])).unwrap();
        let r = is_summand(&a, &b, &ToleranceConfig::default()).unwrap();
        assert!(r.verdict, "{}", r.residual);
    }

    #[test]
    fn segment_is_not_a_summand_of_triangle() {
        let seg = Body::Polytope(HPolytope::from_vertices_2d(&[[0.0, 0.0], [1.0, 0.0]]).unwrap());
        let r = is_summand(&seg, &triangle(), &ToleranceConfig::default()).unwrap();
        assert!(!r.verdict);
        // C = {x, y ≥ 0, x + y ≤ 2}; A + C misses the top corner (0, 3).
        let c = r.summand.unwrap();
        assert!((c.support(&vector(&[1.0, 1.0])).unwrap() - 2.0).abs() < 1e-12);
        // The largest gap sits at u = (0, 1): h_B = 3 against h_A + h_C = 2.
        assert!((r.residual - 1.0).abs() < 1e-9, "{}", r.residual);
        let u = r.witness_direction.unwrap();
        assert!(u[0].abs() < 1e-9 && u[1] > 0.0);
    }

    #[test]
    fn square_pairs_pass() {
        let sq = Body::Polytope(HPolytope::cube(2, 1.0));
        match generating_pair_test(&sq, 50, 7, &ToleranceConfig::default()).unwrap() {
            PairTestOutcome::Pass { samples } => assert_eq!(samples, 50),
            other => panic!("{other:?}"),
        }
    }
}
