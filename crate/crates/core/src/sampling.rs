//! Seeded random instances: polygon gauges and point sets.

use std::f64::consts::TAU;
use std::ops::RangeInclusive;

use rand::Rng;

use crate::body::{Body, HPolytope};
use crate::error::{GeomError, Result};
use crate::linalg::Vector;
use crate::polygon::P2;
use crate::tolerance::ToleranceConfig;

/// Convex polygon with a facet count drawn from `facets`: points on the unit
/// circle at sorted random angles, pushed through a random linear map with
/// condition number at most 3, centred at the vertex centroid.
pub fn random_polygon<R: Rng + ?Sized>(rng: &mut R, facets: RangeInclusive<usize>) -> HPolytope {
    let m = rng.gen_range(facets).max(3);
    loop {
        let mut angles: Vec<f64> = (0..m).map(|_| rng.gen_range(0.0..TAU)).collect();
        angles.sort_by(f64::total_cmp);
        // Gaps below π/(4m) make near-degenerate edges; redraw.
        let min_gap = (0..m)
            .map(|i| {
                let next = if i + 1 == m { angles[0] + TAU } else { angles[i + 1] };
                next - angles[i]
            })
            .fold(f64::INFINITY, f64::min);
        if min_gap < std::f64::consts::PI / (4.0 * m as f64) {
            continue;
        }
        let rot = rng.gen_range(0.0..TAU);
        let stretch = rng.gen_range(1.0..3.0);
        let (c, s) = (rot.cos(), rot.sin());
        let pts: Vec<P2> = angles
            .iter()
            .map(|a| {
                let (x, y) = (a.cos() * stretch, a.sin());
                [c * x - s * y, s * x + c * y]
            })
            .collect();
        let cx = pts.iter().map(|p| p[0]).sum::<f64>() / m as f64;
        let cy = pts.iter().map(|p| p[1]).sum::<f64>() / m as f64;
        let pts: Vec<P2> = pts.iter().map(|p| [p[0] - cx, p[1] - cy]).collect();
        if let Ok(poly) = HPolytope::from_vertices_2d(&pts) {
            if poly.normals().len() == m {
                return poly;
            }
        }
    }
}

/// Uniform samples from `body` by rejection from its bounding box.
pub fn sample_in<R: Rng + ?Sized>(rng: &mut R, body: &Body, count: usize) -> Result<Vec<Vector>> {
    let (lo, hi) = body.bounding_box()?;
    let n = body.dim();
    let tol = ToleranceConfig::default();
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0usize;
    while out.len() < count {
        attempts += 1;
        if attempts > 10_000 * count.max(1) {
            return Err(GeomError::NoConvergence("rejection sampling".into()));
        }
        let x = Vector::from_iterator(n, (0..n).map(|i| if hi[i] > lo[i] { rng.gen_range(lo[i]..=hi[i]) } else { lo[i] }));
        if body.contains(&x, &tol)? {
            out.push(x);
        }
    }
    Ok(out)
}

/// `count` points inside a random shrunken translate `s·K + c`, with `s`
/// drawn from `shrink`; the set fits in a translate of `K` by construction.
pub fn fitting_points<R: Rng + ?Sized>(
    rng: &mut R,
    k: &Body,
    count: usize,
    shrink: RangeInclusive<f64>,
) -> Result<Vec<Vector>> {
    let s = rng.gen_range(shrink);
    let n = k.dim();
    let shift = Vector::from_iterator(n, (0..n).map(|_| rng.gen_range(-1.0..1.0)));
    let region = k.scaled(s)?.translate(&shift)?;
    sample_in(rng, &region, count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn polygons_have_requested_facets() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let p = random_polygon(&mut rng, 5..=9);
            assert!((5..=9).contains(&p.normals().len()));
            assert!(p.contains(&Vector::zeros(2), 0.0));
        }
    }

    #[test]
    fn fitting_points_fit() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let k = Body::Polytope(random_polygon(&mut rng, 6..=6));
        let pts = fitting_points(&mut rng, &k, 8, 0.3..=0.9).unwrap();
        assert_eq!(pts.len(), 8);
        assert!(crate::covering::cover_translate(&k, &pts).is_ok());
    }
}
