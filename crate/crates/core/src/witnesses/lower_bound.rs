//! A gauge in every dimension `n ≥ 2` needing `n` points.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::ellipsoid::inscribed_ellipsoid;
use super::instance::WitnessInstance;
use crate::body::{Ball, Body};
use crate::covering::CoverWitness;
use crate::error::{GeomError, Result};
use crate::linalg::{basis, Matrix, Vector};
use crate::tolerance::ToleranceConfig;

#[derive(Debug, Clone)]
pub struct LowerBoundWitness {
    pub instance: WitnessInstance,
    /// Radius of the inner balls after scaling; at least `n + 1/(4n)`.
    pub scale_radius: f64,
    /// For each `i`, a ball of radius `scale_radius` inside the gauge,
    /// touching the facet with outer normal `e_i`.
    pub inner_balls: Vec<Ball>,
}

/// `n + 1/(4n)` as an exact rational.
pub fn required_radius(n: usize) -> BigRational {
    let n = BigInt::from(n);
    BigRational::from_integer(n.clone()) + BigRational::new(BigInt::from(1), BigInt::from(4) * n)
}

/// Exact comparison of a float with `n + 1/(4n)`.
pub fn meets_required_radius(r: f64, n: usize) -> bool {
    BigRational::from_float(r).is_some_and(|r| r >= required_radius(n))
}

/// Greedy choice of `n` unit vectors maximising the Gram determinant.
fn greedy_basis(cands: &[Vector], n: usize) -> Option<Vec<Vector>> {
    let mut chosen: Vec<Vector> = vec![cands.first()?.clone()];
    while chosen.len() < n {
        let mut best: Option<(f64, &Vector)> = None;
        for c in cands {
            let mut m = Matrix::zeros(n, chosen.len() + 1);
            for (j, v) in chosen.iter().chain([c]).enumerate() {
                m.set_column(j, v);
            }
            let vol = (m.transpose() * &m).determinant();
            if best.is_none_or(|(b, _)| vol > b) {
                best = Some((vol, c));
            }
        }
        chosen.push(best?.1.clone());
    }
    let mut v = Matrix::zeros(n, n);
    for (j, c) in chosen.iter().enumerate() {
        v.set_column(j, c);
    }
    (v.determinant().abs() > 1e-8).then_some(chosen)
}

/// Normalises the maximal inscribed ellipsoid to the unit ball, maps `n`
/// touching normals to the standard basis and scales until every touching
/// point carries an inner ball of radius `n + 1/(4n)`. Then `X = {e_i}` and
/// `p = (e_1 + … + e_n)/n` need all `n` points.
pub fn witness_at_least_n(k: &Body, tol: &ToleranceConfig) -> Result<LowerBoundWitness> {
    let n = k.dim();
    if n < 2 {
        return Err(GeomError::Precondition("dimension must be at least 2".into()));
    }
    // y = B⁻¹(x − d) sends the ellipsoid to the unit ball.
    let (b, d, normals) = match k {
        Body::Polytope(poly) => {
            let e = inscribed_ellipsoid(poly, tol)?;
            let b = e.ellipsoid.shape.clone();
            let normals: Vec<Vector> = e
                .active
                .iter()
                .map(|&i| {
                    let v = &b * &poly.normals()[i];
                    &v / v.norm()
                })
                .collect();
            (b, e.ellipsoid.center, normals)
        }
        Body::Ball(ball) => (
            Matrix::identity(n, n) * ball.radius,
            ball.center.clone(),
            (0..n).map(|i| basis(n, i)).collect(),
        ),
        _ => return Err(GeomError::Unsupported("lower-bound witness needs a polytope or ball".into())),
    };
    let chosen = greedy_basis(&normals, n)
        .ok_or_else(|| GeomError::Precondition("tangency points do not span".into()))?;
    let mut v = Matrix::zeros(n, n);
    for (j, c) in chosen.iter().enumerate() {
        v.set_column(j, c);
    }
    // z = Vᵀy turns the chosen normals into e_i; the unit ball becomes an
    // ellipsoid whose smallest curvature radius σ_min²/σ_max bounds the
    // radius of a ball rolling inside it.
    let sv = v.clone().svd(false, false).singular_values;
    let (smax, smin) = (sv.max(), sv.min());
    let inner = smin * smin / smax;
    let target = n as f64 + 1.0 / (4.0 * n as f64);
    let mut scale = target / inner;
    while !meets_required_radius(scale * inner, n) {
        scale = scale.next_up();
    }
    let radius = scale * inner;

    let binv = b.clone().try_inverse().ok_or(GeomError::Singular)?;
    let map = v.transpose() * &binv * scale;
    let shift = -(&map * &d);
    let gauge = k.transform(&map, &shift)?;

    let points: Vec<Vector> = (0..n).map(|i| basis(n, i)).collect();
    let p = Vector::from_element(n, 1.0 / n as f64);
    let mut inner_balls = Vec::with_capacity(n);
    let mut certificates = Vec::with_capacity(n);
    for j in 0..n {
        let touch = v.transpose() * &chosen[j] * scale;
        let e = basis(n, j);
        inner_balls.push(Ball {
            center: &touch - &e * radius,
            radius,
        });
        let t = &e / (2.0 * n as f64) - &touch;
        let margin = e.dot(&(&p - &t)) - gauge.support(&e)?;
        let w = CoverWitness { t, u: e, margin };
        let subset: Vec<usize> = (0..n).filter(|&i| i != j).collect();
        let pts: Vec<Vector> = subset.iter().map(|&i| points[i].clone()).collect();
        if !w.verify(&gauge, &pts, &p, tol)? {
            return Err(GeomError::Internal(format!("separator for e_{} failed", j + 1)));
        }
        certificates.push((subset, w));
    }
    Ok(LowerBoundWitness {
        instance: WitnessInstance {
            gauge,
            points,
            test_point: p,
            expected_min_subset: n,
            certificate_translates: certificates,
        },
        scale_radius: radius,
        inner_balls,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::body::HPolytope;
    use crate::linalg::vector;

    #[test]
    fn cube_instance() {
        let tol = ToleranceConfig::default();
        let w = witness_at_least_n(&Body::Polytope(HPolytope::cube(3, 1.0)), &tol).unwrap();
        let c = 3.0 + 1.0 / 12.0;
        assert!((w.scale_radius - c).abs() < 1e-12);
        let (t_sep, sep) = &w.instance.certificate_translates[0];
        assert_eq!(t_sep, &vec![1, 2]);
        assert!((&sep.t - vector(&[1.0 / 6.0 - c, 0.0, 0.0])).amax() < 1e-6);
        assert!((sep.margin - 1.0 / 6.0).abs() < 1e-6);
        assert!(w.instance.verify(&tol).unwrap());
    }

    #[test]
    fn ball_instance_has_required_radius() {
        let tol = ToleranceConfig::default();
        let w = witness_at_least_n(&Body::Ball(Ball::new(vector(&[1.0, 2.0]), 0.5).unwrap()), &tol).unwrap();
        assert!(meets_required_radius(w.scale_radius, 2));
        assert!(!meets_required_radius(2.0, 2));
        // Each inner ball, moved by its separating translate, still holds
        // the other basis points.
        for (j, (ball, (_, sep))) in w.inner_balls.iter().zip(&w.instance.certificate_translates).enumerate() {
            let c = &ball.center + &sep.t;
            for (i, e) in w.instance.points.iter().enumerate() {
                if i != j {
                    assert!((e - &c).norm() <= ball.radius + 1e-12);
                }
            }
        }
        assert!(w.instance.verify(&tol).unwrap());
    }
}
