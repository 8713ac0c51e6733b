use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use strongconvex::optim::{lp_max, LinearProgram, LpOutcome};
use strongconvex::sampling::{fitting_points, random_polygon};
use strongconvex::{
    hull_member, max_convex_search, translate_feasible_set, Ball, Body, ConeBody, HPolytope, ProductBody, ToleranceConfig,
    Vector,
};

/// Maximum of `u·x` over the vertices of `{x : a_i·x ≤ b_i}`, enumerated
/// from all pairs of boundary lines.
fn vertex_max(normals: &[Vector], offsets: &[f64], u: &Vector) -> f64 {
    let mut best = f64::NEG_INFINITY;
    for i in 0..normals.len() {
        for j in i + 1..normals.len() {
            let (a, b) = (&normals[i], &normals[j]);
            let det = a[0] * b[1] - a[1] * b[0];
            if det.abs() < 1e-12 {
                continue;
            }
            let x = Vector::from_vec(vec![
                (offsets[i] * b[1] - offsets[j] * a[1]) / det,
                (a[0] * offsets[j] - b[0] * offsets[i]) / det,
            ]);
            if normals.iter().zip(offsets).all(|(n, o)| n.dot(&x) <= o + 1e-9) {
                best = best.max(u.dot(&x));
            }
        }
    }
    best
}

fn gauge(kind: u8, rng: &mut ChaCha8Rng) -> Body {
    match kind % 5 {
        0 => Body::Polytope(random_polygon(rng, 3..=9)),
        1 => Body::Ball(Ball::new(Vector::from_vec(vec![0.2, -0.1]), 1.3).unwrap()),
        2 => Body::Ball(Ball::new(Vector::zeros(3), 1.0).unwrap()),
        3 => Body::Cone(ConeBody::new(Vector::zeros(3), 1.0, 1.0).unwrap()),
        _ => Body::Product(
            ProductBody::new(vec![
                Body::Ball(Ball::new(Vector::zeros(2), 1.0).unwrap()),
                Body::Polytope(HPolytope::boxed(&[-1.0], &[0.5]).unwrap()),
            ])
            .unwrap(),
        ),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lp_matches_vertex_enumeration(seed in any::<u64>(), extra in 0usize..4, angle in 0.0f64..6.3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let poly = random_polygon(&mut rng, 3..=10 - extra);
        let mut normals = poly.normals().to_vec();
        let mut offsets = poly.offsets().to_vec();
        for _ in 0..extra {
            // Redundant or cutting constraints.
            let th: f64 = rng.gen_range(0.0..6.3);
            let a = Vector::from_vec(vec![th.cos(), th.sin()]);
            let h = poly.normals().iter().zip(poly.offsets()).fold(f64::INFINITY, |m, (n, b)| if n.dot(&a) > 0.999 { m.min(*b) } else { m });
            offsets.push(if h.is_finite() { h } else { rng.gen_range(0.3..2.0) });
            normals.push(a);
        }
        let u = Vector::from_vec(vec![angle.cos(), angle.sin()]);
        let want = vertex_max(&normals, &offsets, &u);
        let lp = LinearProgram { objective: u.clone(), rows: normals.clone(), rhs: offsets.clone() };
        match lp_max(&lp) {
            LpOutcome::Optimal { value, argmax } => {
                prop_assert!((value - want).abs() <= 1e-12 * (1.0 + want.abs()) * 8.0, "{value} vs {want}");
                prop_assert!(normals.iter().zip(&offsets).all(|(n, o)| n.dot(&argmax) <= o + 1e-9));
            }
            other => prop_assert!(false, "{other:?}"),
        }
    }

    #[test]
    fn translate_set_membership_matches_covering(kind in 0u8..5, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = gauge(kind, &mut rng);
        let n = k.dim();
        let count = rng.gen_range(1..=4);
        let x = fitting_points(&mut rng, &k, count, 0.3..=0.9).unwrap();
        let t_set = translate_feasible_set(&k, &x).unwrap();
        prop_assert!(!t_set.is_empty());
        let tol = ToleranceConfig::default();
        let lo: Vec<f64> = (0..n).map(|i| -t_set.support(&-Vector::from_fn(n, |j, _| (i == j) as u8 as f64)).unwrap().0).collect();
        let hi: Vec<f64> = (0..n).map(|i| t_set.support(&Vector::from_fn(n, |j, _| (i == j) as u8 as f64)).unwrap().0).collect();
        for _ in 0..100 {
            let t = Vector::from_iterator(n, (0..n).map(|i| {
                let w = hi[i] - lo[i] + 1e-3;
                rng.gen_range(lo[i] - 0.2 * w..=hi[i] + 0.2 * w)
            }));
            let covered = |eps: f64| {
                let tol = ToleranceConfig { eps_feas: eps, ..tol };
                x.iter().all(|xi| k.contains(&(xi - &t), &tol).unwrap())
            };
            if t_set.contains(&t, 1e-12) {
                prop_assert!(covered(1e-7), "t = {t:?} in T but X not covered");
            }
            if covered(1e-12) {
                prop_assert!(t_set.contains(&t, 1e-7), "X covered by K + {t:?} but t not in T");
            }
        }
    }

    #[test]
    fn search_value_is_monotone_in_x(kind in 0u8..3, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = gauge(kind, &mut rng);
        let n = k.dim();
        let tol = ToleranceConfig::default();
        let y = fitting_points(&mut rng, &k, 4, 0.4..=0.9).unwrap();
        let p = Vector::from_iterator(n, (0..n).map(|_| rng.gen_range(-1.0..1.0)));
        let mut last = f64::INFINITY;
        for m in 1..=y.len() {
            let t_set = translate_feasible_set(&k, &y[..m]).unwrap();
            let v = max_convex_search(&k, &t_set, &p, &tol).unwrap().value;
            prop_assert!(v <= last + tol.eps_feas, "value grew from {last} to {v} at |X| = {m}");
            last = v;
        }
    }
}

#[test]
fn outputs_are_deterministic() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let tol = ToleranceConfig::default();
    for kind in 0..5 {
        let k = gauge(kind, &mut rng);
        let n = k.dim();
        let x = fitting_points(&mut rng, &k, 3, 0.5..=0.9).unwrap();
        let p = Vector::from_iterator(n, (0..n).map(|_| rng.gen_range(-0.5..0.5)));
        let t_set = translate_feasible_set(&k, &x).unwrap();
        let a = max_convex_search(&k, &t_set, &p, &tol).unwrap();
        let b = max_convex_search(&k, &t_set, &p, &tol).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.best_t, b.best_t);
        assert_eq!(a.best_u, b.best_u);
        let m1 = hull_member(&k, &x, &p, &tol).unwrap();
        let m2 = hull_member(&k, &x, &p, &tol).unwrap();
        assert_eq!(m1, m2);
    }
}
