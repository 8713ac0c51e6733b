use itertools::Itertools;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use strongconvex::convex::in_convex_hull;
use strongconvex::caratheodory::{minimal_subset, product_reduce, two_subhulls};
use strongconvex::directions::sphere_grid;
use strongconvex::sampling::{fitting_points, random_polygon, sample_in};
use strongconvex::strong::{erode, strong_hull, Subtrahend};
use strongconvex::{cover_avoiding, hull_member, Ball, Body, HPolytope, Membership, ProductBody, ToleranceConfig, Vector};

fn polygon(rng: &mut ChaCha8Rng) -> Body {
    Body::Polytope(random_polygon(rng, 5..=9))
}

fn convex_combination(rng: &mut ChaCha8Rng, x: &[Vector]) -> Vector {
    let w: Vec<f64> = x.iter().map(|_| rng.gen_range(0.0..1.0)).collect();
    let total: f64 = w.iter().sum();
    x.iter().zip(&w).fold(Vector::zeros(x[0].len()), |s, (p, wi)| s + p * (wi / total))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn erosion_three_times_equals_once(seed in any::<u64>(), count in 1usize..=8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = polygon(&mut rng);
        let x = fitting_points(&mut rng, &k, count, 0.2..=1.0).unwrap();
        let once = erode(&k, Subtrahend::Points(&x)).unwrap();
        let twice = erode(&k, Subtrahend::Set(&once)).unwrap();
        let thrice = erode(&k, Subtrahend::Set(&twice)).unwrap();
        for a in k.as_polytope().unwrap().normals() {
            prop_assert!((thrice.support(a).unwrap() - once.support(a).unwrap()).abs() <= 1e-7);
        }
    }

    #[test]
    fn hull_contains_ordinary_hull_and_grows_with_x(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = polygon(&mut rng);
        let tol = ToleranceConfig::default();
        let y = fitting_points(&mut rng, &k, 6, 0.3..=1.0).unwrap();
        let x = &y[..3];
        for _ in 0..5 {
            let q = convex_combination(&mut rng, x);
            let m = hull_member(&k, x, &q, &tol).unwrap();
            prop_assert!(m.is_member(), "convex combination {q:?} separated: {m:?}");
        }
        let (hx, hy) = (strong_hull(&k, x).unwrap(), strong_hull(&k, &y).unwrap());
        for u in sphere_grid(2, 64) {
            prop_assert!(hx.support(&u).unwrap() <= hy.support(&u).unwrap() + 1e-9);
        }
    }

    #[test]
    fn product_hull_is_product_of_factor_hulls(seed in any::<u64>(), kind in 0u8..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (l, m) = match kind {
            0 => (polygon(&mut rng), Body::Polytope(HPolytope::boxed(&[-1.0], &[0.7]).unwrap())),
            1 => (Body::Ball(Ball::new(Vector::zeros(2), 1.2).unwrap()), Body::Polytope(HPolytope::boxed(&[0.0], &[2.0]).unwrap())),
            _ => (polygon(&mut rng), polygon(&mut rng)),
        };
        let (dl, dm) = (l.dim(), m.dim());
        let k = Body::Product(ProductBody::new(vec![l.clone(), m.clone()]).unwrap());
        let x = fitting_points(&mut rng, &k, 4, 0.3..=0.9).unwrap();
        let px: Vec<Vector> = x.iter().map(|v| v.rows(0, dl).into_owned()).collect();
        let qx: Vec<Vector> = x.iter().map(|v| v.rows(dl, dm).into_owned()).collect();
        let (hk, hl, hm) = (strong_hull(&k, &x).unwrap(), strong_hull(&l, &px).unwrap(), strong_hull(&m, &qx).unwrap());
        for u in sphere_grid(dl + dm, 200) {
            let (ul, um) = (u.rows(0, dl).into_owned(), u.rows(dl, dm).into_owned());
            let part = |h: &strongconvex::StrongSet, v: &Vector| if v.norm() == 0.0 { 0.0 } else { h.support(v).unwrap() };
            let want = part(&hl, &ul) + part(&hm, &um);
            prop_assert!((hk.support(&u).unwrap() - want).abs() <= 1e-8);
        }
    }

    #[test]
    fn membership_agrees_with_explicit_hull(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = polygon(&mut rng);
        let tol = ToleranceConfig::default();
        let x = fitting_points(&mut rng, &k, 3, 0.3..=0.9).unwrap();
        let hull = strong_hull(&k, &x).unwrap();
        let poly = hull.hform().unwrap().clone();
        let region = Body::Polytope(poly.clone()).scaled(1.5).unwrap();
        for p in sample_in(&mut rng, &region, 20).unwrap() {
            let m = hull_member(&k, &x, &p, &tol).unwrap();
            if m.margin().abs() > 1e-3 {
                prop_assert_eq!(m.is_member(), poly.contains(&p, 0.0));
            }
        }
    }

    #[test]
    fn separating_translates_revalidate_and_serve_subsets(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = polygon(&mut rng);
        let tol = ToleranceConfig::default();
        let x = fitting_points(&mut rng, &k, 4, 0.3..=0.8).unwrap();
        let p = Vector::from_iterator(2, (0..2).map(|_| rng.gen_range(-2.0..2.0)));
        if let Some(w) = cover_avoiding(&k, &x, &p, &tol).unwrap() {
            // Independent check with the H-form of K.
            let poly = k.as_polytope().unwrap();
            for xi in &x {
                prop_assert!(poly.contains(&(xi - &w.t), 1e-9));
            }
            prop_assert!(w.u.dot(&(&p - &w.t)) - k.support(&w.u).unwrap() >= w.margin - 1e-9);
            prop_assert!(w.margin > tol.eps_margin);
            for size in 1..x.len() {
                for idx in (0..x.len()).combinations(size) {
                    let sub: Vec<Vector> = idx.iter().map(|&i| x[i].clone()).collect();
                    prop_assert!(w.verify(&k, &sub, &p, &tol).unwrap());
                    prop_assert!(cover_avoiding(&k, &sub, &p, &tol).unwrap().is_some());
                }
            }
        }
    }

    #[test]
    fn minimal_subsets_are_certified(seed in any::<u64>(), kind in 0u8..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = match kind {
            0 => polygon(&mut rng),
            1 => Body::Polytope(HPolytope::cube(2, 1.0)),
            _ => Body::Polytope(HPolytope::cube(3, 1.0)),
        };
        let n = k.dim();
        let tol = ToleranceConfig::default();
        let x = fitting_points(&mut rng, &k, 6, 0.5..=1.0).unwrap();
        let hull = strong_hull(&k, &x).unwrap();
        let p = sample_in(&mut rng, &Body::Polytope(hull.hform().unwrap().clone()), 1).unwrap().remove(0);
        let cert = minimal_subset(&k, &x, &p, &tol).unwrap();
        // Points of the ordinary hull may need n + 1 points for a general
        // gauge; cube gauges and points outside conv X need at most n.
        let inside = in_convex_hull(&x, &p, 1e-9).unwrap();
        let bound = if kind == 0 && inside { n + 1 } else { n };
        prop_assert!(cert.len() <= bound, "size {} with p in conv X: {inside}", cert.len());
        prop_assert!(cert.revalidate(&k, &x, &p, &tol).unwrap());
        for drop in 0..cert.len() {
            let rest: Vec<Vector> = cert.indices.iter().enumerate().filter(|&(j, _)| j != drop).map(|(_, &i)| x[i].clone()).collect();
            if rest.is_empty() {
                continue;
            }
            match hull_member(&k, &rest, &p, &tol).unwrap() {
                Membership::NotMember(w) => prop_assert!(w.margin > tol.eps_margin),
                m => prop_assert!(false, "subset without point {drop} still contains p: {m:?}"),
            }
        }
        if kind == 1 {
            let seg = Body::Polytope(HPolytope::boxed(&[-1.0], &[1.0]).unwrap());
            let reduced = product_reduce(&seg, &seg, &x, &p, &tol).unwrap();
            prop_assert!(reduced.len() <= 2 && reduced.len() >= cert.len());
            prop_assert!(reduced.revalidate(&k, &x, &p, &tol).unwrap());
        }
    }

    #[test]
    fn two_subhulls_for_planar_gauges(seed in any::<u64>(), disk in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = if disk { Body::Ball(Ball::new(Vector::zeros(2), 1.0).unwrap()) } else { polygon(&mut rng) };
        let tol = ToleranceConfig::default();
        let x = fitting_points(&mut rng, &k, 4, 0.5..=1.0).unwrap();
        let p = convex_combination(&mut rng, &x);
        let (a, b) = two_subhulls(&k, &x, &p, &tol).unwrap();
        prop_assert!(a != b && a.len() == 3 && b.len() == 3);
    }
}
