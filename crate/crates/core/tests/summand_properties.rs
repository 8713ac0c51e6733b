use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use strongconvex::directions::sphere_grid;
use strongconvex::optim::simplex::{lp_max, LinearProgram, LpOutcome};
use strongconvex::sampling::{random_polygon, sample_in};
use strongconvex::{criterion_check_2d, generating_pair_test, is_summand, minkowski_sum, Body, HPolytope, PairTestOutcome, ToleranceConfig, Vector};

/// Random planar pair: either `B = A + C` for random polygons (a summand by
/// construction) or two unrelated polygons.
fn pair(seed: u64) -> (Body, Body) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = Body::Polytope(random_polygon(&mut rng, 3..=6));
    let other = Body::Polytope(random_polygon(&mut rng, 3..=6));
    if seed.is_multiple_of(2) {
        let b = minkowski_sum(&a, &other).unwrap();
        (a, b)
    } else {
        (a, other)
    }
}

/// Is there `c ∈ C` with `b − c ∈ A`? Both sets given by inequalities,
/// relaxed by `slack`.
fn decomposes(a: &HPolytope, c: &HPolytope, b: &Vector, slack: f64) -> bool {
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for (n, o) in c.normals().iter().zip(c.offsets()) {
        rows.push(n.clone());
        rhs.push(o + slack * n.norm());
    }
    for (n, o) in a.normals().iter().zip(a.offsets()) {
        rows.push(-n);
        rhs.push(o - n.dot(b) + slack * n.norm());
    }
    let lp = LinearProgram { objective: Vector::zeros(2), rows, rhs };
    matches!(lp_max(&lp), LpOutcome::Optimal { .. })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn erosion_plus_subtrahend_stays_inside(seed in any::<u64>()) {
        let tol = ToleranceConfig::default();
        let (a, b) = pair(seed);
        let r = is_summand(&a, &b, &tol).unwrap();
        if let Some(c) = &r.summand {
            let eps = tol.eps_feas * b.diameter().unwrap();
            for u in sphere_grid(2, 360) {
                let lhs = c.support(&u).unwrap() + a.support(&u).unwrap();
                prop_assert!(lhs <= b.support(&u).unwrap() + eps, "u = {u:?}");
            }
        }
    }

    #[test]
    fn summand_verdict_gives_decompositions(seed in any::<u64>()) {
        let tol = ToleranceConfig::default();
        let (a, b) = pair(seed);
        let r = is_summand(&a, &b, &tol).unwrap();
        if seed % 2 == 0 {
            prop_assert!(r.verdict, "constructed sum rejected: residual {}", r.residual);
        }
        if r.verdict {
            let c = r.summand.as_ref().unwrap().hform().unwrap().clone();
            let ap = a.as_polytope().unwrap();
            let slack = 1e-7 * b.diameter().unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
            for p in sample_in(&mut rng, &b, 100).unwrap() {
                prop_assert!(decomposes(&ap, &c, &p, slack), "p = {p:?}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn criterion_hypothesis_implies_summand(seed in any::<u64>()) {
        let tol = ToleranceConfig::default();
        let (a, b) = pair(seed);
        let rep = criterion_check_2d(&a, &b, 20, &tol).unwrap();
        if rep.hypothesis_ok {
            prop_assert!(is_summand(&a, &b, &tol).unwrap().verdict);
        }
    }
}

#[test]
fn random_polygons_have_no_bad_generating_pairs() {
    let tol = ToleranceConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..50 {
        let k = Body::Polytope(random_polygon(&mut rng, 3..=8));
        match generating_pair_test(&k, 400, i, &tol).unwrap() {
            PairTestOutcome::Pass { samples } => assert_eq!(samples, 400),
            PairTestOutcome::Counterexample { t1, t2, report } => {
                panic!("polygon {i}: pair {t1:?}, {t2:?} failed with residual {}", report.residual)
            }
        }
    }
}

