mod common;

use gmg_core::ged::{ged_bipartite, ged_exact, ged_ipfp, ged_multistart};
use gmg_core::{
    compute_ged, transformation_cost, AttributedGraph, CostModel, GedMethod, GedSolverConfig,
    Transformation,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-9;

fn check_result(
    model: &CostModel,
    g: &AttributedGraph,
    g2: &AttributedGraph,
    t: &Transformation,
    cost: f64,
) {
    let oracle = common::transformation_cost(model, t.forward(), g, g2);
    assert!(
        (oracle - cost).abs() < TOL,
        "reported {cost}, transformation costs {oracle}"
    );
}

#[test]
fn exact_matches_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    for model in common::labeled_models() {
        for _ in 0..150 {
            let g = common::random_labeled(&mut rng, "a", 4);
            let g2 = common::random_labeled(&mut rng, "b", 4);
            let exact = ged_exact(&model, &g, &g2, 8).unwrap();
            let oracle = common::ged(&model, &g, &g2);
            assert!(
                (exact.cost - oracle).abs() < TOL,
                "{} vs {oracle}",
                exact.cost
            );
            assert!(exact.is_exact);
            check_result(&model, &g, &g2, &exact.transformation, exact.cost);
        }
    }
}

#[test]
fn exact_matches_enumeration_on_vectors() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let model = CostModel::default_euclidean();
    for _ in 0..150 {
        let g = common::random_vector(&mut rng, "a", 4);
        let g2 = common::random_vector(&mut rng, "b", 4);
        let exact = ged_exact(&model, &g, &g2, 8).unwrap();
        let oracle = common::ged(&model, &g, &g2);
        assert!((exact.cost - oracle).abs() < TOL * oracle.max(1.0));
    }
}

#[test]
fn heuristic_chain() {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let model = CostModel::default_labeled();
    let cfg = GedSolverConfig::default();
    for _ in 0..200 {
        let g = common::random_labeled(&mut rng, "a", 5);
        let g2 = common::random_labeled(&mut rng, "b", 5);
        let exact = ged_exact(&model, &g, &g2, 8).unwrap();
        let bip = ged_bipartite(&model, &g, &g2).unwrap();
        let ipfp = ged_ipfp(&model, &g, &g2, &bip.transformation, &cfg).unwrap();
        let multi = ged_multistart(&model, &g, &g2, &cfg).unwrap();
        for r in [&bip, &ipfp, &multi] {
            check_result(&model, &g, &g2, &r.transformation, r.cost);
            assert!(!r.is_exact);
        }
        assert!(exact.cost <= multi.cost + TOL);
        assert!(multi.cost <= ipfp.cost + TOL);
        assert!(ipfp.cost <= bip.cost + TOL);
    }
}

#[test]
fn exact_refuses_large_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let model = CostModel::default_labeled();
    let g = gmg_core::synthetic::random_labeled_graph(&mut rng, "a", 9, 3, 2, 0.3);
    assert!(matches!(
        ged_exact(&model, &g, &g, 8),
        Err(gmg_core::Error::ExactOrderCap { order: 9, cap: 8 })
    ));
    let cfg = GedSolverConfig::with_method(GedMethod::Exact);
    assert!(compute_ged(&model, &g, &g, &cfg).is_err());
}

#[test]
fn every_method_finds_identity_on_equal_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let model = CostModel::default_labeled();
    for _ in 0..20 {
        let g = common::random_labeled(&mut rng, "a", 7);
        for method in [
            GedMethod::Exact,
            GedMethod::Bipartite,
            GedMethod::Ipfp,
            GedMethod::MultistartBipartite,
            GedMethod::MultistartIpfp,
        ] {
            let r = compute_ged(&model, &g, &g, &GedSolverConfig::with_method(method)).unwrap();
            assert_eq!(r.cost, 0.0, "{method}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cost_is_symmetric_under_inverse(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let model = CostModel::default_labeled();
        let g = common::random_labeled(&mut rng, "a", 6);
        let g2 = common::random_labeled(&mut rng, "b", 6);
        let t = gmg_core::ged::random_transformation(&mut rng, g.order(), g2.order(), false);
        let forward = transformation_cost(&model, &t, &g, &g2).unwrap();
        let backward = transformation_cost(&model, &t.inverse(), &g2, &g).unwrap();
        prop_assert!((forward - backward).abs() < TOL);
        prop_assert!((forward - common::transformation_cost(&model, t.forward(), &g, &g2)).abs() < TOL);
    }

    #[test]
    fn exact_distance_is_symmetric(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let model = CostModel::default_labeled();
        let g = common::random_labeled(&mut rng, "a", 5);
        let g2 = common::random_labeled(&mut rng, "b", 5);
        let d = ged_exact(&model, &g, &g2, 8).unwrap().cost;
        let back = ged_exact(&model, &g2, &g, 8).unwrap().cost;
        prop_assert!((d - back).abs() < TOL);
    }

    #[test]
    fn multistart_is_reproducible(seed in any::<u64>(), solver_seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let model = CostModel::default_labeled();
        let g = common::random_labeled(&mut rng, "a", 7);
        let g2 = common::random_labeled(&mut rng, "b", 7);
        let cfg = GedSolverConfig { multistart: 8, seed: solver_seed, ..Default::default() };
        let a = ged_multistart(&model, &g, &g2, &cfg).unwrap();
        let b = ged_multistart(&model, &g, &g2, &cfg).unwrap();
        prop_assert_eq!(a, b);
    }
}
