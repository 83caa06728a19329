mod common;

use common::{arb_graph, assert_valid, brute_force_ged, build};
use metamorph::distance::{ged_exact, ged_upper_bound, Budget, CostModel, LabeledGraph};
use proptest::prelude::*;

fn exact(a: &metamorph::morphology::RobotMorphology, b: &metamorph::morphology::RobotMorphology) -> f64 {
    let r = ged_exact(a, b, &CostModel::default(), Budget::default()).unwrap();
    assert!(r.exact, "budget exceeded on a small graph");
    r.value
}

#[test]
fn oracle_small_cases() {
    let body = build(&[0], &[]);
    let body_head = build(&[0, 1], &[(0, 1)]);
    assert_eq!(brute_force_ged(&body, &body_head), 2.0);
    assert_eq!(brute_force_ged(&body_head, &body_head), 0.0);
    // path against triangle on the same labels: one edge insertion
    let path = build(&[0, 1, 2], &[(0, 1), (1, 2)]);
    let tri = build(&[0, 1, 2], &[(0, 1), (1, 2), (0, 2)]);
    assert_eq!(brute_force_ged(&path, &tri), 1.0);
    assert_eq!(exact(&path, &tri), 1.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_graphs_are_valid(g in arb_graph(8)) {
        assert_valid(&g);
    }

    #[test]
    fn exact_matches_oracle(a in arb_graph(4), b in arb_graph(4)) {
        prop_assert_eq!(exact(&a, &b), brute_force_ged(&a, &b));
    }

    #[test]
    fn symmetric(a in arb_graph(6), b in arb_graph(6)) {
        prop_assert_eq!(exact(&a, &b), exact(&b, &a));
    }

    #[test]
    fn upper_bound_dominates_exact(a in arb_graph(7), b in arb_graph(7)) {
        let ub = ged_upper_bound(&a, &b, &CostModel::default()).unwrap();
        prop_assert!(!ub.exact || ub.value == exact(&a, &b));
        prop_assert!(ub.value >= exact(&a, &b));
    }

    #[test]
    fn triangle_inequality(a in arb_graph(5), b in arb_graph(5), c in arb_graph(5)) {
        prop_assert!(exact(&a, &c) <= exact(&a, &b) + exact(&b, &c));
    }

    #[test]
    fn identity_is_zero(a in arb_graph(8)) {
        let r = ged_exact(&a, &a, &CostModel::default(), Budget::default()).unwrap();
        prop_assert_eq!(r.value, 0.0);
        prop_assert!(r.path.unwrap().is_empty());
    }

    #[test]
    fn edit_paths_apply_and_sum(a in arb_graph(6), b in arb_graph(6)) {
        let c = CostModel::default();
        let (ga, gb) = (LabeledGraph::from_morphology(&a, &c).unwrap(), LabeledGraph::from_morphology(&b, &c).unwrap());
        for r in [ged_exact(&a, &b, &c, Budget::default()).unwrap(), ged_upper_bound(&a, &b, &c).unwrap()] {
            let path = r.path.unwrap();
            let sum: f64 = path.steps.iter().map(|s| s.cost).sum();
            prop_assert!((sum - r.value).abs() < 1e-9);
            prop_assert_eq!(path.apply(&ga).unwrap(), gb.clone());
        }
    }

    #[test]
    fn budget_fallback_is_an_upper_bound(a in arb_graph(6), b in arb_graph(6), states in 1u64..50) {
        let c = CostModel::default();
        let tight = Budget { max_nodes: 12, max_states: states };
        let r = ged_exact(&a, &b, &c, tight).unwrap();
        prop_assert!(r.value >= exact(&a, &b));
        prop_assert_eq!(r.exact, !r.budget_exceeded);
    }
}
