//! Visual distances between robot descriptions.

mod calibrate;
mod cost;
mod ged;
mod graph;
mod hungarian;
mod matrix;
mod path;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::morphology::{feature_set, FeatureProfile, MorphologyError, RobotMorphology};

pub use calibrate::{calibrate, CalibrationPair, CalibrationReport, CalibrationRow};
pub use cost::{CostModel, GraphForm, LabelEquality, SubstitutionCost};
pub use ged::{ged_exact, ged_upper_bound, MAX_EXACT_NODES};
pub use graph::{LabeledGraph, NodeLabel};
pub use matrix::{distance_matrix, nearest_neighbors, CellDiagnostic, DistanceMatrix, Neighbor};
pub use path::{EditOp, EditPath, EditStep};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DistanceError {
    #[error(transparent)]
    InvalidMorphology(#[from] MorphologyError),
    #[error("invalid cost model: {0}")]
    InvalidCostModel(String),
    #[error("this cost model needs a taxonomy")]
    TaxonomyRequired,
    #[error("state budget must be positive")]
    InvalidBudget,
    #[error("invalid edit path: {0}")]
    InvalidPath(String),
    #[error("dataset is empty")]
    EmptyDataset,
    #[error("k must be at least 1")]
    InvalidK,
    #[error("k = {k} exceeds the dataset size {size}")]
    KTooLarge { k: usize, size: usize },
}

/// Limits for exact search. Exceeding either falls back to the upper bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Budget {
    /// Largest node count, per graph, attempted exactly.
    pub max_nodes: usize,
    /// Largest number of search states generated.
    pub max_states: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_nodes: 12,
            max_states: 5_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistanceResult {
    pub value: f64,
    /// False means `value` is only an upper bound.
    pub exact: bool,
    pub path: Option<EditPath>,
    pub explored_states: u64,
    pub budget_exceeded: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Metric {
    /// `1 - jaccard_index` over feature sets.
    Jaccard(FeatureProfile),
    /// Exact edit distance, falling back to the upper bound past the budget.
    GedExact,
    GedUpperBound,
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Metric::Jaccard(FeatureProfile::ConceptsOnly) => f.write_str("jaccard"),
            Metric::Jaccard(FeatureProfile::Full) => f.write_str("jaccard-full"),
            Metric::GedExact => f.write_str("ged"),
            Metric::GedUpperBound => f.write_str("ged-approx"),
        }
    }
}

impl FromStr for Metric {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "jaccard" => Ok(Metric::Jaccard(FeatureProfile::ConceptsOnly)),
            "jaccard-full" => Ok(Metric::Jaccard(FeatureProfile::Full)),
            "ged" | "ged-exact" => Ok(Metric::GedExact),
            "ged-approx" | "ged-upper-bound" => Ok(Metric::GedUpperBound),
            other => Err(format!(
                "unknown metric `{other}` (expected jaccard|jaccard-full|ged|ged-approx)"
            )),
        }
    }
}

/// `|a ∩ b| / |a ∪ b|`; two empty sets count as identical (1.0).
pub fn jaccard_index(a: &BTreeSet<String>, b: &BTreeSet<String>) -> f64 {
    let union = a.union(b).count();
    if union == 0 {
        return 1.0;
    }
    a.intersection(b).count() as f64 / union as f64
}

pub fn jaccard_distance(a: &BTreeSet<String>, b: &BTreeSet<String>) -> f64 {
    1.0 - jaccard_index(a, b)
}

/// Dispatches on `metric`. Jaccard ignores the cost model and budget.
pub fn distance(
    a: &RobotMorphology,
    b: &RobotMorphology,
    metric: Metric,
    c: &CostModel,
    budget: Budget,
) -> Result<DistanceResult, DistanceError> {
    match metric {
        Metric::Jaccard(profile) => {
            let (fa, fb) = (feature_set(a, profile)?, feature_set(b, profile)?);
            Ok(DistanceResult {
                value: jaccard_distance(&fa, &fb),
                exact: true,
                path: None,
                explored_states: 0,
                budget_exceeded: false,
            })
        }
        Metric::GedExact => ged_exact(a, b, c, budget),
        Metric::GedUpperBound => ged_upper_bound(a, b, c),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morphology::MorphNode;
    use crate::taxonomy::ConceptId;

    fn set(items: &[&str]) -> BTreeSet<String> {
        items.iter().map(|s| s.to_string()).collect()
    }

    fn graph(nodes: &[(&str, &str)], edges: &[(&str, &str)]) -> RobotMorphology {
        let mut m = RobotMorphology::new();
        for (id, c) in nodes {
            m.add_node(MorphNode::new(*id, ConceptId::new(c).unwrap()));
        }
        for (a, b) in edges {
            m.add_edge(a, b);
        }
        m
    }

    #[test]
    fn jaccard_examples() {
        // {Body, Head, Wheel} vs {Body, Arm}: one shared of four
        assert_eq!(jaccard_index(&set(&["Body", "Head", "Wheel"]), &set(&["Body", "Arm"])), 0.25);
        assert_eq!(jaccard_index(&set(&["Body"]), &set(&["Body"])), 1.0);
        assert_eq!(jaccard_index(&set(&[]), &set(&[])), 1.0);
        assert_eq!(jaccard_distance(&set(&["A"]), &set(&["B"])), 1.0);
    }

    #[test]
    fn single_node_vs_edge() {
        let a = graph(&[("b", "Body")], &[]);
        let b = graph(&[("b", "Body"), ("h", "Head")], &[("b", "h")]);
        let c = CostModel::default();
        let exact = ged_exact(&a, &b, &c, Budget::default()).unwrap();
        assert_eq!(exact.value, 2.0);
        assert!(exact.exact);
        assert_eq!(ged_upper_bound(&a, &b, &c).unwrap().value, 2.0);
        let path = exact.path.unwrap();
        let ops: Vec<&EditOp> = path.steps.iter().map(|s| &s.op).collect();
        assert!(matches!(ops.as_slice(), [EditOp::InsertNode { .. }, EditOp::InsertEdge { .. }]));
    }

    #[test]
    fn identity_has_empty_path() {
        let g = graph(
            &[("b", "Body"), ("l1", "Leg"), ("l2", "Leg"), ("h", "Head")],
            &[("b", "l1"), ("b", "l2"), ("b", "h")],
        );
        let c = CostModel::default();
        let r = ged_exact(&g, &g, &c, Budget::default()).unwrap();
        assert_eq!(r.value, 0.0);
        assert!(r.path.unwrap().is_empty());
        assert_eq!(ged_upper_bound(&g, &g, &c).unwrap().value, 0.0);
    }

    #[test]
    fn renamed_isomorphic_graphs_are_free() {
        let a = graph(&[("x", "Body"), ("y", "Leg"), ("z", "Leg")], &[("x", "y"), ("x", "z")]);
        let b = graph(&[("p", "Leg"), ("q", "Body"), ("r", "Leg")], &[("q", "p"), ("r", "q")]);
        let c = CostModel::default();
        let ub = ged_upper_bound(&a, &b, &c).unwrap();
        assert_eq!(ub.value, 0.0);
        let applied = ub.path.unwrap().apply(&LabeledGraph::from_morphology(&a, &c).unwrap()).unwrap();
        assert_eq!(applied, LabeledGraph::from_morphology(&b, &c).unwrap());
    }

    #[test]
    fn path_applies_and_sums() {
        let a = graph(
            &[("b", "Body"), ("h", "Head"), ("e", "Eye"), ("a", "Arm")],
            &[("b", "h"), ("h", "e"), ("b", "a")],
        );
        let b = graph(
            &[("t", "Torso"), ("h", "Head"), ("w", "Wheel")],
            &[("t", "h"), ("t", "w"), ("h", "w")],
        );
        let c = CostModel::default();
        for r in [
            ged_exact(&a, &b, &c, Budget::default()).unwrap(),
            ged_upper_bound(&a, &b, &c).unwrap(),
        ] {
            let path = r.path.unwrap();
            let sum: f64 = path.steps.iter().map(|s| s.cost).sum();
            assert_eq!(sum, r.value);
            let applied = path.apply(&LabeledGraph::from_morphology(&a, &c).unwrap()).unwrap();
            assert_eq!(applied, LabeledGraph::from_morphology(&b, &c).unwrap());
        }
    }

    #[test]
    fn budget_fallback_is_flagged() {
        let a = graph(
            &[("b", "Body"), ("h", "Head"), ("e", "Eye"), ("a", "Arm")],
            &[("b", "h"), ("h", "e"), ("b", "a")],
        );
        let b = graph(&[("t", "Torso"), ("w", "Wheel"), ("x", "Wheel")], &[("t", "w"), ("t", "x")]);
        let c = CostModel::default();
        let tight = Budget {
            max_nodes: 12,
            max_states: 1,
        };
        let r = ged_exact(&a, &b, &c, tight).unwrap();
        let full = ged_exact(&a, &b, &c, Budget::default()).unwrap();
        assert!(r.value >= full.value);
        if !r.exact {
            assert!(r.budget_exceeded);
        }
        let small = Budget {
            max_nodes: 2,
            ..Budget::default()
        };
        let r = ged_exact(&a, &b, &c, small).unwrap();
        assert!(!r.exact && r.budget_exceeded);
        assert_eq!(r.explored_states, 0);
    }

    #[test]
    fn label_modes() {
        let mut a = graph(&[("e", "Eye")], &[]);
        let mut b = graph(&[("e", "Eye")], &[]);
        a.nodes[0] = a.nodes[0].clone().with_descriptor(ConceptId::new("Shape").unwrap(), Some("Sphere"));
        b.nodes[0] = b.nodes[0].clone().with_multiplicity(2);
        let run = |mode| {
            ged_exact(&a, &b, &CostModel::default().with_labels(mode), Budget::default())
                .unwrap()
                .value
        };
        assert_eq!(run(LabelEquality::ConceptOnly), 0.0);
        assert_eq!(run(LabelEquality::ConceptDescriptors), 1.0);
        assert_eq!(run(LabelEquality::ConceptDescriptorsMultiplicity), 1.0);
        let other = graph(&[("w", "Wheel")], &[]);
        assert_eq!(
            ged_exact(&a, &other, &CostModel::default().with_labels(LabelEquality::StructureOnly), Budget::default())
                .unwrap()
                .value,
            0.0
        );
    }
}
