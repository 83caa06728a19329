use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::morphology::{expand_multiplicities, find_root, structural_errors, MorphologyError, RobotMorphology};
use crate::taxonomy::ConceptId;

use super::cost::{CostModel, GraphForm, SubstitutionCost};
use super::DistanceError;

/// A node label with the attributes the label mode ignores left empty.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct NodeLabel {
    pub concept: Option<ConceptId>,
    pub descriptors: Option<Vec<String>>,
    pub multiplicity: Option<u32>,
}

/// The graph the edit distance actually compares: ids, projected labels and
/// unordered edges (stored with endpoints sorted).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LabeledGraph {
    pub nodes: BTreeMap<String, NodeLabel>,
    pub edges: BTreeSet<(String, String)>,
}

impl LabeledGraph {
    pub fn from_morphology(m: &RobotMorphology, c: &CostModel) -> Result<LabeledGraph, DistanceError> {
        Ok(Prepared::new(m, c)?.labeled())
    }

    pub(crate) fn edge_key(a: &str, b: &str) -> (String, String) {
        if a <= b {
            (a.to_string(), b.to_string())
        } else {
            (b.to_string(), a.to_string())
        }
    }
}

pub(crate) struct Prepared {
    pub ids: Vec<String>,
    pub concepts: Vec<ConceptId>,
    pub descriptors: Vec<Vec<String>>,
    pub multiplicity: Vec<u32>,
    pub labels: Vec<NodeLabel>,
    pub adj: Vec<Vec<bool>>,
    pub degree: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
}

impl Prepared {
    pub fn new(m: &RobotMorphology, c: &CostModel) -> Result<Prepared, DistanceError> {
        let errors = structural_errors(m);
        if !errors.is_empty() {
            return Err(MorphologyError::InvalidMorphology(errors).into());
        }
        let expanded;
        let m = match c.graph_form {
            GraphForm::Compressed => m,
            GraphForm::Expanded => {
                if m.nodes.iter().all(|n| n.multiplicity == 1) {
                    m
                } else {
                    let t = c.taxonomy.as_ref().ok_or(DistanceError::TaxonomyRequired)?;
                    let root = find_root(t, m)?;
                    expanded = expand_multiplicities(m, Some(&root))?;
                    &expanded
                }
            }
        };
        let mode = c.label_equality;
        let n = m.nodes.len();
        let adjacency = m.adjacency();
        let mut adj = vec![vec![false; n]; n];
        let mut edges = Vec::new();
        for (u, nbrs) in adjacency.iter().enumerate() {
            for &w in nbrs {
                adj[u][w] = true;
                if u < w {
                    edges.push((u, w));
                }
            }
        }
        Ok(Prepared {
            ids: m.nodes.iter().map(|x| x.id.clone()).collect(),
            concepts: m.nodes.iter().map(|x| x.concept.clone()).collect(),
            descriptors: m.nodes.iter().map(|x| x.descriptor_tokens()).collect(),
            multiplicity: m.nodes.iter().map(|x| x.multiplicity).collect(),
            labels: m
                .nodes
                .iter()
                .map(|x| NodeLabel {
                    concept: mode.concept().then(|| x.concept.clone()),
                    descriptors: mode.descriptors().then(|| x.descriptor_tokens()),
                    multiplicity: mode.multiplicity().then_some(x.multiplicity),
                })
                .collect(),
            degree: adjacency.iter().map(Vec::len).collect(),
            adj,
            edges,
        })
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn labeled(&self) -> LabeledGraph {
        LabeledGraph {
            nodes: self.ids.iter().cloned().zip(self.labels.iter().cloned()).collect(),
            edges: self
                .edges
                .iter()
                .map(|&(u, w)| LabeledGraph::edge_key(&self.ids[u], &self.ids[w]))
                .collect(),
        }
    }
}

/// Per-instance edit costs.
pub(crate) struct Costs {
    pub sub: Vec<Vec<f64>>,
    pub del: f64,
    pub ins: f64,
    pub edel: f64,
    pub eins: f64,
}

impl Costs {
    pub fn new(a: &Prepared, b: &Prepared, c: &CostModel) -> Costs {
        let mode = c.label_equality;
        let sub = (0..a.len())
            .map(|i| {
                (0..b.len())
                    .map(|j| match c.node_substitute {
                        SubstitutionCost::Unit => {
                            if a.labels[i] == b.labels[j] {
                                0.0
                            } else {
                                1.0
                            }
                        }
                        SubstitutionCost::TaxonomyWeighted { descriptor_penalty } => {
                            let mut cost = 0.0;
                            if mode.concept() {
                                let (x, y) = (&a.concepts[i], &b.concepts[j]);
                                let sim = match &c.taxonomy {
                                    _ if x == y => 1.0,
                                    Some(t) => t.concept_similarity(x.as_str(), y.as_str()).unwrap_or(0.0),
                                    None => 0.0,
                                };
                                cost += 1.0 - sim;
                            }
                            if mode.descriptors() {
                                let x: BTreeSet<&String> = a.descriptors[i].iter().collect();
                                let y: BTreeSet<&String> = b.descriptors[j].iter().collect();
                                cost += descriptor_penalty * x.symmetric_difference(&y).count() as f64;
                            }
                            if mode.multiplicity() && a.multiplicity[i] != b.multiplicity[j] {
                                cost += descriptor_penalty;
                            }
                            cost
                        }
                    })
                    .collect()
            })
            .collect();
        Costs {
            sub,
            del: c.node_delete,
            ins: c.node_insert,
            edel: c.edge_delete,
            eins: c.edge_insert,
        }
    }
}

/// Exact cost of the edit path induced by `map[i] = Some(j)` (A node i
/// substituted by B node j) or `None` (deleted); unmapped B nodes are inserted.
pub(crate) fn mapping_cost(a: &Prepared, b: &Prepared, k: &Costs, map: &[Option<usize>]) -> f64 {
    let mut inverse = vec![None; b.len()];
    let mut cost = 0.0;
    for (i, t) in map.iter().enumerate() {
        match t {
            Some(j) => {
                cost += k.sub[i][*j];
                inverse[*j] = Some(i);
            }
            None => cost += k.del,
        }
    }
    cost += inverse.iter().filter(|x| x.is_none()).count() as f64 * k.ins;
    for &(u, w) in &a.edges {
        let kept = matches!((map[u], map[w]), (Some(x), Some(y)) if b.adj[x][y]);
        if !kept {
            cost += k.edel;
        }
    }
    for &(x, y) in &b.edges {
        let kept = matches!((inverse[x], inverse[y]), (Some(u), Some(w)) if a.adj[u][w]);
        if !kept {
            cost += k.eins;
        }
    }
    cost
}
