//! Robot description graphs.
//!
//! A [`RobotMorphology`] is an undirected graph whose nodes are subdivision
//! concepts annotated with descriptors and a branch multiplicity, plus
//! robot-level covering and silhouette. Values are plain data: construction
//! never fails, and [`validate`] reports every problem it finds.

mod ops;
mod validate;

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::taxonomy::ConceptId;

pub use ops::{canonicalize, expand_multiplicities, feature_set, find_root, structurally_equal, FeatureProfile};
pub use validate::{validate, Finding, FindingCode, Locus, ValidationReport};
pub(crate) use validate::structural_errors;

pub type NodeId = String;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MorphologyError {
    #[error("invalid morphology: {}", summarize(.0))]
    InvalidMorphology(Vec<Finding>),
    #[error("no unique root node could be derived; supply one explicitly")]
    NoRoot,
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("root node `{0}` must have multiplicity 1")]
    RootMultiplicity(String),
}

fn summarize(findings: &[Finding]) -> String {
    findings.iter().map(|f| f.to_string()).collect::<Vec<_>>().join("; ")
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DescriptorValue {
    pub descriptor: ConceptId,
    pub value: Option<String>,
}

impl DescriptorValue {
    pub fn new(descriptor: ConceptId, value: Option<&str>) -> Self {
        DescriptorValue {
            descriptor,
            value: value.map(str::to_string),
        }
    }

    /// `descriptor=value`, or just `descriptor` when there is no value.
    pub fn token(&self) -> String {
        match &self.value {
            Some(v) => format!("{}={}", self.descriptor, v),
            None => self.descriptor.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphNode {
    pub id: NodeId,
    pub concept: ConceptId,
    pub descriptors: BTreeSet<DescriptorValue>,
    pub multiplicity: u32,
}

impl MorphNode {
    pub fn new(id: impl Into<NodeId>, concept: ConceptId) -> Self {
        MorphNode {
            id: id.into(),
            concept,
            descriptors: BTreeSet::new(),
            multiplicity: 1,
        }
    }

    pub fn with_multiplicity(mut self, k: u32) -> Self {
        self.multiplicity = k;
        self
    }

    pub fn with_descriptor(mut self, descriptor: ConceptId, value: Option<&str>) -> Self {
        self.descriptors.insert(DescriptorValue::new(descriptor, value));
        self
    }

    pub fn descriptor_tokens(&self) -> Vec<String> {
        self.descriptors.iter().map(DescriptorValue::token).collect()
    }
}

/// Undirected edge; endpoints are stored in sorted order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MorphEdge {
    a: NodeId,
    b: NodeId,
}

impl MorphEdge {
    pub fn new(a: impl Into<NodeId>, b: impl Into<NodeId>) -> Self {
        let (a, b) = (a.into(), b.into());
        if a <= b {
            MorphEdge { a, b }
        } else {
            MorphEdge { a: b, b: a }
        }
    }

    pub fn endpoints(&self) -> (&str, &str) {
        (&self.a, &self.b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Coverage {
    FullyCovered,
    PartiallyCovered,
    FullyVisible,
}

impl Coverage {
    pub fn as_str(self) -> &'static str {
        match self {
            Coverage::FullyCovered => "FullyCovered",
            Coverage::PartiallyCovered => "PartiallyCovered",
            Coverage::FullyVisible => "FullyVisible",
        }
    }
}

impl fmt::Display for Coverage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Coverage {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "FullyCovered" => Ok(Coverage::FullyCovered),
            "PartiallyCovered" => Ok(Coverage::PartiallyCovered),
            "FullyVisible" => Ok(Coverage::FullyVisible),
            other => Err(format!("unknown coverage `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoveringSpec {
    pub coverage: Coverage,
    pub materials: BTreeSet<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SilhouetteSpec {
    pub primary: ConceptId,
    /// Present exactly when `primary` is a hybrid silhouette.
    pub hybrid: Option<(ConceptId, ConceptId)>,
}

impl SilhouetteSpec {
    pub fn simple(primary: ConceptId) -> Self {
        SilhouetteSpec { primary, hybrid: None }
    }

    pub fn hybrid(primary: ConceptId, a: ConceptId, b: ConceptId) -> Self {
        let pair = if a <= b { (a, b) } else { (b, a) };
        SilhouetteSpec {
            primary,
            hybrid: Some(pair),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RobotMorphology {
    pub nodes: Vec<MorphNode>,
    pub edges: Vec<MorphEdge>,
    pub covering: Option<CoveringSpec>,
    pub silhouette: Option<SilhouetteSpec>,
}

impl RobotMorphology {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, id: &str) -> Option<&MorphNode> {
        self.nodes.iter().find(|n| n.id == id)
    }

    pub fn add_node(&mut self, node: MorphNode) -> &mut Self {
        self.nodes.push(node);
        self
    }

    pub fn add_edge(&mut self, a: &str, b: &str) -> &mut Self {
        self.edges.push(MorphEdge::new(a, b));
        self
    }

    /// Adjacency lists over node indices, ignoring edges with unknown endpoints
    /// and self loops. Neighbor lists are sorted and deduplicated.
    pub(crate) fn adjacency(&self) -> Vec<Vec<usize>> {
        let index: BTreeMap<&str, usize> = self
            .nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (n.id.as_str(), i))
            .collect();
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for e in &self.edges {
            let (a, b) = e.endpoints();
            if let (Some(&i), Some(&j)) = (index.get(a), index.get(b)) {
                if i != j {
                    adj[i].push(j);
                    adj[j].push(i);
                }
            }
        }
        for l in &mut adj {
            l.sort_unstable();
            l.dedup();
        }
        adj
    }

    pub fn degree(&self, id: &str) -> usize {
        self.node_index(id)
            .map_or(0, |i| self.adjacency()[i].len())
    }

    pub(crate) fn node_index(&self, id: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n.id == id)
    }

    pub(crate) fn is_connected(&self) -> bool {
        if self.nodes.is_empty() {
            return true;
        }
        let adj = self.adjacency();
        let mut seen = vec![false; adj.len()];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    queue.push_back(v);
                }
            }
        }
        count == adj.len()
    }
}
