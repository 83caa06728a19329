use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::str::FromStr;

use crate::canon::{canonical_positions, natural_cmp};
use crate::taxonomy::{vocab, Taxonomy};

use super::validate::structural_errors;
use super::{MorphEdge, MorphNode, MorphologyError, NodeId, RobotMorphology};

/// Which tokens a robot contributes to its feature set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum FeatureProfile {
    /// Node concept ids only; multiplicity is ignored.
    #[default]
    ConceptsOnly,
    /// Concepts plus `desc:`, `covering:`, `material:` and `silhouette:` tokens.
    Full,
}

impl FromStr for FeatureProfile {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "concepts" | "concepts-only" => Ok(FeatureProfile::ConceptsOnly),
            "full" | "concepts+descriptors+global" => Ok(FeatureProfile::Full),
            other => Err(format!("unknown feature profile `{other}` (expected concepts|full)")),
        }
    }
}

fn ensure_structurally_valid(m: &RobotMorphology) -> Result<(), MorphologyError> {
    let errors = structural_errors(m);
    if errors.is_empty() {
        Ok(())
    } else {
        Err(MorphologyError::InvalidMorphology(errors))
    }
}

pub fn feature_set(m: &RobotMorphology, profile: FeatureProfile) -> Result<BTreeSet<String>, MorphologyError> {
    ensure_structurally_valid(m)?;
    let mut out: BTreeSet<String> = m.nodes.iter().map(|n| n.concept.to_string()).collect();
    if profile == FeatureProfile::Full {
        for n in &m.nodes {
            for d in &n.descriptors {
                out.insert(format!("desc:{}", d.token()));
            }
        }
        if let Some(c) = &m.covering {
            out.insert(format!("covering:{}", c.coverage));
            for mat in &c.materials {
                out.insert(format!("material:{mat}"));
            }
        }
        if let Some(s) = &m.silhouette {
            out.insert(format!("silhouette:{}", s.primary));
            if let Some((a, b)) = &s.hybrid {
                out.insert(format!("silhouette:{a}"));
                out.insert(format!("silhouette:{b}"));
            }
        }
    }
    Ok(out)
}

/// The unique node whose concept is a core subdivision.
pub fn find_root(t: &Taxonomy, m: &RobotMorphology) -> Result<NodeId, MorphologyError> {
    let cores: Vec<&MorphNode> = m
        .nodes
        .iter()
        .filter(|n| t.is_subsumed_by(n.concept.as_str(), vocab::CORE).unwrap_or(false))
        .collect();
    match cores.as_slice() {
        [only] => Ok(only.id.clone()),
        _ => Err(MorphologyError::NoRoot),
    }
}

/// Replaces every node of multiplicity `k > 1` by `k` copies of its branch
/// (the subtree hanging off it in the BFS tree from `root`).
///
/// Copies of a node are addressed by the copy indices along its root path.
/// A non-tree edge joins the copies of its endpoints that agree on the indices
/// of their common ancestors. A graph whose multiplicities are all 1 is
/// returned unchanged and needs no root.
pub fn expand_multiplicities(m: &RobotMorphology, root: Option<&str>) -> Result<RobotMorphology, MorphologyError> {
    ensure_structurally_valid(m)?;
    if m.nodes.iter().all(|n| n.multiplicity == 1) {
        return Ok(m.clone());
    }
    let root = root.ok_or(MorphologyError::NoRoot)?;
    let r = m
        .node_index(root)
        .ok_or_else(|| MorphologyError::UnknownNode(root.to_string()))?;
    if m.nodes[r].multiplicity != 1 {
        return Err(MorphologyError::RootMultiplicity(root.to_string()));
    }

    let n = m.nodes.len();
    let mut adj = m.adjacency();
    for l in &mut adj {
        l.sort_by(|&a, &b| natural_cmp(&m.nodes[a].id, &m.nodes[b].id));
    }
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![0usize; n];
    let mut bfs = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([r]);
    seen[r] = true;
    while let Some(u) = queue.pop_front() {
        bfs.push(u);
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                parent[v] = u;
                depth[v] = depth[u] + 1;
                queue.push_back(v);
            }
        }
    }

    // copies[v] = index paths, one entry per ancestor on the root path (root first)
    let mut copies: Vec<Vec<Vec<u32>>> = vec![Vec::new(); n];
    copies[r] = vec![vec![0]];
    for &v in bfs.iter().skip(1) {
        let p = parent[v];
        let mut mine = Vec::new();
        for path in &copies[p] {
            for i in 0..m.nodes[v].multiplicity {
                let mut c = path.clone();
                c.push(i);
                mine.push(c);
            }
        }
        copies[v] = mine;
    }

    let mut out = RobotMorphology {
        nodes: Vec::new(),
        edges: Vec::new(),
        covering: m.covering.clone(),
        silhouette: m.silhouette.clone(),
    };
    let mut new_ids: Vec<BTreeMap<Vec<u32>, NodeId>> = vec![BTreeMap::new(); n];
    for (v, node) in m.nodes.iter().enumerate() {
        let single = copies[v].len() == 1;
        for (k, path) in copies[v].iter().enumerate() {
            let id = if single { node.id.clone() } else { format!("{}#{}", node.id, k + 1) };
            new_ids[v].insert(path.clone(), id.clone());
            out.nodes.push(MorphNode {
                id,
                concept: node.concept.clone(),
                descriptors: node.descriptors.clone(),
                multiplicity: 1,
            });
        }
    }

    let mut edges = BTreeSet::new();
    for (u, nbrs) in adj.iter().enumerate() {
        for &w in nbrs.iter().filter(|&&w| u < w) {
            // common prefix length = depth of the deepest shared ancestor + 1
            let (mut a, mut b) = (u, w);
            while depth[a] > depth[b] {
                a = parent[a];
            }
            while depth[b] > depth[a] {
                b = parent[b];
            }
            while a != b {
                a = parent[a];
                b = parent[b];
            }
            let shared = depth[a] + 1;
            for (pu, idu) in &new_ids[u] {
                for (pw, idw) in &new_ids[w] {
                    if pu[..shared] == pw[..shared] {
                        edges.insert(MorphEdge::new(idu.clone(), idw.clone()));
                    }
                }
            }
        }
    }
    out.edges = edges.into_iter().collect();
    Ok(out)
}

/// Renumbers nodes `n0, n1, ...` in a deterministic order and sorts edges.
///
/// Order key: concept, descriptor tokens, multiplicity, degree; remaining ties
/// are split by neighborhood refinement and finally by original id.
pub fn canonicalize(m: &RobotMorphology) -> Result<RobotMorphology, MorphologyError> {
    ensure_structurally_valid(m)?;
    let adj = m.adjacency();
    let keys: Vec<(&str, Vec<String>, u32, usize)> = m
        .nodes
        .iter()
        .enumerate()
        .map(|(i, n)| (n.concept.as_str(), n.descriptor_tokens(), n.multiplicity, adj[i].len()))
        .collect();
    let tie: Vec<&str> = m.nodes.iter().map(|n| n.id.as_str()).collect();
    let pos = canonical_positions(&keys, &adj, &tie);

    let mut nodes: Vec<(usize, MorphNode)> = m
        .nodes
        .iter()
        .enumerate()
        .map(|(i, n)| {
            let mut node = n.clone();
            node.id = format!("n{}", pos[i]);
            (pos[i], node)
        })
        .collect();
    nodes.sort_by_key(|(p, _)| *p);

    let mut edges: Vec<(usize, usize)> = Vec::new();
    for (u, nbrs) in adj.iter().enumerate() {
        for &w in nbrs.iter().filter(|&&w| u < w) {
            edges.push((pos[u].min(pos[w]), pos[u].max(pos[w])));
        }
    }
    edges.sort_unstable();

    Ok(RobotMorphology {
        nodes: nodes.into_iter().map(|(_, n)| n).collect(),
        edges: edges
            .into_iter()
            .map(|(a, b)| MorphEdge::new(format!("n{a}"), format!("n{b}")))
            .collect(),
        covering: m.covering.clone(),
        silhouette: m.silhouette.clone(),
    })
}

/// Equality up to node renaming, decided on canonical forms.
pub fn structurally_equal(a: &RobotMorphology, b: &RobotMorphology) -> Result<bool, MorphologyError> {
    Ok(canonicalize(a)? == canonicalize(b)?)
}
