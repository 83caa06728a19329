use std::collections::BTreeMap;

use serde::Serialize;

use super::graph::{Costs, LabeledGraph, NodeLabel, Prepared};
use super::DistanceError;

/// Edge ids refer to the source graph for deletions and to the target graph
/// for insertions.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "op")]
pub enum EditOp {
    DeleteEdge { a: String, b: String },
    DeleteNode { id: String },
    /// Relabels `from` and renames it to `to`.
    SubstituteNode { from: String, to: String, label: NodeLabel },
    InsertNode { id: String, label: NodeLabel },
    InsertEdge { a: String, b: String },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EditStep {
    #[serde(flatten)]
    pub op: EditOp,
    pub cost: f64,
}

/// Operations in apply order: edge deletions, node deletions, substitutions,
/// node insertions, edge insertions. Free substitutions that keep the id are
/// left out, so identical graphs have an empty path.
#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct EditPath {
    pub steps: Vec<EditStep>,
    pub total_cost: f64,
}

impl EditPath {
    pub(crate) fn from_mapping(a: &Prepared, b: &Prepared, k: &Costs, map: &[Option<usize>]) -> EditPath {
        let mut inverse = vec![None; b.len()];
        for (i, t) in map.iter().enumerate() {
            if let Some(j) = t {
                inverse[*j] = Some(i);
            }
        }
        let mut steps = Vec::new();
        let mut del_edges: Vec<(String, String)> = a
            .edges
            .iter()
            .filter(|&&(u, w)| !matches!((map[u], map[w]), (Some(x), Some(y)) if b.adj[x][y]))
            .map(|&(u, w)| LabeledGraph::edge_key(&a.ids[u], &a.ids[w]))
            .collect();
        del_edges.sort();
        for (x, y) in del_edges {
            steps.push(EditStep {
                op: EditOp::DeleteEdge { a: x, b: y },
                cost: k.edel,
            });
        }
        let mut dels: Vec<&String> = (0..a.len()).filter(|&i| map[i].is_none()).map(|i| &a.ids[i]).collect();
        dels.sort();
        for id in dels {
            steps.push(EditStep {
                op: EditOp::DeleteNode { id: id.clone() },
                cost: k.del,
            });
        }
        let mut subs: Vec<(usize, usize)> = map
            .iter()
            .enumerate()
            .filter_map(|(i, t)| t.map(|j| (i, j)))
            .filter(|&(i, j)| k.sub[i][j] != 0.0 || a.ids[i] != b.ids[j] || a.labels[i] != b.labels[j])
            .collect();
        subs.sort_by(|x, y| a.ids[x.0].cmp(&a.ids[y.0]));
        for (i, j) in subs {
            steps.push(EditStep {
                op: EditOp::SubstituteNode {
                    from: a.ids[i].clone(),
                    to: b.ids[j].clone(),
                    label: b.labels[j].clone(),
                },
                cost: k.sub[i][j],
            });
        }
        let mut ins: Vec<usize> = (0..b.len()).filter(|&j| inverse[j].is_none()).collect();
        ins.sort_by(|x, y| b.ids[*x].cmp(&b.ids[*y]));
        for j in ins {
            steps.push(EditStep {
                op: EditOp::InsertNode {
                    id: b.ids[j].clone(),
                    label: b.labels[j].clone(),
                },
                cost: k.ins,
            });
        }
        let mut ins_edges: Vec<(String, String)> = b
            .edges
            .iter()
            .filter(|&&(x, y)| !matches!((inverse[x], inverse[y]), (Some(u), Some(w)) if a.adj[u][w]))
            .map(|&(x, y)| LabeledGraph::edge_key(&b.ids[x], &b.ids[y]))
            .collect();
        ins_edges.sort();
        for (x, y) in ins_edges {
            steps.push(EditStep {
                op: EditOp::InsertEdge { a: x, b: y },
                cost: k.eins,
            });
        }
        // fold from +0.0: an empty f64 `sum` yields -0.0
        let total_cost = steps.iter().fold(0.0, |acc, s| acc + s.cost);
        EditPath { steps, total_cost }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Applies the path. Substitutions are performed together, so renames
    /// may swap ids.
    pub fn apply(&self, g: &LabeledGraph) -> Result<LabeledGraph, DistanceError> {
        let bad = |msg: String| Err(DistanceError::InvalidPath(msg));
        let mut out = g.clone();
        let mut renames: BTreeMap<String, (String, NodeLabel)> = BTreeMap::new();
        let mut renamed = false;
        let flush = |out: &mut LabeledGraph, renames: &mut BTreeMap<String, (String, NodeLabel)>| {
            let mut nodes = BTreeMap::new();
            for (id, label) in std::mem::take(&mut out.nodes) {
                match renames.get(&id) {
                    Some((to, l)) => nodes.insert(to.clone(), l.clone()),
                    None => nodes.insert(id, label),
                };
            }
            let edges = std::mem::take(&mut out.edges)
                .into_iter()
                .map(|(x, y)| {
                    let x = renames.get(&x).map_or(x, |r| r.0.clone());
                    let y = renames.get(&y).map_or(y, |r| r.0.clone());
                    LabeledGraph::edge_key(&x, &y)
                })
                .collect();
            let expected = nodes.len();
            out.nodes = nodes;
            out.edges = edges;
            renames.clear();
            expected
        };
        for step in &self.steps {
            if !matches!(step.op, EditOp::SubstituteNode { .. }) && !renames.is_empty() {
                let before = out.nodes.len();
                if flush(&mut out, &mut renames) != before {
                    return bad("substitutions map two nodes onto one id".into());
                }
                renamed = true;
            }
            match &step.op {
                EditOp::DeleteEdge { a, b } => {
                    if !out.edges.remove(&LabeledGraph::edge_key(a, b)) {
                        return bad(format!("cannot delete missing edge {a}--{b}"));
                    }
                }
                EditOp::DeleteNode { id } => {
                    if out.nodes.remove(id).is_none() {
                        return bad(format!("cannot delete missing node {id}"));
                    }
                    if out.edges.iter().any(|(x, y)| x == id || y == id) {
                        return bad(format!("node {id} still has edges"));
                    }
                }
                EditOp::SubstituteNode { from, to, label } => {
                    if renamed {
                        return bad("substitutions must be contiguous".into());
                    }
                    if !out.nodes.contains_key(from) {
                        return bad(format!("cannot substitute missing node {from}"));
                    }
                    renames.insert(from.clone(), (to.clone(), label.clone()));
                }
                EditOp::InsertNode { id, label } => {
                    if out.nodes.insert(id.clone(), label.clone()).is_some() {
                        return bad(format!("node {id} already exists"));
                    }
                }
                EditOp::InsertEdge { a, b } => {
                    if !out.nodes.contains_key(a) || !out.nodes.contains_key(b) {
                        return bad(format!("edge {a}--{b} has a missing endpoint"));
                    }
                    if !out.edges.insert(LabeledGraph::edge_key(a, b)) {
                        return bad(format!("edge {a}--{b} already exists"));
                    }
                }
            }
        }
        if !renames.is_empty() {
            let before = out.nodes.len();
            if flush(&mut out, &mut renames) != before {
                return bad("substitutions map two nodes onto one id".into());
            }
        }
        Ok(out)
    }
}
