//! Graph edit distance: exact best-first search and an assignment-based upper
//! bound.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::canon::canonical_positions;
use crate::morphology::RobotMorphology;

use super::cost::CostModel;
use super::graph::{mapping_cost, Costs, NodeLabel, Prepared};
use super::hungarian;
use super::path::EditPath;
use super::{Budget, DistanceError, DistanceResult};

// Values closer than this are treated as equal when pruning.
const EPS: f64 = 1e-9;
const DELETED: u8 = u8::MAX;
/// Exact search keeps the used target set in a 64-bit mask.
pub const MAX_EXACT_NODES: usize = 63;

struct Instance<'a> {
    a: &'a Prepared,
    b: &'a Prepared,
    k: Costs,
}

impl<'a> Instance<'a> {
    fn new(a: &'a Prepared, b: &'a Prepared, c: &CostModel) -> Self {
        Instance {
            a,
            b,
            k: Costs::new(a, b, c),
        }
    }

    fn cost(&self, map: &[Option<usize>]) -> f64 {
        mapping_cost(self.a, self.b, &self.k, map)
    }

    fn result(&self, map: &[Option<usize>], exact: bool, explored: u64, exceeded: bool) -> DistanceResult {
        let path = EditPath::from_mapping(self.a, self.b, &self.k, map);
        DistanceResult {
            value: path.total_cost,
            exact,
            path: Some(path),
            explored_states: explored,
            budget_exceeded: exceeded,
        }
    }

    /// Riesen–Bunke assignment: pair cost is substitution plus half the
    /// degree mismatch, padding rows and columns carry deletion and insertion
    /// plus half the incident edge cost.
    #[allow(clippy::needless_range_loop)] // square cost matrix, indexed both ways
    fn bipartite_mapping(&self) -> Vec<Option<usize>> {
        let (a, b, k) = (self.a, self.b, &self.k);
        let (n, m) = (a.len(), b.len());
        let size = n + m;
        if size == 0 {
            return Vec::new();
        }
        let local = |da: usize, db: usize| {
            0.5 * (da.saturating_sub(db) as f64 * k.edel + db.saturating_sub(da) as f64 * k.eins)
        };
        let mut finite = 0.0;
        let mut cost = vec![vec![0.0; size]; size];
        for i in 0..n {
            for j in 0..m {
                cost[i][j] = k.sub[i][j] + local(a.degree[i], b.degree[j]);
                finite += cost[i][j];
            }
            let d = k.del + 0.5 * a.degree[i] as f64 * k.edel;
            cost[i][m + i] = d;
            finite += d;
        }
        for j in 0..m {
            let d = k.ins + 0.5 * b.degree[j] as f64 * k.eins;
            cost[n + j][j] = d;
            finite += d;
        }
        let forbidden = 2.0 * finite + 1.0;
        for i in 0..n {
            for j in 0..n {
                if j != i {
                    cost[i][m + j] = forbidden;
                }
            }
        }
        for j in 0..m {
            for jj in 0..m {
                if jj != j {
                    cost[n + j][jj] = forbidden;
                }
            }
        }
        let (_, assign) = hungarian::solve(&cost);
        (0..n).map(|i| (assign[i] < m).then_some(assign[i])).collect()
    }

    /// Node correspondence through equal canonical forms of the compared
    /// graphs, if they are identical up to renaming.
    fn isomorphism(&self) -> Option<Vec<Option<usize>>> {
        let (a, b) = (self.a, self.b);
        if a.len() != b.len() || a.edges.len() != b.edges.len() {
            return None;
        }
        if a.len() == 0 {
            return Some(Vec::new());
        }
        let (fa, pa) = canonical_form(a);
        let (fb, pb) = canonical_form(b);
        if fa != fb {
            return None;
        }
        let mut by_pos = vec![0usize; pb.len()];
        for (j, &p) in pb.iter().enumerate() {
            by_pos[p] = j;
        }
        Some(pa.iter().map(|&p| Some(by_pos[p])).collect())
    }
}

type CanonicalForm<'a> = (Vec<&'a NodeLabel>, Vec<(usize, usize)>);

fn canonical_form(p: &Prepared) -> (CanonicalForm<'_>, Vec<usize>) {
    let adjacency: Vec<Vec<usize>> = (0..p.len())
        .map(|u| (0..p.len()).filter(|&w| p.adj[u][w]).collect())
        .collect();
    let tie: Vec<&str> = p.ids.iter().map(String::as_str).collect();
    let pos = canonical_positions(&p.labels, &adjacency, &tie);
    let mut labels = vec![&p.labels[0]; p.len()];
    for (i, &q) in pos.iter().enumerate() {
        labels[q] = &p.labels[i];
    }
    let mut edges: Vec<(usize, usize)> = p
        .edges
        .iter()
        .map(|&(u, w)| (pos[u].min(pos[w]), pos[u].max(pos[w])))
        .collect();
    edges.sort_unstable();
    ((labels, edges), pos)
}

#[derive(Clone, Copy)]
struct SearchNode {
    parent: u32,
    target: u8,
    depth: u8,
    g: f64,
    used: u64,
}

#[derive(PartialEq)]
struct Entry {
    f: f64,
    depth: u8,
    seq: u32,
}

impl Eq for Entry {}

impl Ord for Entry {
    // max-heap: the greatest entry has the lowest bound, then the most
    // assignments, then the earliest insertion
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .f
            .total_cmp(&self.f)
            .then(self.depth.cmp(&other.depth))
            .then(other.seq.cmp(&self.seq))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

struct Outcome {
    map: Vec<Option<usize>>,
    exact: bool,
    generated: u64,
}

impl Instance<'_> {
    fn completion(&self, used: u64) -> f64 {
        let b = self.b;
        let free = |v: usize| used & (1u64 << v) == 0;
        let nodes = (0..b.len()).filter(|&v| free(v)).count() as f64 * self.k.ins;
        let edges = b.edges.iter().filter(|&&(x, y)| free(x) || free(y)).count() as f64 * self.k.eins;
        nodes + edges
    }

    /// Lower bound on the cost still to pay once `order[..depth]` is assigned.
    fn heuristic(&self, order: &[usize], depth: usize, assign: &[Option<usize>], used: u64) -> f64 {
        let (a, b, k) = (self.a, self.b, &self.k);
        let rem_a = &order[depth..];
        let rem_b: Vec<usize> = (0..b.len()).filter(|&v| used & (1u64 << v) == 0).collect();
        let assigned = &order[..depth];
        let (r, s) = (rem_a.len(), rem_b.len());
        if r == 0 && s == 0 {
            return 0.0;
        }
        let da: Vec<usize> = rem_a.iter().map(|&u| rem_a.iter().filter(|&&w| a.adj[u][w]).count()).collect();
        let db: Vec<usize> = rem_b.iter().map(|&v| rem_b.iter().filter(|&&x| b.adj[v][x]).count()).collect();

        let del: Vec<f64> = rem_a
            .iter()
            .zip(&da)
            .map(|(&u, &d)| {
                let fixed = assigned.iter().filter(|&&w| a.adj[u][w]).count() as f64 * k.edel;
                k.del + fixed + 0.5 * d as f64 * k.edel
            })
            .collect();
        let ins: Vec<f64> = rem_b
            .iter()
            .zip(&db)
            .map(|(&v, &d)| {
                let fixed = assigned
                    .iter()
                    .filter(|&&w| assign[w].is_some_and(|x| b.adj[v][x]))
                    .count() as f64
                    * k.eins;
                k.ins + fixed + 0.5 * d as f64 * k.eins
            })
            .collect();
        let size = r.max(s);
        let mut cost = vec![vec![0.0; size]; size];
        for (ri, &u) in rem_a.iter().enumerate() {
            for (si, &v) in rem_b.iter().enumerate() {
                let mut fixed = 0.0;
                for &w in assigned {
                    let aw = a.adj[u][w];
                    let bw = assign[w].is_some_and(|x| b.adj[v][x]);
                    if aw && !bw {
                        fixed += k.edel;
                    } else if bw && !aw {
                        fixed += k.eins;
                    }
                }
                let local = 0.5
                    * (da[ri].saturating_sub(db[si]) as f64 * k.edel + db[si].saturating_sub(da[ri]) as f64 * k.eins);
                let pair = k.sub[u][v] + fixed + local;
                cost[ri][si] = pair.min(del[ri] + ins[si]);
            }
            for cell in cost[ri].iter_mut().skip(s) {
                *cell = del[ri];
            }
        }
        for row in cost.iter_mut().skip(r) {
            for (si, cell) in row.iter_mut().take(s).enumerate() {
                *cell = ins[si];
            }
        }
        hungarian::solve(&cost).0
    }

    fn search(&self, mut best: f64, mut best_map: Vec<Option<usize>>, max_states: u64) -> Outcome {
        let (a, b, k) = (self.a, self.b, &self.k);
        let n = a.len();
        let m = b.len();
        if n == 0 {
            return Outcome {
                map: Vec::new(),
                exact: true,
                generated: 0,
            };
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&x, &y| a.degree[y].cmp(&a.degree[x]).then(x.cmp(&y)));

        let mut arena = vec![SearchNode {
            parent: u32::MAX,
            target: DELETED,
            depth: 0,
            g: 0.0,
            used: 0,
        }];
        let mut heap = BinaryHeap::new();
        let mut assign: Vec<Option<usize>> = vec![None; n];
        let h0 = self.heuristic(&order, 0, &assign, 0);
        heap.push(Entry { f: h0, depth: 0, seq: 0 });
        let mut generated: u64 = 1;

        while let Some(e) = heap.pop() {
            if e.f >= best - EPS {
                break;
            }
            let s = arena[e.seq as usize];
            let depth = s.depth as usize;
            let mut cur = e.seq as usize;
            while cur != 0 {
                let node = arena[cur];
                assign[order[node.depth as usize - 1]] = (node.target != DELETED).then_some(node.target as usize);
                cur = node.parent as usize;
            }
            let u = order[depth];
            let targets = (0..m).filter(|&v| s.used & (1u64 << v) == 0).map(Some).chain([None]);
            for t in targets {
                let mut g = s.g + t.map_or(k.del, |v| k.sub[u][v]);
                for &w in &order[..depth] {
                    let aw = a.adj[u][w];
                    let bw = matches!((t, assign[w]), (Some(v), Some(x)) if b.adj[v][x]);
                    if aw && !bw {
                        g += k.edel;
                    } else if bw && !aw {
                        g += k.eins;
                    }
                }
                let used = t.map_or(s.used, |v| s.used | (1u64 << v));
                assign[u] = t;
                if depth + 1 == n {
                    let total = g + self.completion(used);
                    if total < best - EPS {
                        best = total;
                        best_map = (0..n).map(|i| assign[i]).collect();
                    }
                    continue;
                }
                let f = g + self.heuristic(&order, depth + 1, &assign, used);
                if f >= best - EPS {
                    continue;
                }
                if generated >= max_states {
                    return Outcome {
                        map: best_map,
                        exact: false,
                        generated,
                    };
                }
                generated += 1;
                let seq = arena.len() as u32;
                arena.push(SearchNode {
                    parent: e.seq,
                    target: t.map_or(DELETED, |v| v as u8),
                    depth: (depth + 1) as u8,
                    g,
                    used,
                });
                heap.push(Entry {
                    f,
                    depth: (depth + 1) as u8,
                    seq,
                });
            }
            assign[u] = None;
        }
        Outcome {
            map: best_map,
            exact: true,
            generated,
        }
    }

    fn upper_bound(&self) -> Vec<Option<usize>> {
        let mut map = self.bipartite_mapping();
        if let Some(iso) = self.isomorphism() {
            if self.cost(&iso) < self.cost(&map) {
                map = iso;
            }
        }
        map
    }
}

/// Assignment-based upper bound; never below the exact distance.
pub fn ged_upper_bound(a: &RobotMorphology, b: &RobotMorphology, c: &CostModel) -> Result<DistanceResult, DistanceError> {
    c.check(false)?;
    let (pa, pb) = (Prepared::new(a, c)?, Prepared::new(b, c)?);
    let inst = Instance::new(&pa, &pb, c);
    let map = inst.upper_bound();
    Ok(inst.result(&map, false, 0, false))
}

/// Exact edit distance by best-first search over partial node assignments.
///
/// When either graph exceeds `budget.max_nodes` or the search generates more
/// than `budget.max_states` states, the best mapping found so far (at worst
/// the assignment upper bound) is returned with `exact = false`.
pub fn ged_exact(
    a: &RobotMorphology,
    b: &RobotMorphology,
    c: &CostModel,
    budget: Budget,
) -> Result<DistanceResult, DistanceError> {
    c.check(false)?;
    if budget.max_states == 0 {
        return Err(DistanceError::InvalidBudget);
    }
    let (pa, pb) = (Prepared::new(a, c)?, Prepared::new(b, c)?);
    let inst = Instance::new(&pa, &pb, c);
    let ub = inst.upper_bound();
    let limit = budget.max_nodes.min(MAX_EXACT_NODES);
    if pa.len() > limit || pb.len() > limit {
        return Ok(inst.result(&ub, false, 0, true));
    }
    let best = inst.cost(&ub);
    let out = inst.search(best, ub, budget.max_states);
    Ok(inst.result(&out.map, out.exact, out.generated, !out.exact))
}
