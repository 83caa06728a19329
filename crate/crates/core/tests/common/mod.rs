//! Test helpers shared by the integration suites: graph generators and an
//! exhaustive edit-distance oracle that shares no code with the library.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::OnceLock;

use metamorph::morphology::{validate, MorphNode, RobotMorphology};
use metamorph::taxonomy::{self, ConceptId, Taxonomy};
use proptest::prelude::*;
use rand::Rng;

/// Concepts drawn by the generators; a small pool makes label collisions common.
pub const POOL: [&str; 6] = ["Body", "Head", "Arm", "Leg", "Wheel", "Eye"];

pub fn taxonomy() -> &'static Taxonomy {
    static T: OnceLock<Taxonomy> = OnceLock::new();
    T.get_or_init(taxonomy::bundled)
}

pub fn fixture(name: &str) -> String {
    let path = format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

/// Builds a graph from concept labels and index edges; ids are `n0`, `n1`, ...
pub fn build(labels: &[usize], edges: &[(usize, usize)]) -> RobotMorphology {
    let mut m = RobotMorphology::new();
    for (i, &l) in labels.iter().enumerate() {
        m.add_node(MorphNode::new(format!("n{i}"), ConceptId::new(POOL[l]).unwrap()));
    }
    for &(a, b) in edges {
        m.add_edge(&format!("n{a}"), &format!("n{b}"));
    }
    m
}

/// A random spanning tree plus extra edges chosen by `extra`, deduplicated.
fn connect(n: usize, parents: &[usize], extra: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut set = BTreeSet::new();
    for i in 1..n {
        set.insert((parents[i - 1] % i, i));
    }
    for &(a, b) in extra {
        let (a, b) = (a % n, b % n);
        if a != b {
            set.insert((a.min(b), a.max(b)));
        }
    }
    set.into_iter().collect()
}

/// Connected graphs with 1..=max_nodes nodes.
pub fn arb_graph(max_nodes: usize) -> impl Strategy<Value = RobotMorphology> {
    (1..=max_nodes).prop_flat_map(|n| {
        (
            prop::collection::vec(0..POOL.len(), n),
            prop::collection::vec(0..usize::MAX, n.saturating_sub(1)),
            prop::collection::vec((0..n, 0..n), 0..=n),
        )
            .prop_map(move |(labels, parents, extra)| build(&labels, &connect(n, &parents, &extra)))
    })
}

pub fn random_graph<R: Rng>(rng: &mut R, max_nodes: usize) -> RobotMorphology {
    let n = rng.gen_range(1..=max_nodes);
    let labels: Vec<usize> = (0..n).map(|_| rng.gen_range(0..POOL.len())).collect();
    let parents: Vec<usize> = (1..n).map(|i| rng.gen_range(0..i)).collect();
    let extra: Vec<(usize, usize)> = (0..rng.gen_range(0..=n)).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect();
    build(&labels, &connect(n, &parents, &extra))
}

pub fn assert_valid(m: &RobotMorphology) {
    let r = validate(taxonomy(), m);
    assert!(r.is_valid(), "generated graph is invalid: {:?}", r.errors);
}

/// Exhaustive unit-cost edit distance with concept-only labels: the minimum
/// over every injective partial map from `a`'s nodes into `b`'s nodes.
pub fn brute_force_ged(a: &RobotMorphology, b: &RobotMorphology) -> f64 {
    let la: Vec<&str> = a.nodes.iter().map(|n| n.concept.as_str()).collect();
    let lb: Vec<&str> = b.nodes.iter().map(|n| n.concept.as_str()).collect();
    let idx = |m: &RobotMorphology, id: &str| m.nodes.iter().position(|n| n.id == id).unwrap();
    let edges = |m: &RobotMorphology| -> BTreeSet<(usize, usize)> {
        m.edges
            .iter()
            .map(|e| {
                let (x, y) = e.endpoints();
                let (i, j) = (idx(m, x), idx(m, y));
                (i.min(j), i.max(j))
            })
            .collect()
    };
    let (ea, eb) = (edges(a), edges(b));
    let mut best = f64::INFINITY;
    let mut map = vec![None; la.len()];
    let mut used = vec![false; lb.len()];
    search(0, &la, &lb, &ea, &eb, &mut map, &mut used, &mut best);
    best
}

#[allow(clippy::too_many_arguments)]
fn search(
    i: usize,
    la: &[&str],
    lb: &[&str],
    ea: &BTreeSet<(usize, usize)>,
    eb: &BTreeSet<(usize, usize)>,
    map: &mut Vec<Option<usize>>,
    used: &mut Vec<bool>,
    best: &mut f64,
) {
    if i == la.len() {
        let mut cost = 0.0;
        for (x, t) in map.iter().enumerate() {
            match t {
                Some(y) if la[x] != lb[*y] => cost += 1.0,
                Some(_) => {}
                None => cost += 1.0,
            }
        }
        cost += used.iter().filter(|u| !**u).count() as f64;
        let mut kept = 0;
        for &(x, y) in ea {
            match (map[x], map[y]) {
                (Some(p), Some(q)) if eb.contains(&(p.min(q), p.max(q))) => kept += 1,
                _ => cost += 1.0,
            }
        }
        cost += (eb.len() - kept) as f64;
        if cost < *best {
            *best = cost;
        }
        return;
    }
    map[i] = None;
    search(i + 1, la, lb, ea, eb, map, used, best);
    for j in 0..lb.len() {
        if !used[j] {
            used[j] = true;
            map[i] = Some(j);
            search(i + 1, la, lb, ea, eb, map, used, best);
            used[j] = false;
        }
    }
    map[i] = None;
}
