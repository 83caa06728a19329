//! Deterministic vertex ordering for small labeled graphs.
//!
//! Vertices are ranked by their initial key, refined by neighbor colors until
//! stable, and remaining ties are split by individualizing the member with the
//! smallest tie-break id. For trees the result is an isomorphism invariant.

use std::cmp::Ordering;

/// Returns `pos[v]`, the canonical position of every vertex.
pub(crate) fn canonical_positions<K: Ord>(keys: &[K], adjacency: &[Vec<usize>], tie: &[&str]) -> Vec<usize> {
    let n = keys.len();
    if n == 0 {
        return Vec::new();
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
    let mut colors = vec![0usize; n];
    let mut c = 0;
    for w in 0..n {
        if w > 0 && keys[order[w]] != keys[order[w - 1]] {
            c += 1;
        }
        colors[order[w]] = c;
    }
    refine(&mut colors, adjacency);

    loop {
        let classes = class_count(&colors);
        if classes == n {
            break;
        }
        // smallest color shared by more than one vertex
        let mut counts = vec![0usize; classes];
        for &c in &colors {
            counts[c] += 1;
        }
        let target = counts.iter().position(|&k| k > 1).expect("some class is not a singleton");
        let chosen = (0..n)
            .filter(|&v| colors[v] == target)
            .min_by(|&a, &b| natural_cmp(tie[a], tie[b]).then(a.cmp(&b)))
            .expect("class is non-empty");
        let keyed: Vec<(usize, u8)> = (0..n)
            .map(|v| (colors[v], u8::from(colors[v] == target && v != chosen)))
            .collect();
        colors = rank(&keyed);
        refine(&mut colors, adjacency);
    }
    colors
}

fn class_count(colors: &[usize]) -> usize {
    colors.iter().max().map_or(0, |m| m + 1)
}

fn rank<K: Ord + Clone>(keys: &[K]) -> Vec<usize> {
    let mut sorted: Vec<K> = keys.to_vec();
    sorted.sort();
    sorted.dedup();
    keys.iter()
        .map(|k| sorted.binary_search(k).expect("key present"))
        .collect()
}

fn refine(colors: &mut Vec<usize>, adjacency: &[Vec<usize>]) {
    loop {
        let before = class_count(colors);
        let keyed: Vec<(usize, Vec<usize>)> = (0..colors.len())
            .map(|v| {
                let mut nb: Vec<usize> = adjacency[v].iter().map(|&u| colors[u]).collect();
                nb.sort_unstable();
                (colors[v], nb)
            })
            .collect();
        *colors = rank(&keyed);
        if class_count(colors) == before {
            return;
        }
    }
}

/// Compares strings treating embedded digit runs as numbers (`n2 < n10`).
pub(crate) fn natural_cmp(a: &str, b: &str) -> Ordering {
    let (mut ai, mut bi) = (a.char_indices().peekable(), b.char_indices().peekable());
    loop {
        match (ai.peek().copied(), bi.peek().copied()) {
            (None, None) => return a.cmp(b),
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some((sa, ca)), Some((sb, cb))) => {
                if ca.is_ascii_digit() && cb.is_ascii_digit() {
                    let ea = digits_end(a, sa);
                    let eb = digits_end(b, sb);
                    let (da, db) = (a[sa..ea].trim_start_matches('0'), b[sb..eb].trim_start_matches('0'));
                    let ord = da.len().cmp(&db.len()).then_with(|| da.cmp(db));
                    if ord != Ordering::Equal {
                        return ord;
                    }
                    while ai.peek().is_some_and(|&(i, _)| i < ea) {
                        ai.next();
                    }
                    while bi.peek().is_some_and(|&(i, _)| i < eb) {
                        bi.next();
                    }
                } else {
                    let ord = ca.cmp(&cb);
                    if ord != Ordering::Equal {
                        return ord;
                    }
                    ai.next();
                    bi.next();
                }
            }
        }
    }
}

fn digits_end(s: &str, start: usize) -> usize {
    s[start..]
        .find(|c: char| !c.is_ascii_digit())
        .map_or(s.len(), |i| start + i)
}
