//! Brute-force reference implementations. They work from raw token lists and
//! edge lists and share no code paths with the library.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

/// Dense TF-IDF over the sorted vocabulary of `docs`.
pub fn dense_tfidf(docs: &[Vec<String>]) -> Vec<Vec<f64>> {
    let vocab: BTreeSet<&String> = docs.iter().flatten().collect();
    let m = docs.len() as f64;
    docs.iter()
        .map(|d| {
            vocab
                .iter()
                .map(|w| {
                    if d.is_empty() {
                        return 0.0;
                    }
                    let count = d.iter().filter(|t| t == w).count() as f64;
                    let h = docs.iter().filter(|o| o.contains(w)).count() as f64;
                    count / d.len() as f64 * (m / h).ln()
                })
                .collect()
        })
        .collect()
}

pub fn dense_cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        dot / (na * nb)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RefScore {
    pub node: u64,
    pub affinity: f64,
    pub centrality: f64,
    pub utility: f64,
}

fn neighbor_sets(nodes: &[u64], edges: &[(u64, u64)]) -> BTreeMap<u64, BTreeSet<u64>> {
    let mut adj: BTreeMap<u64, BTreeSet<u64>> = nodes.iter().map(|&n| (n, BTreeSet::new())).collect();
    for &(u, v) in edges {
        if u != v {
            adj.entry(u).or_default().insert(v);
            adj.entry(v).or_default().insert(u);
        }
    }
    adj
}

pub fn ref_scores(nodes: &[u64], edges: &[(u64, u64)], aff: &BTreeMap<u64, f64>, alpha: f64) -> Vec<RefScore> {
    let adj = neighbor_sets(nodes, edges);
    adj.iter()
        .map(|(&u, nbrs)| {
            let c = if nbrs.is_empty() {
                0.0
            } else {
                nbrs.iter().map(|v| aff[v]).sum::<f64>() / nbrs.len() as f64
            };
            let a = aff[&u];
            RefScore { node: u, affinity: a, centrality: c, utility: alpha * a + (1.0 - alpha) * c }
        })
        .collect()
}

/// Full sort then truncate.
pub fn ref_rank(scores: &[RefScore], by_affinity: bool, k: usize) -> Vec<u64> {
    let mut s = scores.to_vec();
    let key = |r: &RefScore| if by_affinity { r.affinity } else { r.utility };
    s.sort_by(|a, b| key(b).partial_cmp(&key(a)).unwrap().then(a.node.cmp(&b.node)));
    s.into_iter().take(k).map(|r| r.node).collect()
}

/// (direct, from_neighborhoods, total) from set definitions.
pub fn ref_metrics(
    nodes: &[u64],
    edges: &[(u64, u64)],
    aff: &BTreeMap<u64, f64>,
    selection: &[u64],
    tau: f64,
) -> (usize, usize, usize) {
    let adj = neighbor_sets(nodes, edges);
    let sel: BTreeSet<u64> = selection.iter().copied().collect();
    let direct = sel.iter().filter(|u| aff[u] >= tau).count();
    let hood: BTreeSet<u64> = sel.iter().flat_map(|u| adj[u].iter().copied()).collect();
    let from = hood.difference(&sel).filter(|v| aff[v] >= tau).count();
    (direct, from, direct + from)
}
