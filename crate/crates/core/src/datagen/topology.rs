//! Random social topologies for experiments without a real edge list.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{NodeId, SocialGraph};

/// Uniform random graph with exactly `edges` edges over nodes `0..nodes`.
pub fn gnm(nodes: usize, edges: usize, seed: u64) -> Result<SocialGraph> {
    let max = nodes.saturating_mul(nodes.saturating_sub(1)) / 2;
    if edges > max {
        return Err(Error::param("edges", format!("{edges} exceeds the {max} possible pairs")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen: HashSet<(u64, u64)> = HashSet::with_capacity(edges);
    let mut list = Vec::with_capacity(edges);
    while list.len() < edges {
        let u = rng.gen_range(0..nodes) as u64;
        let v = rng.gen_range(0..nodes) as u64;
        if u == v {
            continue;
        }
        let e = (u.min(v), u.max(v));
        if seen.insert(e) {
            list.push(e);
        }
    }
    Ok(SocialGraph::from_nodes_and_edges(0..nodes as NodeId, list))
}

/// Preferential attachment with triad formation (Holme-Kim): every new node
/// attaches `m` edges; after the first, each edge closes a triangle with
/// probability `triad_prob`.
pub fn preferential_attachment(nodes: usize, m: usize, triad_prob: f64, seed: u64) -> Result<SocialGraph> {
    if m == 0 {
        return Err(Error::param("m", "must be positive"));
    }
    if nodes <= m {
        return Err(Error::param("nodes", format!("need more than m = {m} nodes")));
    }
    if !(0.0..=1.0).contains(&triad_prob) {
        return Err(Error::param("triad_prob", format!("{triad_prob} is outside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); nodes];
    // each edge endpoint once: uniform pick = degree-proportional pick
    let mut endpoints: Vec<usize> = Vec::new();
    let mut edges = Vec::new();
    let mut link = |a: usize, b: usize, adj: &mut Vec<Vec<usize>>, endpoints: &mut Vec<usize>| {
        adj[a].push(b);
        adj[b].push(a);
        endpoints.push(a);
        endpoints.push(b);
        edges.push((a as NodeId, b as NodeId));
    };
    for a in 0..=m {
        for b in a + 1..=m {
            link(a, b, &mut adj, &mut endpoints);
        }
    }
    for v in m + 1..nodes {
        let mut chosen: Vec<usize> = Vec::with_capacity(m);
        let mut last: Option<usize> = None;
        while chosen.len() < m {
            let triad = last.filter(|_| rng.gen_bool(triad_prob)).and_then(|w| {
                let cands: Vec<usize> =
                    adj[w].iter().copied().filter(|x| !chosen.contains(x)).collect();
                (!cands.is_empty()).then(|| cands[rng.gen_range(0..cands.len())])
            });
            let target = match triad {
                Some(t) => t,
                None => {
                    let t = endpoints[rng.gen_range(0..endpoints.len())];
                    if chosen.contains(&t) {
                        continue;
                    }
                    last = Some(t);
                    t
                }
            };
            chosen.push(target);
        }
        for t in chosen {
            link(v, t, &mut adj, &mut endpoints);
        }
    }
    Ok(SocialGraph::from_edges(edges))
}
