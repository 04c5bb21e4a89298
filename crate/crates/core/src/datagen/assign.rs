use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{IndexedSet, PageId, PagePool};
use crate::error::{Error, Result};
use crate::graph::{NodeId, SocialGraph};

#[derive(Debug, Clone, PartialEq)]
pub struct AssignmentResult {
    /// `(node, page)` for every graph node, ascending node id.
    pub mapping: Vec<(NodeId, PageId)>,
    /// Seed nodes in pairing order.
    pub seeds: Vec<NodeId>,
    /// Fraction of nodes reached by the seed walks; the rest got
    /// uniformly sampled pages.
    pub coverage: f64,
    /// Assignments that had to reuse an already assigned page.
    pub reused_pages: usize,
}

impl AssignmentResult {
    pub fn page_of(&self, node: NodeId) -> Option<PageId> {
        self.mapping
            .binary_search_by_key(&node, |&(n, _)| n)
            .ok()
            .map(|i| self.mapping[i].1)
    }
}

struct PageAllocator<'p> {
    pool: &'p PagePool,
    used: Vec<bool>,
    free_by_topic: Vec<IndexedSet>,
    free_all: IndexedSet,
    reused: usize,
}

impl<'p> PageAllocator<'p> {
    fn new(pool: &'p PagePool) -> Self {
        let n = pool.len();
        let free_by_topic =
            (0..pool.num_topics()).map(|t| IndexedSet::new(pool.topic_pages(t), n)).collect();
        Self { pool, used: vec![false; n], free_by_topic, free_all: IndexedSet::new(0..n, n), reused: 0 }
    }

    fn take(&mut self, page: PageId) -> PageId {
        if self.used[page] {
            self.reused += 1;
        } else {
            self.used[page] = true;
            self.free_by_topic[self.pool.topic_of(page)].remove(page);
            self.free_all.remove(page);
        }
        page
    }

    /// Follow a fresh out-link of `current`; otherwise a fresh page of the
    /// same topic, then any fresh page, then reuse.
    fn next_after<R: Rng>(&mut self, current: PageId, rng: &mut R) -> PageId {
        let links = &self.pool.pages[current].out_links;
        let fresh: Vec<PageId> = links.iter().copied().filter(|&p| !self.used[p]).collect();
        if !fresh.is_empty() {
            return self.take(fresh[rng.gen_range(0..fresh.len())]);
        }
        let topic = self.pool.topic_of(current);
        if let Some(p) = self.free_by_topic[topic].choose(rng) {
            return self.take(p);
        }
        if let Some(p) = self.free_all.choose(rng) {
            return self.take(p);
        }
        let p = if links.is_empty() {
            let range = self.pool.topic_pages(topic);
            rng.gen_range(range)
        } else {
            links[rng.gen_range(0..links.len())]
        };
        self.take(p)
    }

    fn any<R: Rng>(&mut self, rng: &mut R) -> PageId {
        match self.free_all.choose(rng) {
            Some(p) => self.take(p),
            None => {
                let p = rng.gen_range(0..self.pool.len());
                self.take(p)
            }
        }
    }
}

/// Samples `num_seeds` seed nodes uniformly and runs the seed walks.
pub fn assign_contents(
    g: &SocialGraph,
    pool: &PagePool,
    num_seeds: usize,
    seed: u64,
) -> Result<AssignmentResult> {
    check_inputs(g, pool, num_seeds)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let seeds: Vec<NodeId> = sample(&mut rng, g.node_count(), num_seeds)
        .into_iter()
        .map(|i| g.node_id(i))
        .collect();
    run(g, pool, &seeds, rng)
}

/// Seed walks from explicit seed nodes.
///
/// Seed `i` starts on page `i / T` of topic `i % T` (`T` topics). All seeds
/// advance their depth-first visits in lock step, one newly discovered node
/// per seed per round, visiting neighbors in ascending id order. A node
/// belongs to the first walk that reaches it. Each discovered node receives
/// the next page of the walk through the pool's links, starting from the
/// page of the node it was discovered from.
pub fn assign_contents_from_seeds(
    g: &SocialGraph,
    pool: &PagePool,
    seeds: &[NodeId],
    seed: u64,
) -> Result<AssignmentResult> {
    check_inputs(g, pool, seeds.len())?;
    let mut uniq = seeds.to_vec();
    uniq.sort_unstable();
    uniq.dedup();
    if uniq.len() != seeds.len() {
        return Err(Error::param("seeds", "seed nodes must be distinct"));
    }
    for &s in seeds {
        g.index_of(s)?;
    }
    run(g, pool, seeds, ChaCha8Rng::seed_from_u64(seed))
}

fn check_inputs(g: &SocialGraph, pool: &PagePool, num_seeds: usize) -> Result<()> {
    if g.is_empty() {
        return Err(Error::param("graph", "graph has no nodes"));
    }
    if pool.is_empty() {
        return Err(Error::param("pool", "page pool is empty"));
    }
    let limit = g.node_count().min(pool.len());
    if num_seeds > limit {
        return Err(Error::param("num_seeds", format!("{num_seeds} exceeds min(nodes, pages) = {limit}")));
    }
    Ok(())
}

fn run(
    g: &SocialGraph,
    pool: &PagePool,
    seeds: &[NodeId],
    mut rng: ChaCha8Rng,
) -> Result<AssignmentResult> {
    let n = g.node_count();
    let topics = pool.num_topics();
    let per = pool.params.pages_per_topic;
    let mut alloc = PageAllocator::new(pool);
    let mut page_of: Vec<Option<PageId>> = vec![None; n];

    // (node index, next neighbor cursor)
    let mut stacks: Vec<Vec<(usize, usize)>> = Vec::with_capacity(seeds.len());
    for (i, &s) in seeds.iter().enumerate() {
        let idx = g.index_of(s)?;
        let start = (i % topics) * per + i / topics;
        page_of[idx] = Some(alloc.take(start));
        stacks.push(vec![(idx, 0)]);
    }

    let mut reached = seeds.len();
    let mut active = stacks.iter().filter(|s| !s.is_empty()).count();
    while active > 0 {
        for stack in stacks.iter_mut() {
            while let Some(top) = stack.last_mut() {
                let (u, cursor) = *top;
                let nbrs = g.neighbor_indices(u);
                if cursor >= nbrs.len() {
                    stack.pop();
                    if stack.is_empty() {
                        active -= 1;
                    }
                    continue;
                }
                top.1 += 1;
                let v = nbrs[cursor] as usize;
                if page_of[v].is_some() {
                    continue;
                }
                let from = page_of[u].expect("stack holds assigned nodes");
                page_of[v] = Some(alloc.next_after(from, &mut rng));
                reached += 1;
                stack.push((v, 0));
                break;
            }
        }
    }

    for slot in page_of.iter_mut().filter(|p| p.is_none()) {
        *slot = Some(alloc.any(&mut rng));
    }

    let mapping = page_of
        .into_iter()
        .enumerate()
        .map(|(i, p)| (g.node_id(i), p.expect("every node assigned")))
        .collect();
    Ok(AssignmentResult {
        mapping,
        seeds: seeds.to_vec(),
        coverage: reached as f64 / n as f64,
        reused_pages: alloc.reused,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datagen::{generate_topic_pool, Page, PoolParams};

    /// Pool whose pages form a single chain 0 -> 1 -> 2 -> ...
    fn chain_pool(len: usize) -> PagePool {
        let params = PoolParams {
            num_topics: 1,
            pages_per_topic: len,
            vocab_per_topic: 1,
            shared_vocab: 1,
            doc_length: 1,
            topic_word_fraction: 1.0,
            intra_topic_link_prob: 0.0,
            inter_topic_link_prob: 0.0,
        };
        let pages = (0..len)
            .map(|i| Page {
                page_id: i,
                topic: 0,
                text: format!("page{i}"),
                out_links: if i + 1 < len { vec![i + 1] } else { vec![] },
            })
            .collect();
        PagePool { params, pages }
    }

    #[test]
    fn chain_pages_follow_dfs_order() {
        let g = SocialGraph::from_edges([(10, 11), (11, 12), (12, 13), (13, 14)]);
        let pool = chain_pool(5);
        let r = assign_contents_from_seeds(&g, &pool, &[10], 0).unwrap();
        let pages: Vec<PageId> = r.mapping.iter().map(|&(_, p)| p).collect();
        assert_eq!(pages, vec![0, 1, 2, 3, 4]);
        assert_eq!(r.coverage, 1.0);
        assert_eq!(r.reused_pages, 0);
    }

    #[test]
    fn every_node_a_seed() {
        let g = SocialGraph::from_edges([(1, 2), (2, 3), (3, 4)]);
        let pool = generate_topic_pool(
            PoolParams { num_topics: 2, pages_per_topic: 2, doc_length: 5, ..PoolParams::default() },
            1,
        )
        .unwrap();
        let r = assign_contents(&g, &pool, 4, 7).unwrap();
        let mut pages: Vec<PageId> = r.mapping.iter().map(|&(_, p)| p).collect();
        pages.sort_unstable();
        assert_eq!(pages, vec![0, 1, 2, 3]);
        // i-th seed gets page i/2 of topic i%2
        for (i, &s) in r.seeds.iter().enumerate() {
            assert_eq!(r.page_of(s), Some((i % 2) * 2 + i / 2));
        }
        assert_eq!(r.coverage, 1.0);
    }

    #[test]
    fn unreached_components_are_filled() {
        let g = SocialGraph::from_nodes_and_edges([100], [(1, 2), (5, 6)]);
        let pool = chain_pool(10);
        let r = assign_contents_from_seeds(&g, &pool, &[1], 3).unwrap();
        assert_eq!(r.mapping.len(), 5);
        assert!((r.coverage - 0.4).abs() < 1e-12);
        let mut pages: Vec<PageId> = r.mapping.iter().map(|&(_, p)| p).collect();
        pages.sort_unstable();
        pages.dedup();
        assert_eq!(pages.len(), 5, "fresh pages while the pool lasts");
    }

    #[test]
    fn pages_reused_once_pool_exhausted() {
        let g = SocialGraph::from_edges((0..9u64).map(|i| (i, i + 1)));
        let pool = chain_pool(4);
        let r = assign_contents_from_seeds(&g, &pool, &[0], 1).unwrap();
        assert_eq!(r.mapping.len(), 10);
        assert_eq!(r.reused_pages, 6);
    }

    #[test]
    fn input_errors() {
        let g = SocialGraph::from_edges([(1, 2)]);
        let pool = chain_pool(3);
        assert!(assign_contents(&g, &pool, 3, 0).is_err());
        assert!(assign_contents(&SocialGraph::default(), &pool, 0, 0).is_err());
        let empty = PagePool { params: pool.params, pages: vec![] };
        assert!(assign_contents(&g, &empty, 0, 0).is_err());
        assert!(assign_contents_from_seeds(&g, &pool, &[1, 1], 0).is_err());
        assert!(assign_contents_from_seeds(&g, &pool, &[9], 0).is_err());
    }
}
