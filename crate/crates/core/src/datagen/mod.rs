//! Synthetic attributed networks.
//!
//! A pool of topic pages with cross-page links is walked in step with a
//! depth-first visit of the social graph, so that adjacent users tend to
//! receive pages on the same topic.

mod assign;
mod emit;
mod pool;
pub mod topology;

pub use assign::{assign_contents, assign_contents_from_seeds, AssignmentResult};
pub use emit::{emit_dataset, load_dataset, DatasetPaths};
pub use pool::{generate_topic_pool, Page, PageId, PagePool, PoolParams};

use rand::Rng;

/// Calls `hit(i)` for each `i < n` that succeeds an independent Bernoulli(p)
/// trial, skipping failures with geometric jumps.
pub(crate) fn bernoulli_hits<R: Rng, F: FnMut(usize)>(n: usize, p: f64, rng: &mut R, mut hit: F) {
    if p <= 0.0 || n == 0 {
        return;
    }
    if p >= 1.0 {
        (0..n).for_each(hit);
        return;
    }
    let log_q = (1.0 - p).ln();
    let mut i = 0usize;
    loop {
        // U in (0, 1]
        let u: f64 = 1.0 - rng.gen::<f64>();
        let skip = (u.ln() / log_q).floor();
        if skip >= (n - i) as f64 {
            return;
        }
        i += skip as usize;
        hit(i);
        i += 1;
        if i >= n {
            return;
        }
    }
}

/// Set of indices with O(1) removal and uniform sampling.
#[derive(Debug, Clone)]
pub(crate) struct IndexedSet {
    items: Vec<usize>,
    pos: Vec<usize>,
}

impl IndexedSet {
    const ABSENT: usize = usize::MAX;

    /// Holds the given items; `universe` bounds their values.
    pub(crate) fn new(items: impl IntoIterator<Item = usize>, universe: usize) -> Self {
        let items: Vec<usize> = items.into_iter().collect();
        let mut pos = vec![Self::ABSENT; universe];
        for (i, &x) in items.iter().enumerate() {
            pos[x] = i;
        }
        Self { items, pos }
    }

    #[cfg(test)]
    pub(crate) fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub(crate) fn remove(&mut self, x: usize) {
        let p = self.pos[x];
        if p == Self::ABSENT {
            return;
        }
        let last = *self.items.last().expect("non-empty");
        self.items.swap_remove(p);
        if last != x {
            self.pos[last] = p;
        }
        self.pos[x] = Self::ABSENT;
    }

    pub(crate) fn choose<R: Rng>(&self, rng: &mut R) -> Option<usize> {
        (!self.items.is_empty()).then(|| self.items[rng.gen_range(0..self.items.len())])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn bernoulli_extremes() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut v = Vec::new();
        bernoulli_hits(5, 1.0, &mut rng, |i| v.push(i));
        assert_eq!(v, vec![0, 1, 2, 3, 4]);
        v.clear();
        bernoulli_hits(5, 0.0, &mut rng, |i| v.push(i));
        assert!(v.is_empty());
    }

    #[test]
    fn bernoulli_rate() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut hits = Vec::new();
        bernoulli_hits(200_000, 0.03, &mut rng, |i| hits.push(i));
        let rate = hits.len() as f64 / 200_000.0;
        assert!((rate - 0.03).abs() < 0.002, "rate {rate}");
        assert!(hits.windows(2).all(|w| w[0] < w[1]));
        assert!(*hits.last().unwrap() < 200_000);
    }

    #[test]
    fn indexed_set_removal() {
        let mut s = IndexedSet::new([3, 1, 4], 5);
        s.remove(1);
        s.remove(1);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..20 {
            let x = s.choose(&mut rng).unwrap();
            assert!(x == 3 || x == 4);
        }
        s.remove(3);
        s.remove(4);
        assert!(s.is_empty());
        assert_eq!(s.choose(&mut rng), None);
    }
}
