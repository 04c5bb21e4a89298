use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::bernoulli_hits;
use crate::error::{Error, Result};

pub type PageId = usize;

/// Knobs of the synthetic topic pool.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoolParams {
    pub num_topics: usize,
    pub pages_per_topic: usize,
    /// Words private to each topic.
    pub vocab_per_topic: usize,
    /// Background words shared by every topic.
    pub shared_vocab: usize,
    /// Tokens per page.
    pub doc_length: usize,
    /// Fraction of each page's tokens drawn from its topic vocabulary.
    pub topic_word_fraction: f64,
    pub intra_topic_link_prob: f64,
    pub inter_topic_link_prob: f64,
}

impl Default for PoolParams {
    fn default() -> Self {
        Self {
            num_topics: 20,
            pages_per_topic: 300,
            vocab_per_topic: 40,
            shared_vocab: 200,
            doc_length: 200,
            topic_word_fraction: 0.6,
            intra_topic_link_prob: 0.9,
            inter_topic_link_prob: 0.01,
        }
    }
}

impl PoolParams {
    /// Twenty topics with enough pages for a twitter-2010 sized network
    /// (90,908 nodes); link probabilities scaled down to keep out-degrees
    /// moderate.
    pub fn full_scale() -> Self {
        Self {
            pages_per_topic: 4546,
            intra_topic_link_prob: 0.005,
            inter_topic_link_prob: 0.00005,
            ..Self::default()
        }
    }

    pub fn page_count(&self) -> usize {
        self.num_topics * self.pages_per_topic
    }

    pub fn validate(&self) -> Result<()> {
        let counts = [
            ("num_topics", self.num_topics),
            ("pages_per_topic", self.pages_per_topic),
            ("vocab_per_topic", self.vocab_per_topic),
            ("shared_vocab", self.shared_vocab),
            ("doc_length", self.doc_length),
        ];
        for (name, v) in counts {
            if v == 0 {
                return Err(Error::param(name, "must be positive"));
            }
        }
        let probs = [
            ("topic_word_fraction", self.topic_word_fraction),
            ("intra_topic_link_prob", self.intra_topic_link_prob),
            ("inter_topic_link_prob", self.inter_topic_link_prob),
        ];
        for (name, p) in probs {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::param(name, format!("{p} is outside [0, 1]")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Page {
    pub page_id: PageId,
    pub topic: usize,
    pub text: String,
    /// Sorted ascending.
    pub out_links: Vec<PageId>,
}

/// Pages laid out topic by topic: page `t * pages_per_topic + j` is the
/// `j`-th page of topic `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct PagePool {
    pub params: PoolParams,
    pub pages: Vec<Page>,
}

impl PagePool {
    pub fn len(&self) -> usize {
        self.pages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pages.is_empty()
    }

    pub fn topic_of(&self, page: PageId) -> usize {
        self.pages[page].topic
    }

    pub fn num_topics(&self) -> usize {
        self.params.num_topics
    }

    /// Page ids belonging to `topic`.
    pub fn topic_pages(&self, topic: usize) -> std::ops::Range<PageId> {
        let p = self.params.pages_per_topic;
        topic * p..(topic + 1) * p
    }

    pub fn first_page(&self, topic: usize) -> PageId {
        topic * self.params.pages_per_topic
    }

    /// Text on `topic` with the pool's topic-word proportion, e.g. for a
    /// brand profile.
    pub fn synthesize_text<R: Rng>(&self, topic: usize, length: usize, rng: &mut R) -> String {
        synthesize(&self.params, topic, length, rng)
    }

    /// Seeded brand profile on `topic`.
    pub fn brand_text(&self, topic: usize, length: usize, seed: u64) -> String {
        self.synthesize_text(topic, length, &mut ChaCha8Rng::seed_from_u64(seed))
    }
}

fn topic_word(topic: usize, j: usize) -> String {
    format!("t{topic}w{j}")
}

fn shared_word(j: usize) -> String {
    format!("common{j}")
}

fn synthesize<R: Rng>(params: &PoolParams, topic: usize, length: usize, rng: &mut R) -> String {
    let n_topic = (length as f64 * params.topic_word_fraction).round() as usize;
    let mut words: Vec<String> = (0..length)
        .map(|i| {
            if i < n_topic {
                topic_word(topic, rng.gen_range(0..params.vocab_per_topic))
            } else {
                shared_word(rng.gen_range(0..params.shared_vocab))
            }
        })
        .collect();
    words.shuffle(rng);
    words.join(" ")
}

/// Builds the page pool: disjoint topic vocabularies over a shared background
/// vocabulary, with links drawn independently per ordered page pair.
pub fn generate_topic_pool(params: PoolParams, seed: u64) -> Result<PagePool> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let per = params.pages_per_topic;
    let total = params.page_count();
    let mut pages: Vec<Page> = (0..total)
        .map(|id| Page {
            page_id: id,
            topic: id / per,
            text: synthesize(&params, id / per, params.doc_length, &mut rng),
            out_links: Vec::new(),
        })
        .collect();
    for page in &mut pages {
        let start = page.topic * per;
        let mut links = Vec::new();
        // pages before the topic block, the block itself, pages after
        bernoulli_hits(start, params.inter_topic_link_prob, &mut rng, |i| links.push(i));
        bernoulli_hits(per - 1, params.intra_topic_link_prob, &mut rng, |i| {
            let j = start + i;
            links.push(if j >= page.page_id { j + 1 } else { j });
        });
        let after = start + per;
        bernoulli_hits(total - after, params.inter_topic_link_prob, &mut rng, |i| {
            links.push(after + i)
        });
        page.out_links = links;
    }
    Ok(PagePool { params, pages })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::tokenize;

    fn small(intra: f64, inter: f64) -> PoolParams {
        PoolParams {
            num_topics: 3,
            pages_per_topic: 6,
            vocab_per_topic: 5,
            shared_vocab: 4,
            doc_length: 10,
            topic_word_fraction: 0.5,
            intra_topic_link_prob: intra,
            inter_topic_link_prob: inter,
        }
    }

    #[test]
    fn cliques_without_cross_links() {
        let pool = generate_topic_pool(small(1.0, 0.0), 1).unwrap();
        for page in &pool.pages {
            let expected: Vec<PageId> =
                pool.topic_pages(page.topic).filter(|&p| p != page.page_id).collect();
            assert_eq!(page.out_links, expected);
        }
    }

    #[test]
    fn single_topic() {
        let params = PoolParams { num_topics: 1, ..small(0.5, 0.7) };
        let pool = generate_topic_pool(params, 3).unwrap();
        assert!(pool.pages.iter().all(|p| p.topic == 0));
        assert_eq!(pool.len(), 6);
    }

    #[test]
    fn links_are_valid_and_text_non_empty() {
        let pool = generate_topic_pool(small(0.4, 0.2), 9).unwrap();
        for page in &pool.pages {
            assert!(!page.text.is_empty());
            assert!(page.out_links.iter().all(|&l| l < pool.len() && l != page.page_id));
            assert!(page.out_links.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn topic_word_proportion_is_fixed() {
        let pool = generate_topic_pool(small(0.0, 0.0), 4).unwrap();
        for page in &pool.pages {
            let toks = tokenize(&page.text);
            assert_eq!(toks.len(), 10);
            let prefix = format!("t{}w", page.topic);
            assert_eq!(toks.iter().filter(|t| t.starts_with(&prefix)).count(), 5);
        }
    }

    #[test]
    fn deterministic() {
        let a = generate_topic_pool(small(0.3, 0.1), 5).unwrap();
        let b = generate_topic_pool(small(0.3, 0.1), 5).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, generate_topic_pool(small(0.3, 0.1), 6).unwrap());
    }

    #[test]
    fn invalid_parameters() {
        assert!(generate_topic_pool(PoolParams { num_topics: 0, ..small(0.1, 0.1) }, 0).is_err());
        assert!(generate_topic_pool(small(1.1, 0.1), 0).is_err());
        assert!(generate_topic_pool(small(0.1, -0.1), 0).is_err());
        let bad_frac = PoolParams { topic_word_fraction: 2.0, ..small(0.1, 0.1) };
        assert!(generate_topic_pool(bad_frac, 0).is_err());
    }

    #[test]
    fn full_preset_has_twenty_topics() {
        let p = PoolParams::full_scale();
        assert_eq!(p.num_topics, 20);
        assert!(p.page_count() >= 90_908);
        p.validate().unwrap();
    }
}
