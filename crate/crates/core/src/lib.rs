//! Brand-audience targeting on social graphs.
//!
//! Users are matched to a brand through TF-IDF cosine affinity between their
//! profile texts. Each node's neighborhood adds a centrality term (the mean
//! neighbor affinity), and the blended utility ranks the top-k targets. The
//! [`evaluation`] module compares rankings with a random baseline and
//! [`datagen`] builds attributed networks whose neighbors share topics.
//!
//! Score types are generic: [`scalar::Score`] covers `f32`, `f64` and exact
//! rationals; text vectorization requires a float ([`scalar::Real`]). The
//! aliases below fix the common choices.
//!
//! ```
//! use adreach::*;
//!
//! let g = SocialGraph::from_edges([(1, 2), (1, 3), (2, 3), (3, 4)]);
//! let aff = AffinityTable64::new([(1, 0.9), (2, 0.4), (3, 0.7), (4, 0.1)])?;
//! let scores = score_all(&g, &aff, Alpha::new(0.5)?)?;
//! let top = rank_targets(&scores, Method::Utility, 2, Filter::None);
//! let reach = evaluate_selection(&g, &aff, &top.node_ids(), 0.6)?;
//! assert_eq!(top.node_ids(), vec![1, 2]);
//! assert_eq!(reach.total, reach.direct + reach.from_neighborhoods);
//! # Ok::<(), adreach::Error>(())
//! ```

pub mod corpus;
pub mod datagen;
pub mod dot;
pub mod error;
pub mod evaluation;
pub mod graph;
pub mod scalar;
pub mod scoring;
pub mod vectorizer;

pub use corpus::{build_corpus, tokenize, Corpus, DocId, Document, Tokenizer};
pub use error::{Error, Result};
pub use evaluation::{
    compare_methods, evaluate_selection, random_baseline, BaselineResult, EvalMethod, EvalMetrics,
    Report,
};
pub use graph::{load_edge_list, NodeId, SocialGraph};
pub use scoring::{
    centrality, rank_targets, score_all, utility, AffinityTable, Alpha, Filter, Method, Ranking,
    ScoreRecord,
};
pub use vectorizer::{
    affinity, cosine_similarity, inverse_document_frequency, term_frequency, tfidf_vector,
    SparseVector, TfIdfModel,
};

/// Exact rational scores.
pub type Rational = num_rational::Ratio<i64>;

pub type AffinityTable64 = AffinityTable<f64>;
pub type ScoreRecord64 = ScoreRecord<f64>;
pub type Ranking64 = Ranking<f64>;
pub type EvalMetrics64 = EvalMetrics<f64>;
pub type Report64 = Report<f64>;
pub type SparseVector64 = SparseVector<f64>;
pub type TfIdfModel64<'c> = TfIdfModel<'c, f64>;

pub type AffinityTable32 = AffinityTable<f32>;
pub type ScoreRecord32 = ScoreRecord<f32>;
pub type Ranking32 = Ranking<f32>;
pub type SparseVector32 = SparseVector<f32>;

pub type ExactAffinityTable = AffinityTable<Rational>;
pub type ExactScoreRecord = ScoreRecord<Rational>;
pub type ExactRanking = Ranking<Rational>;
