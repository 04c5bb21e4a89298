//! TF-IDF vectors and cosine affinity between user and brand profiles.
//!
//! Term frequency is `occurrences / document length` and inverse document
//! frequency is `ln(m / h)` with `m` the corpus size (all profiles plus the
//! brand) and `h` the number of documents containing the word. Vectors are
//! aligned on the corpus-wide vocabulary.

use std::collections::BTreeMap;
use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::corpus::{Corpus, DocId, Document, TermId};
use crate::error::{Error, Result};
use crate::graph::NodeId;
use crate::scalar::Real;
use crate::scoring::AffinityTable;

/// Sparse weight vector over corpus term ids. Zero weights are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseVector<T> {
    entries: Vec<(TermId, T)>,
    norm: T,
}

impl<T: Real> Default for SparseVector<T> {
    fn default() -> Self {
        Self { entries: Vec::new(), norm: T::zero() }
    }
}

impl<T: Real> SparseVector<T> {
    /// Builds a vector, summing repeated terms and dropping zero weights.
    pub fn from_entries<I: IntoIterator<Item = (TermId, T)>>(entries: I) -> Self {
        let mut raw: Vec<(TermId, T)> = entries.into_iter().collect();
        raw.sort_by_key(|&(t, _)| t);
        let mut merged: Vec<(TermId, T)> = Vec::with_capacity(raw.len());
        for (t, w) in raw {
            match merged.last_mut() {
                Some((lt, lw)) if *lt == t => *lw = *lw + w,
                _ => merged.push((t, w)),
            }
        }
        merged.retain(|&(_, w)| w != T::zero());
        let norm = merged.iter().fold(T::zero(), |acc, &(_, w)| acc + w * w).sqrt();
        Self { entries: merged, norm }
    }

    pub fn entries(&self) -> &[(TermId, T)] {
        &self.entries
    }

    pub fn get(&self, term: TermId) -> T {
        self.entries
            .binary_search_by_key(&term, |&(t, _)| t)
            .map_or(T::zero(), |i| self.entries[i].1)
    }

    /// Cached Euclidean norm.
    pub fn norm(&self) -> T {
        self.norm
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Dot product over the shared support, accumulated in term order.
    pub fn dot(&self, other: &Self) -> T {
        let (mut i, mut j) = (0, 0);
        let mut acc = T::zero();
        let (a, b) = (&self.entries, &other.entries);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    acc = acc + a[i].1 * b[j].1;
                    i += 1;
                    j += 1;
                }
            }
        }
        acc
    }

    pub fn scaled(&self, c: T) -> Self {
        Self::from_entries(self.entries.iter().map(|&(t, w)| (t, w * c)))
    }
}

/// `occurrences(word) / token_count`. Undefined for empty documents.
pub fn term_frequency<T: Real>(word: &str, doc: &Document) -> Result<T> {
    if doc.is_empty() {
        return Err(Error::EmptyDocument(doc.doc_id));
    }
    Ok(T::from_count(doc.occurrences(word)) / T::from_count(doc.token_count()))
}

/// `ln(m / h)`; errors for words absent from the corpus.
pub fn inverse_document_frequency<T: Real>(word: &str, corpus: &Corpus) -> Result<T> {
    match corpus.doc_freq(word) {
        0 => Err(Error::UnseenWord(word.to_owned())),
        h => Ok(idf(corpus.m(), h)),
    }
}

fn idf<T: Real>(m: usize, h: usize) -> T {
    (T::from_count(m) / T::from_count(h)).ln()
}

fn vector_at<T: Real>(corpus: &Corpus, pos: usize) -> SparseVector<T> {
    let doc = &corpus.documents()[pos];
    if doc.is_empty() {
        return SparseVector::default();
    }
    let m = corpus.m();
    let len = T::from_count(doc.token_count());
    SparseVector::from_entries(corpus.term_counts_at(pos).iter().filter_map(|&(t, c)| {
        let h = corpus.doc_freq_by_id(t);
        // Words present in every document carry no weight.
        (h < m).then(|| (t, T::from_count(c as usize) / len * idf::<T>(m, h)))
    }))
}

/// TF-IDF vector of the document `id`.
pub fn tfidf_vector<T: Real>(id: DocId, corpus: &Corpus) -> Result<SparseVector<T>> {
    corpus.position(id).map(|pos| vector_at(corpus, pos))
}

/// Cosine of the angle between two vectors; 0 when either has zero norm.
pub fn cosine_similarity<T: Real>(a: &SparseVector<T>, b: &SparseVector<T>) -> T {
    let denom = a.norm() * b.norm();
    if denom == T::zero() {
        return T::zero();
    }
    (a.dot(b) / denom).max(T::zero()).min(T::one())
}

/// Affinity of a user profile to the brand.
pub fn affinity<T: Real>(user: NodeId, corpus: &Corpus) -> Result<T> {
    let u = tfidf_vector::<T>(DocId::Node(user), corpus)?;
    let b = tfidf_vector::<T>(DocId::Brand, corpus)?;
    Ok(cosine_similarity(&u, &b))
}

/// TF-IDF vectors of every corpus document, computed once.
#[derive(Debug, Clone)]
pub struct TfIdfModel<'c, T> {
    corpus: &'c Corpus,
    vectors: Vec<SparseVector<T>>,
}

impl<'c, T: Real> TfIdfModel<'c, T> {
    pub fn fit(corpus: &'c Corpus) -> Self {
        let vectors = (0..corpus.m()).into_par_iter().map(|pos| vector_at(corpus, pos)).collect();
        Self { corpus, vectors }
    }

    pub fn corpus(&self) -> &'c Corpus {
        self.corpus
    }

    pub fn vector(&self, id: DocId) -> Result<&SparseVector<T>> {
        self.corpus.position(id).map(|p| &self.vectors[p])
    }

    pub fn brand_vector(&self) -> &SparseVector<T> {
        self.vectors.last().expect("brand vector")
    }

    pub fn affinity(&self, user: NodeId) -> Result<T> {
        Ok(cosine_similarity(self.vector(DocId::Node(user))?, self.brand_vector()))
    }

    /// Affinities for `nodes`. Nodes without a profile document get 0, the
    /// same value as an empty profile.
    pub fn affinity_table<I: IntoIterator<Item = NodeId>>(&self, nodes: I) -> AffinityTable<T> {
        let nodes: Vec<NodeId> = nodes.into_iter().collect();
        let brand = self.brand_vector();
        let values: Vec<(NodeId, T)> = nodes
            .par_iter()
            .map(|&n| {
                let a = self
                    .vector(DocId::Node(n))
                    .map_or(T::zero(), |v| cosine_similarity(v, brand));
                (n, a)
            })
            .collect();
        AffinityTable::new(values).expect("cosine values lie in [0, 1]")
    }

    /// Debug dump, one `{"id": .., "weights": {word: weight}}` line per
    /// document in corpus order.
    pub fn write_jsonl<W: Write>(&self, mut w: W) -> Result<()> {
        #[derive(Serialize)]
        #[serde(untagged)]
        enum Id {
            Node(NodeId),
            Brand(&'static str),
        }
        #[derive(Serialize)]
        struct Line<'a> {
            id: Id,
            weights: BTreeMap<&'a str, f64>,
        }
        for (doc, v) in self.corpus.documents().iter().zip(&self.vectors) {
            let id = match doc.doc_id {
                DocId::Node(n) => Id::Node(n),
                DocId::Brand => Id::Brand("brand"),
            };
            let weights =
                v.entries().iter().map(|&(t, x)| (self.corpus.word(t), x.to_f64_lossy())).collect();
            serde_json::to_writer(&mut w, &Line { id, weights })?;
            w.write_all(b"\n").map_err(|e| Error::io("<vector dump>", e))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::build_corpus;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn term_frequency_examples() {
        let doc = Document { doc_id: DocId::Node(1), tokens: vec!["a".into(), "b".into(), "a".into()] };
        assert!(close(term_frequency::<f64>("a", &doc).unwrap(), 2.0 / 3.0));
        assert_eq!(term_frequency::<f64>("z", &doc).unwrap(), 0.0);
        let single = Document { doc_id: DocId::Node(2), tokens: vec!["x".into()] };
        assert_eq!(term_frequency::<f64>("x", &single).unwrap(), 1.0);
        let empty = Document { doc_id: DocId::Node(3), tokens: vec![] };
        assert!(matches!(term_frequency::<f64>("x", &empty), Err(Error::EmptyDocument(_))));
    }

    #[test]
    fn idf_examples() {
        // m=3: "b" in all, "a" in one
        let c = build_corpus([(1, "a b"), (2, "b")], "b").unwrap();
        assert_eq!(inverse_document_frequency::<f64>("b", &c).unwrap(), 0.0);
        assert!(close(inverse_document_frequency::<f64>("a", &c).unwrap(), 1.0986122886681098));
        // m=4, h=2
        let c = build_corpus([(1, "q"), (2, "q"), (3, "r")], "s").unwrap();
        assert!(close(inverse_document_frequency::<f64>("q", &c).unwrap(), std::f64::consts::LN_2));
        assert!(matches!(
            inverse_document_frequency::<f64>("nope", &c),
            Err(Error::UnseenWord(_))
        ));
    }

    #[test]
    fn tfidf_worked_corpus() {
        // brand is d3
        let c = build_corpus([(1, "apple banana apple"), (2, "banana cherry")], "cherry cherry").unwrap();
        let v = tfidf_vector::<f64>(DocId::Node(1), &c).unwrap();
        let apple = c.term_id("apple").unwrap();
        let banana = c.term_id("banana").unwrap();
        assert_eq!(v.len(), 2);
        // frozen from an independent dense evaluation
        assert!(close(v.get(apple), 0.7324081924454064));
        assert!(close(v.get(banana), 0.13515503603605478));
    }

    #[test]
    fn degenerate_vectors() {
        let c = build_corpus([(1, ""), (2, "x")], "x").unwrap();
        let e = tfidf_vector::<f64>(DocId::Node(1), &c).unwrap();
        assert!(e.is_empty());
        assert_eq!(e.norm(), 0.0);
        let all = tfidf_vector::<f64>(DocId::Node(2), &c).unwrap();
        // "x" appears in 2 of 3 documents here, so it has weight; check the
        // all-documents case separately.
        assert_eq!(all.len(), 1);
        let c = build_corpus([(1, "x y"), (2, "y x")], "x y").unwrap();
        assert!(tfidf_vector::<f64>(DocId::Node(1), &c).unwrap().is_empty());
        assert!(matches!(tfidf_vector::<f64>(DocId::Node(9), &c), Err(Error::UnknownDocument(_))));
    }

    #[test]
    fn cosine_examples() {
        let v = SparseVector::from_entries([(0, 1.0f64), (1, 2.0)]);
        let w = SparseVector::from_entries([(0, 2.0f64), (1, 1.0)]);
        assert!(close(cosine_similarity(&v, &w), 0.8));
        assert!(close(cosine_similarity(&v, &v), 1.0));
        let d = SparseVector::from_entries([(5, 3.0f64)]);
        assert_eq!(cosine_similarity(&v, &d), 0.0);
        assert_eq!(cosine_similarity(&v, &SparseVector::default()), 0.0);
    }

    #[test]
    fn sparse_vector_drops_zeros() {
        let v = SparseVector::from_entries([(2, 0.0f64), (1, 1.5), (1, 0.5), (3, 0.0)]);
        assert_eq!(v.entries(), &[(1, 2.0)]);
        assert_eq!(v.norm(), 2.0);
    }

    #[test]
    fn affinity_examples() {
        let c = build_corpus([(1, "red car fast"), (2, "pasta sauce"), (3, "red car fast")], "red car fast")
            .unwrap();
        assert!(close(affinity::<f64>(1, &c).unwrap(), 1.0));
        assert_eq!(affinity::<f64>(2, &c).unwrap(), 0.0);
        assert!(matches!(affinity::<f64>(7, &c), Err(Error::UnknownDocument(_))));

        let model = TfIdfModel::<f64>::fit(&c);
        let table = model.affinity_table([1, 2, 3, 99]);
        assert_eq!(table.get(99), Some(0.0));
        assert!(close(table.get(1).unwrap(), 1.0));
    }

    #[test]
    fn f32_path_agrees() {
        let c = build_corpus([(1, "apple banana apple"), (2, "banana cherry")], "cherry banana").unwrap();
        let a64 = affinity::<f64>(1, &c).unwrap();
        let a32 = affinity::<f32>(1, &c).unwrap();
        assert!((a64 - a32 as f64).abs() < 1e-6);
    }

    #[test]
    fn jsonl_dump_is_sorted_and_labeled() {
        let c = build_corpus([(1, "b a")], "a c").unwrap();
        let model = TfIdfModel::<f64>::fit(&c);
        let mut out = Vec::new();
        model.write_jsonl(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[0].starts_with("{\"id\":1,\"weights\":{\"b\":"));
        assert!(lines[1].starts_with("{\"id\":\"brand\",\"weights\":{\"c\":"));
    }
}
