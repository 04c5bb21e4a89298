//! Profile documents and corpus-wide document-frequency statistics.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::fs;
use std::io::BufRead;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::graph::NodeId;

/// Identifier of a profile document: a network node or the brand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DocId {
    Node(NodeId),
    Brand,
}

impl fmt::Display for DocId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DocId::Node(id) => write!(f, "{id}"),
            DocId::Brand => f.write_str("brand"),
        }
    }
}

/// Lower-casing tokenizer that splits on every non-alphanumeric character.
#[derive(Debug, Clone, Default)]
pub struct Tokenizer {
    stop_words: HashSet<String>,
}

impl Tokenizer {
    pub fn new() -> Self {
        Self::default()
    }

    /// Stop words are normalized with the same rule as document text.
    pub fn with_stop_words<I, S>(mut self, words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        for w in words {
            self.stop_words.extend(tokenize(w.as_ref()));
        }
        self
    }

    pub fn stop_words(&self) -> &HashSet<String> {
        &self.stop_words
    }

    pub fn tokenize(&self, raw: &str) -> Vec<String> {
        let mut tokens = tokenize(raw);
        if !self.stop_words.is_empty() {
            tokens.retain(|t| !self.stop_words.contains(t));
        }
        tokens
    }
}

/// Splits `raw` into lower-case alphanumeric tokens. No stemming.
///
/// Lower-casing happens before splitting because some characters lower-case
/// into sequences that contain combining marks.
pub fn tokenize(raw: &str) -> Vec<String> {
    raw.to_lowercase()
        .split(|c: char| !c.is_alphanumeric())
        .filter(|s| !s.is_empty())
        .map(str::to_owned)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub doc_id: DocId,
    pub tokens: Vec<String>,
}

impl Document {
    pub fn token_count(&self) -> usize {
        self.tokens.len()
    }

    /// Empty documents stay in the corpus and vectorize to zero.
    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Number of occurrences of `word`.
    pub fn occurrences(&self, word: &str) -> usize {
        self.tokens.iter().filter(|t| *t == word).count()
    }
}

/// Interned term id into [`Corpus::vocabulary`].
pub type TermId = u32;

/// All user profiles plus the brand, with a shared vocabulary.
#[derive(Debug, Clone)]
pub struct Corpus {
    documents: Vec<Document>,
    index: HashMap<DocId, usize>,
    vocabulary: Vec<String>,
    term_ids: HashMap<String, TermId>,
    doc_freq: Vec<u32>,
    // Per document, (term, occurrences) sorted by term id.
    term_counts: Vec<Vec<(TermId, u32)>>,
}

impl Corpus {
    /// Tokenizes every profile and the brand text; the brand is stored under
    /// [`DocId::Brand`].
    pub fn build<I, S>(profiles: I, brand: &str, tokenizer: &Tokenizer) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, S)>,
        S: AsRef<str> + Send + Sync,
    {
        let raw: Vec<(NodeId, S)> = profiles.into_iter().collect();
        if raw.is_empty() {
            return Err(Error::NoProfiles);
        }
        let mut index = HashMap::with_capacity(raw.len() + 1);
        for (pos, (id, _)) in raw.iter().enumerate() {
            if index.insert(DocId::Node(*id), pos).is_some() {
                return Err(Error::DuplicateDocument(DocId::Node(*id)));
            }
        }
        index.insert(DocId::Brand, raw.len());

        let mut documents: Vec<Document> = raw
            .par_iter()
            .map(|(id, text)| Document {
                doc_id: DocId::Node(*id),
                tokens: tokenizer.tokenize(text.as_ref()),
            })
            .collect();
        documents.push(Document { doc_id: DocId::Brand, tokens: tokenizer.tokenize(brand) });

        let mut vocabulary = Vec::new();
        let mut term_ids: HashMap<String, TermId> = HashMap::new();
        let mut doc_freq: Vec<u32> = Vec::new();
        let mut term_counts = Vec::with_capacity(documents.len());
        let mut local: HashMap<TermId, u32> = HashMap::new();
        for doc in &documents {
            local.clear();
            for tok in &doc.tokens {
                let id = match term_ids.get(tok.as_str()) {
                    Some(&id) => id,
                    None => {
                        let id = vocabulary.len() as TermId;
                        vocabulary.push(tok.clone());
                        term_ids.insert(tok.clone(), id);
                        doc_freq.push(0);
                        id
                    }
                };
                *local.entry(id).or_insert(0) += 1;
            }
            let mut counts: Vec<(TermId, u32)> = local.iter().map(|(&t, &c)| (t, c)).collect();
            counts.sort_unstable_by_key(|&(t, _)| t);
            for &(t, _) in &counts {
                doc_freq[t as usize] += 1;
            }
            term_counts.push(counts);
        }

        Ok(Self { documents, index, vocabulary, term_ids, doc_freq, term_counts })
    }

    /// Number of documents, brand included.
    pub fn m(&self) -> usize {
        self.documents.len()
    }

    pub fn documents(&self) -> &[Document] {
        &self.documents
    }

    pub fn document(&self, id: DocId) -> Result<&Document> {
        self.position(id).map(|p| &self.documents[p])
    }

    pub fn brand(&self) -> &Document {
        self.documents.last().expect("brand document always present")
    }

    pub fn contains(&self, id: DocId) -> bool {
        self.index.contains_key(&id)
    }

    pub(crate) fn position(&self, id: DocId) -> Result<usize> {
        self.index.get(&id).copied().ok_or(Error::UnknownDocument(id))
    }

    /// Ids of documents that have no tokens.
    pub fn empty_documents(&self) -> Vec<DocId> {
        self.documents.iter().filter(|d| d.is_empty()).map(|d| d.doc_id).collect()
    }

    pub fn vocabulary(&self) -> &[String] {
        &self.vocabulary
    }

    pub fn term_id(&self, word: &str) -> Option<TermId> {
        self.term_ids.get(word).copied()
    }

    pub fn word(&self, term: TermId) -> &str {
        &self.vocabulary[term as usize]
    }

    /// Number of documents containing `word` (0 when unseen).
    pub fn doc_freq(&self, word: &str) -> usize {
        self.term_id(word).map_or(0, |t| self.doc_freq[t as usize] as usize)
    }

    pub(crate) fn doc_freq_by_id(&self, term: TermId) -> usize {
        self.doc_freq[term as usize] as usize
    }

    /// Document frequencies keyed by word, in lexical order.
    pub fn doc_freq_map(&self) -> BTreeMap<&str, usize> {
        self.vocabulary
            .iter()
            .zip(&self.doc_freq)
            .map(|(w, &h)| (w.as_str(), h as usize))
            .collect()
    }

    pub(crate) fn term_counts_at(&self, pos: usize) -> &[(TermId, u32)] {
        &self.term_counts[pos]
    }
}

/// Convenience wrapper around [`Corpus::build`] with the default tokenizer.
pub fn build_corpus<I, S>(profiles: I, brand: &str) -> Result<Corpus>
where
    I: IntoIterator<Item = (NodeId, S)>,
    S: AsRef<str> + Send + Sync,
{
    Corpus::build(profiles, brand, &Tokenizer::new())
}

#[derive(Deserialize)]
struct ProfileLine {
    id: NodeId,
    text: String,
}

/// Parses JSON-lines profiles (`{"id": 1, "text": "..."}`); blank lines are
/// skipped.
pub fn read_profiles_jsonl<R: BufRead>(reader: R) -> Result<Vec<(NodeId, String)>> {
    let mut out = Vec::new();
    for (n, line) in reader.split(b'\n').enumerate() {
        let line_no = n + 1;
        let bytes = line.map_err(|e| Error::Parse { line: line_no, message: e.to_string() })?;
        let text = std::str::from_utf8(&bytes)
            .map_err(|_| Error::Parse { line: line_no, message: "invalid UTF-8".into() })?;
        let text = text.trim();
        if text.is_empty() {
            continue;
        }
        let rec: ProfileLine = serde_json::from_str(text)
            .map_err(|e| Error::Parse { line: line_no, message: e.to_string() })?;
        out.push((rec.id, rec.text));
    }
    Ok(out)
}

/// Reads a strictly UTF-8 text file.
pub fn read_utf8_file(path: &Path) -> Result<String> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    String::from_utf8(bytes).map_err(|_| Error::Encoding { path: path.to_path_buf() })
}

/// Loads profiles from a JSON-lines file or a directory of `<id>.txt` files.
/// Directory entries are returned in ascending id order.
pub fn load_profiles(path: &Path) -> Result<Vec<(NodeId, String)>> {
    if path.is_dir() {
        let mut files: Vec<(NodeId, PathBuf)> = Vec::new();
        let entries = fs::read_dir(path).map_err(|e| Error::io(path, e))?;
        for entry in entries {
            let entry = entry.map_err(|e| Error::io(path, e))?;
            let p = entry.path();
            if p.extension().and_then(|e| e.to_str()) != Some("txt") {
                continue;
            }
            let Some(id) = p.file_stem().and_then(|s| s.to_str()).and_then(|s| s.parse().ok())
            else {
                continue;
            };
            files.push((id, p));
        }
        files.sort_by_key(|(id, _)| *id);
        files.into_iter().map(|(id, p)| Ok((id, read_utf8_file(&p)?))).collect()
    } else {
        let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
        read_profiles_jsonl(std::io::BufReader::new(file)).map_err(|e| match e {
            Error::Parse { line, message } => Error::Parse {
                line,
                message: format!("{}: {message}", path.display()),
            },
            other => other,
        })
    }
}

/// One stop word per line; blank lines ignored.
pub fn load_stop_words(path: &Path) -> Result<Vec<String>> {
    Ok(read_utf8_file(path)?
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(str::to_owned)
        .collect())
}
