use std::path::PathBuf;

use crate::corpus::DocId;
use crate::graph::NodeId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("duplicate document id {0}")]
    DuplicateDocument(DocId),

    #[error("corpus needs at least one user profile")]
    NoProfiles,

    #[error("document {0} is not part of the corpus")]
    UnknownDocument(DocId),

    #[error("term frequency undefined for empty document {0}")]
    EmptyDocument(DocId),

    #[error("word {0:?} does not occur in the corpus")]
    UnseenWord(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{path}: input is not valid UTF-8")]
    Encoding { path: PathBuf },

    #[error("unknown node {0}")]
    UnknownNode(NodeId),

    #[error("affinity table is missing {count} graph node(s), first: {first:?}")]
    MissingAffinities { count: usize, first: Vec<NodeId> },

    #[error("value {value} for {what} is outside [0, 1]")]
    OutOfUnitRange { what: &'static str, value: String },

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{0}")]
    Csv(#[from] csv::Error),

    #[error("{0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name, reason: reason.into() }
    }
}
