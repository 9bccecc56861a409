use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{file}:{line}: {kind}")]
    Validation {
        file: String,
        line: usize,
        kind: ValidationError,
    },

    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("unknown facet value `{0}`")]
    UnknownValue(String),

    #[error("duplicate facet value `{0}` in selection")]
    DuplicateSelection(String),

    #[error("unknown session `{0}`")]
    UnknownSession(String),

    #[error("unknown document `{0}`")]
    UnknownDocument(String),

    #[error("invalid sentence reference {doc_id}:{sent_index}")]
    BadSentenceRef { doc_id: String, sent_index: usize },

    #[error("{count} mention surface(s) do not match their spans (first: {first})")]
    SurfaceMismatch { count: usize, first: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("index format error: {0}")]
    Index(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn at(file: impl Into<String>, line: usize, kind: ValidationError) -> Self {
        Error::Validation {
            file: file.into(),
            line,
            kind,
        }
    }

    /// The validation defect, if this error is one.
    pub fn validation_kind(&self) -> Option<&ValidationError> {
        match self {
            Error::Validation { kind, .. } => Some(kind),
            _ => None,
        }
    }
}

/// Defects found while loading corpus or annotation files.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ValidationError {
    #[error("malformed record: {0}")]
    Malformed(String),

    #[error("duplicate document id `{0}`")]
    DuplicateDocument(String),

    #[error("empty document id")]
    EmptyDocumentId,

    #[error("sentence {sent_index} of `{doc_id}` has no tokens")]
    EmptySentence { doc_id: String, sent_index: usize },

    #[error("sentence {sent_index} of `{doc_id}`: token text does not reproduce sentence text")]
    TextMismatch { doc_id: String, sent_index: usize },

    #[error("mention `{mention_id}` references unknown document `{doc_id}`")]
    UnknownDocument { mention_id: String, doc_id: String },

    #[error("mention `{mention_id}` has an out-of-range span")]
    SpanOutOfRange { mention_id: String },

    #[error("duplicate mention id `{0}`")]
    DuplicateMention(String),

    #[error("reference to undefined mention `{0}`")]
    UnknownMention(String),

    #[error("mention `{mention_id}` has kind {found}, expected {expected}")]
    WrongMentionKind {
        mention_id: String,
        expected: &'static str,
        found: &'static str,
    },

    #[error("score out of range: {0}")]
    ScoreOutOfRange(f64),

    #[error("pair score links mention `{0}` to itself")]
    SelfPair(String),

    #[error("duplicate score for pair ({0}, {1})")]
    DuplicatePair(String, String),

    #[error("cluster `{0}` has no mentions")]
    EmptyCluster(String),

    #[error("within-document cluster crosses documents: `{cluster_id}` spans `{first}` and `{second}`")]
    CrossDocumentCluster {
        cluster_id: String,
        first: String,
        second: String,
    },
}
