//! Documents, sentences, tokens and mentions.
//!
//! Tokenization arrives with the corpus and is never recomputed: every
//! annotation addresses tokens by index, so the engine must see exactly the
//! tokens the upstream taggers saw. Each token records whether whitespace
//! follows it, which makes sentence text reconstruction exact.

use std::collections::HashMap;
use std::fmt;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result, ValidationError};

/// Coarse (universal) part-of-speech tags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Pos {
    Adj,
    Adp,
    Adv,
    Aux,
    Cconj,
    Det,
    Intj,
    Noun,
    Num,
    Part,
    Pron,
    Propn,
    Punct,
    Sconj,
    Sym,
    Verb,
    X,
    Space,
}

/// Named-entity tag of a single token.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum NerTag {
    #[serde(alias = "PER")]
    Person,
    #[serde(alias = "LOC", alias = "GPE")]
    Location,
    #[serde(alias = "ORG")]
    Organization,
    #[serde(alias = "O", alias = "")]
    None,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub text: String,
    /// Whitespace follows this token in the source text.
    pub ws: bool,
    pub pos: Pos,
    pub ner: NerTag,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sentence {
    pub text: String,
    pub tokens: Vec<Token>,
}

impl Sentence {
    /// Source text of tokens `start..=end`, or `None` when out of range.
    pub fn span_text(&self, start: usize, end: usize) -> Option<String> {
        if start > end || end >= self.tokens.len() {
            return None;
        }
        let mut out = String::new();
        for (i, tok) in self.tokens[start..=end].iter().enumerate() {
            out.push_str(&tok.text);
            if tok.ws && start + i < end {
                out.push(' ');
            }
        }
        Some(out)
    }

    fn reconstruct(&self) -> String {
        let mut out = String::with_capacity(self.text.len());
        for tok in &self.tokens {
            out.push_str(&tok.text);
            if tok.ws {
                out.push(' ');
            }
        }
        out
    }

    /// Whitespace-delimited token count, the unit of summary budgets.
    pub fn whitespace_tokens(&self) -> usize {
        self.text.split_whitespace().count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub doc_id: String,
    #[serde(default)]
    pub title: String,
    pub sentences: Vec<Sentence>,
}

/// Address of one sentence. Orders by byte-wise `doc_id`, then index.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SentenceRef {
    pub doc_id: String,
    pub sent_index: usize,
}

impl SentenceRef {
    pub fn new(doc_id: impl Into<String>, sent_index: usize) -> Self {
        Self {
            doc_id: doc_id.into(),
            sent_index,
        }
    }

    /// Parses `doc_id:sent_index`. The last colon separates the index.
    pub fn parse(s: &str) -> Option<Self> {
        let (doc, idx) = s.rsplit_once(':')?;
        if doc.is_empty() {
            return None;
        }
        Some(Self::new(doc, idx.parse().ok()?))
    }
}

impl fmt::Display for SentenceRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.doc_id, self.sent_index)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum MentionKind {
    Event,
    Entity,
    Proposition,
}

impl MentionKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MentionKind::Event => "EVENT",
            MentionKind::Entity => "ENTITY",
            MentionKind::Proposition => "PROPOSITION",
        }
    }
}

/// A token span (inclusive on both ends) in one sentence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Mention {
    pub mention_id: String,
    pub sentence: SentenceRef,
    pub token_start: usize,
    pub token_end: usize,
    pub surface: String,
    pub kind: MentionKind,
}

/// Sorts documents by byte-wise `doc_id`, rejecting duplicate ids.
pub fn canonical_doc_order(mut docs: Vec<Document>) -> Result<Vec<Document>, ValidationError> {
    docs.sort_by(|a, b| a.doc_id.as_bytes().cmp(b.doc_id.as_bytes()));
    if let Some(w) = docs.windows(2).find(|w| w[0].doc_id == w[1].doc_id) {
        return Err(ValidationError::DuplicateDocument(w[0].doc_id.clone()));
    }
    Ok(docs)
}

/// An immutable, validated document set in canonical order.
#[derive(Debug, Clone, PartialEq)]
pub struct Corpus {
    documents: Vec<Document>,
    by_id: HashMap<String, usize>,
    /// Global ordinal of each document's first sentence, plus a final total.
    offsets: Vec<usize>,
}

impl Corpus {
    pub fn new(documents: Vec<Document>) -> Result<Self, ValidationError> {
        for doc in &documents {
            if doc.doc_id.is_empty() {
                return Err(ValidationError::EmptyDocumentId);
            }
            for (i, sent) in doc.sentences.iter().enumerate() {
                if sent.tokens.is_empty() {
                    return Err(ValidationError::EmptySentence {
                        doc_id: doc.doc_id.clone(),
                        sent_index: i,
                    });
                }
                if sent.reconstruct() != sent.text {
                    return Err(ValidationError::TextMismatch {
                        doc_id: doc.doc_id.clone(),
                        sent_index: i,
                    });
                }
            }
        }
        let documents = canonical_doc_order(documents)?;
        let by_id = documents
            .iter()
            .enumerate()
            .map(|(i, d)| (d.doc_id.clone(), i))
            .collect();
        let mut offsets = Vec::with_capacity(documents.len() + 1);
        let mut total = 0;
        for doc in &documents {
            offsets.push(total);
            total += doc.sentences.len();
        }
        offsets.push(total);
        Ok(Self {
            documents,
            by_id,
            offsets,
        })
    }

    pub fn documents(&self) -> &[Document] {
        &self.documents
    }

    pub fn document(&self, doc_id: &str) -> Option<&Document> {
        self.by_id.get(doc_id).map(|&i| &self.documents[i])
    }

    pub fn sentence(&self, r: &SentenceRef) -> Option<&Sentence> {
        self.document(&r.doc_id)?.sentences.get(r.sent_index)
    }

    pub fn sentence_count(&self) -> usize {
        *self.offsets.last().unwrap_or(&0)
    }

    /// Global position of a sentence in canonical order.
    pub fn ordinal(&self, r: &SentenceRef) -> Option<usize> {
        let &d = self.by_id.get(&r.doc_id)?;
        (r.sent_index < self.documents[d].sentences.len()).then(|| self.offsets[d] + r.sent_index)
    }

    pub fn sentence_ref(&self, ordinal: usize) -> SentenceRef {
        let d = self.offsets.partition_point(|&o| o <= ordinal) - 1;
        SentenceRef::new(&self.documents[d].doc_id, ordinal - self.offsets[d])
    }

    pub fn sentence_at(&self, ordinal: usize) -> &Sentence {
        let d = self.offsets.partition_point(|&o| o <= ordinal) - 1;
        &self.documents[d].sentences[ordinal - self.offsets[d]]
    }

    pub fn refs(&self) -> impl Iterator<Item = SentenceRef> + '_ {
        self.documents.iter().flat_map(|d| {
            (0..d.sentences.len()).map(move |i| SentenceRef::new(&d.doc_id, i))
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        let name = path.display().to_string();
        let mut docs = Vec::new();
        let mut lines = HashMap::new();
        for (i, line) in BufReader::new(file).lines().enumerate() {
            let line = line.map_err(|e| Error::io(path, e))?;
            if line.trim().is_empty() {
                continue;
            }
            let doc: Document = serde_json::from_str(&line)
                .map_err(|e| Error::at(&name, i + 1, ValidationError::Malformed(e.to_string())))?;
            if lines.insert(doc.doc_id.clone(), i + 1).is_some() {
                return Err(Error::at(
                    &name,
                    i + 1,
                    ValidationError::DuplicateDocument(doc.doc_id),
                ));
            }
            docs.push(doc);
        }
        Corpus::new(docs).map_err(|kind| {
            let line = match &kind {
                ValidationError::EmptySentence { doc_id, .. }
                | ValidationError::TextMismatch { doc_id, .. } => {
                    lines.get(doc_id).copied().unwrap_or(0)
                }
                _ => 0,
            };
            Error::at(&name, line, kind)
        })
    }

    /// Writes `documents.jsonl` in canonical order.
    pub fn write_jsonl<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for doc in &self.documents {
            serde_json::to_writer(&mut out, doc)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }
}

impl Serialize for Corpus {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.documents.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Corpus {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let docs = Vec::<Document>::deserialize(d)?;
        Corpus::new(docs).map_err(serde::de::Error::custom)
    }
}

/// Exact source text of a mention's span.
pub fn mention_surface(corpus: &Corpus, mention: &Mention) -> Result<String, ValidationError> {
    corpus
        .sentence(&mention.sentence)
        .and_then(|s| s.span_text(mention.token_start, mention.token_end))
        .ok_or_else(|| ValidationError::SpanOutOfRange {
            mention_id: mention.mention_id.clone(),
        })
}
