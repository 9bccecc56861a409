//! Summaries of a selection's sentence-set.
//!
//! Input sentences are ordered, cut to a token budget, and handed to a
//! pluggable abstractive backend. Without a backend, or when it fails, a
//! deterministic extractive summary is produced instead.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{Corpus, SentenceRef};
use crate::error::Result;
use crate::explore::{intersect, HistoryEntry, Selection, SentenceSet};
use crate::index::TopicIndex;

mod cache;

pub use cache::{SummaryCache, SummaryKey};

pub const DEFAULT_TOKEN_BUDGET: usize = 1024;
pub const DEFAULT_OUTPUT_TOKENS: usize = 100;
pub const DEFAULT_CACHE_CAPACITY: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum BackendKind {
    External,
    Fallback,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SummaryStatus {
    Generated,
    /// The selection's sentence-set is empty; nothing was summarized.
    EmptyResult,
}

/// How budgeted input sentences are ordered.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InputOrder {
    /// By position within the source document, then by document id, so that
    /// early sentences of many documents survive truncation.
    #[default]
    Position,
    /// By document id, then position.
    Document,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SummarySettings {
    /// Whitespace tokens of input text sent to any backend.
    pub token_budget: usize,
    /// Whitespace tokens of extractive output.
    pub output_tokens: usize,
    pub input_order: InputOrder,
    pub cache_capacity: usize,
}

impl Default for SummarySettings {
    fn default() -> Self {
        Self {
            token_budget: DEFAULT_TOKEN_BUDGET,
            output_tokens: DEFAULT_OUTPUT_TOKENS,
            input_order: InputOrder::Position,
            cache_capacity: DEFAULT_CACHE_CAPACITY,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub text: String,
    pub sentences: Vec<String>,
    /// Input sentences after budgeting, in input order.
    pub source_refs: Vec<SentenceRef>,
    pub truncated: bool,
    pub backend: BackendKind,
    pub repeated_flags: Vec<bool>,
    pub status: SummaryStatus,
}

impl Summary {
    pub fn empty_result() -> Self {
        Self {
            text: String::new(),
            sentences: Vec::new(),
            source_refs: Vec::new(),
            truncated: false,
            backend: BackendKind::Fallback,
            repeated_flags: Vec::new(),
            status: SummaryStatus::EmptyResult,
        }
    }

    fn from_sentences(sentences: Vec<String>, source_refs: Vec<SentenceRef>, truncated: bool, backend: BackendKind) -> Self {
        Self {
            text: sentences.join(" "),
            repeated_flags: vec![false; sentences.len()],
            sentences,
            source_refs,
            truncated,
            backend,
            status: SummaryStatus::Generated,
        }
    }
}

#[derive(Debug, Error)]
pub enum BackendError {
    #[error("summarizer unavailable: {0}")]
    Unavailable(String),
    #[error("summarizer timed out")]
    Timeout,
    #[error("bad summarizer response: {0}")]
    BadResponse(String),
}

/// An abstractive summarizer reached over some transport.
pub trait SummaryBackend: Send + Sync {
    /// Stable identity, part of the cache key.
    fn id(&self) -> String;

    fn summarize(&self, text: &str, max_tokens: usize) -> std::result::Result<String, BackendError>;
}

fn order_key(r: &SentenceRef, order: InputOrder) -> (usize, &[u8], usize) {
    match order {
        InputOrder::Position => (r.sent_index, r.doc_id.as_bytes(), 0),
        InputOrder::Document => (0, r.doc_id.as_bytes(), r.sent_index),
    }
}

/// Orders the sentences and keeps the longest prefix whose whitespace token
/// count fits `token_budget`. Returns the kept prefix and whether anything
/// was dropped.
pub fn order_and_budget(
    corpus: &Corpus,
    refs: &[SentenceRef],
    token_budget: usize,
    order: InputOrder,
) -> (Vec<SentenceRef>, bool) {
    let mut ordered = refs.to_vec();
    ordered.sort_by(|a, b| order_key(a, order).cmp(&order_key(b, order)));
    let mut used = 0;
    let mut kept = 0;
    for r in &ordered {
        let tokens = corpus.sentence(r).map_or(0, |s| s.whitespace_tokens());
        if used + tokens > token_budget {
            break;
        }
        used += tokens;
        kept += 1;
    }
    let truncated = kept < ordered.len();
    ordered.truncate(kept);
    (ordered, truncated)
}

/// One budgeted input sentence with its relevance signal.
#[derive(Debug, Clone, PartialEq)]
pub struct InputSentence {
    pub sentence: SentenceRef,
    pub text: String,
    pub tokens: usize,
    /// Mentions of selected facet-values inside this sentence.
    pub selected_mentions: usize,
}

/// Picks sentences for an extractive summary; returns input positions in
/// ascending order.
///
/// Sentences rank by selected-mention count (more first), then token count
/// (fewer first), then position. They are taken greedily in rank order while
/// the output stays within `output_tokens`; the top sentence is always taken.
pub fn extractive_summary(inputs: &[InputSentence], output_tokens: usize) -> Vec<usize> {
    let mut ranked: Vec<usize> = (0..inputs.len()).collect();
    ranked.sort_by(|&a, &b| {
        inputs[b]
            .selected_mentions
            .cmp(&inputs[a].selected_mentions)
            .then(inputs[a].tokens.cmp(&inputs[b].tokens))
            .then(a.cmp(&b))
    });
    let mut picked = Vec::new();
    let mut used = 0;
    for i in ranked {
        let t = inputs[i].tokens;
        if picked.is_empty() || used + t <= output_tokens {
            used += t;
            picked.push(i);
        }
    }
    picked.sort_unstable();
    picked
}

/// Splits on `.`, `!` or `?` followed by whitespace.
pub fn split_sentences(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut start = 0;
    let mut chars = text.char_indices().peekable();
    while let Some((i, c)) = chars.next() {
        if matches!(c, '.' | '!' | '?') {
            if let Some(&(_, next)) = chars.peek() {
                if next.is_whitespace() {
                    let end = i + c.len_utf8();
                    let s = text[start..end].trim();
                    if !s.is_empty() {
                        out.push(s.to_string());
                    }
                    start = end;
                }
            }
        }
    }
    let rest = text[start..].trim();
    if !rest.is_empty() {
        out.push(rest.to_string());
    }
    out
}

fn normalize(s: &str) -> String {
    s.split_whitespace()
        .map(|w| w.to_lowercase())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Flags summary sentences already produced earlier in the session
/// (compared case-folded with whitespace collapsed).
pub fn mark_repeated<'a>(
    sentences: &[String],
    history: impl IntoIterator<Item = &'a HistoryEntry>,
) -> Vec<bool> {
    let seen: std::collections::HashSet<String> = history
        .into_iter()
        .flat_map(|e| e.summary_sentences.iter().map(|s| normalize(s)))
        .collect();
    sentences.iter().map(|s| seen.contains(&normalize(s))).collect()
}

/// Summarizes selections of a topic, with caching.
pub struct Summarizer {
    settings: SummarySettings,
    backend: Option<Arc<dyn SummaryBackend>>,
    cache: SummaryCache,
}

impl Summarizer {
    pub fn new(settings: SummarySettings, backend: Option<Arc<dyn SummaryBackend>>) -> Self {
        let cache = SummaryCache::new(settings.cache_capacity);
        Self {
            settings,
            backend,
            cache,
        }
    }

    pub fn fallback(settings: SummarySettings) -> Self {
        Self::new(settings, None)
    }

    pub fn settings(&self) -> &SummarySettings {
        &self.settings
    }

    pub fn cache(&self) -> &SummaryCache {
        &self.cache
    }

    fn backend_id(&self) -> String {
        self.backend
            .as_ref()
            .map_or_else(|| "fallback".to_string(), |b| b.id())
    }

    pub fn key(&self, selection: &Selection) -> SummaryKey {
        SummaryKey {
            topic_id: selection.topic_id.clone(),
            selection: selection.canonical(),
            backend: self.backend_id(),
            token_budget: self.settings.token_budget,
        }
    }

    /// Summary of the selection's intersection, served from cache when
    /// possible. Repeated-sentence flags are all false; see [`mark_repeated`].
    pub fn summarize(&self, index: &TopicIndex, selection: &Selection) -> Result<Summary> {
        let sentences = intersect(index, selection)?;
        Ok(self.summarize_set(index, selection, &sentences))
    }

    pub fn summarize_set(&self, index: &TopicIndex, selection: &Selection, sentences: &SentenceSet) -> Summary {
        if sentences.is_empty() {
            return Summary::empty_result();
        }
        self.cache
            .get_or_compute(self.key(selection), || self.compute(index, selection, sentences))
    }

    /// Budgeted input for a selection, in input order.
    pub fn inputs(&self, index: &TopicIndex, selection: &Selection, sentences: &SentenceSet) -> (Vec<InputSentence>, bool) {
        let corpus = index.corpus();
        let mut counts: HashMap<usize, usize> = HashMap::new();
        for id in &selection.selected {
            if let Ok(v) = index.value(id) {
                for m in &v.mentions {
                    if let Some(o) = corpus.ordinal(&m.sentence) {
                        *counts.entry(o).or_insert(0) += 1;
                    }
                }
            }
        }
        let (ordered, truncated) = order_and_budget(
            corpus,
            &sentences.refs(index),
            self.settings.token_budget,
            self.settings.input_order,
        );
        let inputs = ordered
            .into_iter()
            .map(|r| {
                let s = corpus.sentence(&r).expect("sentence-set refs resolve");
                InputSentence {
                    text: s.text.clone(),
                    tokens: s.whitespace_tokens(),
                    selected_mentions: corpus.ordinal(&r).and_then(|o| counts.get(&o)).copied().unwrap_or(0),
                    sentence: r,
                }
            })
            .collect();
        (inputs, truncated)
    }

    /// Returns the summary and whether it may be cached.
    fn compute(&self, index: &TopicIndex, selection: &Selection, sentences: &SentenceSet) -> (Summary, bool) {
        let (inputs, truncated) = self.inputs(index, selection, sentences);
        let refs: Vec<SentenceRef> = inputs.iter().map(|i| i.sentence.clone()).collect();
        if let Some(backend) = &self.backend {
            let text = inputs.iter().map(|i| i.text.as_str()).collect::<Vec<_>>().join(" ");
            match backend.summarize(&text, self.settings.token_budget) {
                Ok(out) => {
                    let summary = Summary::from_sentences(split_sentences(&out), refs, truncated, BackendKind::External);
                    return (summary, true);
                }
                // Degraded results are not cached so the backend is retried.
                Err(_) => return (self.extractive(&inputs, refs, truncated), false),
            }
        }
        (self.extractive(&inputs, refs, truncated), true)
    }

    fn extractive(&self, inputs: &[InputSentence], refs: Vec<SentenceRef>, truncated: bool) -> Summary {
        let picked = extractive_summary(inputs, self.settings.output_tokens);
        let sentences = picked.into_iter().map(|i| inputs[i].text.clone()).collect();
        Summary::from_sentences(sentences, refs, truncated, BackendKind::Fallback)
    }
}
