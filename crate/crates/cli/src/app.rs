//! Service operations over loaded topics, independent of the transport.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;
use std::time::Duration;

use facetnav_core::explore::session::now_ms;
use facetnav_core::index::DOCUMENTS_FILE;
use facetnav_core::summarize::mark_repeated;
use facetnav_core::{
    intersect, mention_forms, restricted_view, ClusteringConfig, EntityCategory, FacetKind, FacetView,
    HistoryEntry, MentionForm, Selection, SentenceRef, SentenceSet, SessionStore, Summarizer, Summary,
    SummaryBackend, TopicIndex,
};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::backend::HttpSummarizer;
use crate::config::SummarizerConfig;
use crate::error::CliError;

/// Extension of prebuilt index files picked up from a data directory.
pub const INDEX_EXTENSION: &str = "idx";

#[derive(Debug, Error, PartialEq)]
pub enum ApiError {
    #[error("{0}")]
    NotFound(String),
    #[error("{0}")]
    BadRequest(String),
    #[error("{0}")]
    Internal(String),
}

impl ApiError {
    pub fn status(&self) -> u16 {
        match self {
            ApiError::NotFound(_) => 404,
            ApiError::BadRequest(_) => 400,
            ApiError::Internal(_) => 500,
        }
    }
}

impl From<facetnav_core::Error> for ApiError {
    fn from(e: facetnav_core::Error) -> Self {
        use facetnav_core::Error as E;
        match e {
            E::UnknownValue(_) | E::UnknownSession(_) | E::UnknownDocument(_) => ApiError::NotFound(e.to_string()),
            E::DuplicateSelection(_) | E::BadSentenceRef { .. } => ApiError::BadRequest(e.to_string()),
            other => ApiError::Internal(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FacetCounts {
    pub concepts: usize,
    pub entities: usize,
    pub statements: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicDescriptor {
    pub topic_id: String,
    pub display_name: String,
    pub document_count: usize,
    pub sentence_count: usize,
    pub facet_counts: FacetCounts,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QueryRequest {
    #[serde(default)]
    pub session: Option<String>,
    pub selected: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectedValue {
    pub value_id: String,
    pub label: String,
    pub facet: FacetKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryResponse {
    pub session: String,
    pub selected: Vec<SelectedValue>,
    pub facets: FacetView,
    /// Absent for the empty selection.
    pub summary: Option<Summary>,
    pub sentence_count: usize,
    pub sentence_refs: Vec<SentenceRef>,
    pub truncated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MentionEntry {
    pub mention_id: String,
    pub surface: String,
    pub sentence: SentenceRef,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MentionsResponse {
    pub value_id: String,
    pub label: String,
    pub facet: FacetKind,
    pub category: Option<EntityCategory>,
    pub frequency: usize,
    pub forms: Vec<MentionForm>,
    pub mentions: Vec<MentionEntry>,
}

/// A selected value's mention inside a sentence. Offsets count Unicode
/// scalar values; `char_end` is exclusive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Highlight {
    pub value_id: String,
    pub token_start: usize,
    pub token_end: usize,
    pub char_start: usize,
    pub char_end: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarkedSentence {
    pub sent_index: usize,
    pub text: String,
    pub flagged: bool,
    pub highlights: Vec<Highlight>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SentenceGroup {
    pub doc_id: String,
    pub title: String,
    pub sentences: Vec<MarkedSentence>,
}

/// Where a read-only endpoint takes the selection for mention markup from.
#[derive(Debug, Clone, Default)]
pub struct SelectionSource {
    pub selected: Option<Vec<String>>,
    pub session: Option<String>,
}

pub struct App {
    topics: BTreeMap<String, TopicIndex>,
    summarizer: Summarizer,
    sessions: SessionStore,
}

pub fn summarizer_from_config(config: &SummarizerConfig) -> Summarizer {
    let backend = config.url.as_deref().map(|url| {
        Arc::new(HttpSummarizer::new(url, Duration::from_millis(config.timeout_ms))) as Arc<dyn SummaryBackend>
    });
    Summarizer::new(config.settings.clone(), backend)
}

/// Loads every `*.idx` file and every topic directory (one holding
/// `documents.jsonl`) directly under `dir`.
pub fn load_topics(dir: &Path, clustering: &ClusteringConfig) -> Result<Vec<TopicIndex>, CliError> {
    let mut paths: Vec<_> = std::fs::read_dir(dir)?
        .map(|e| e.map(|e| e.path()))
        .collect::<Result<_, _>>()?;
    paths.sort();
    let mut out = Vec::new();
    for path in paths {
        if path.is_dir() && path.join(DOCUMENTS_FILE).is_file() {
            out.push(TopicIndex::build_dir(&path, clustering, false)?);
        } else if path.is_file() && path.extension().is_some_and(|e| e == INDEX_EXTENSION) {
            out.push(TopicIndex::load(&path)?);
        }
    }
    Ok(out)
}

impl App {
    pub fn new(topics: Vec<TopicIndex>, summarizer: Summarizer) -> Result<Self, CliError> {
        let mut by_id = BTreeMap::new();
        for t in topics {
            let id = t.topic_id().to_string();
            if by_id.insert(id.clone(), t).is_some() {
                return Err(CliError::Config(format!("topic `{id}` loaded twice")));
            }
        }
        Ok(Self {
            topics: by_id,
            summarizer,
            sessions: SessionStore::new(),
        })
    }

    pub fn summarizer(&self) -> &Summarizer {
        &self.summarizer
    }

    pub fn topic(&self, topic_id: &str) -> Result<&TopicIndex, ApiError> {
        self.topics
            .get(topic_id)
            .ok_or_else(|| ApiError::NotFound(format!("unknown topic `{topic_id}`")))
    }

    /// Topics ordered by id.
    pub fn topics(&self) -> Vec<TopicDescriptor> {
        self.topics
            .values()
            .map(|t| TopicDescriptor {
                topic_id: t.topic_id().to_string(),
                display_name: t.display_name().to_string(),
                document_count: t.corpus().documents().len(),
                sentence_count: t.corpus().sentence_count(),
                facet_counts: FacetCounts {
                    concepts: t.facets().concepts.len(),
                    entities: t.facets().entities.len(),
                    statements: t.facets().statements.len(),
                },
            })
            .collect()
    }

    /// Refreshed facets and summary for a selection, recorded in the
    /// session's history. The session is created when absent or unknown.
    pub fn query(&self, topic_id: &str, request: QueryRequest) -> Result<QueryResponse, ApiError> {
        let index = self.topic(topic_id)?;
        let selection = Selection::new(index, request.selected)?;
        let sentences = intersect(index, &selection)?;
        let facets = restricted_view(index, &selection, &sentences);
        let mut summary =
            (!selection.is_empty()).then(|| self.summarizer.summarize_set(index, &selection, &sentences));
        let selected = selected_values(index, &selection)?;
        let sentence_refs = sentences.refs(index);

        let session = self.sessions.get_or_create(request.session.as_deref());
        let mut session = session.lock().expect("session poisoned");
        if let Some(summary) = &mut summary {
            summary.repeated_flags = mark_repeated(&summary.sentences, session.history());
            session.record(HistoryEntry {
                selection: selection.clone(),
                labels: selected.iter().map(|v| v.label.clone()).collect(),
                summary_text: summary.text.clone(),
                summary_sentences: summary.sentences.clone(),
                sentence_refs: sentence_refs.clone(),
                timestamp_ms: now_ms(),
            });
        }
        session.set_selection(selection);

        Ok(QueryResponse {
            session: session.token.as_str().to_string(),
            selected,
            facets,
            truncated: summary.as_ref().is_some_and(|s| s.truncated),
            summary,
            sentence_count: sentences.len(),
            sentence_refs,
        })
    }

    pub fn mentions(&self, topic_id: &str, value_id: &str) -> Result<MentionsResponse, ApiError> {
        let index = self.topic(topic_id)?;
        let value = index.value(value_id)?;
        Ok(MentionsResponse {
            value_id: value.value_id.clone(),
            label: value.label.clone(),
            facet: value.facet,
            category: value.category,
            frequency: value.frequency(),
            forms: mention_forms(index, value_id)?,
            mentions: value
                .mentions
                .iter()
                .map(|m| MentionEntry {
                    mention_id: m.mention_id.clone(),
                    surface: m.surface.clone(),
                    sentence: m.sentence.clone(),
                })
                .collect(),
        })
    }

    fn selection_for(&self, index: &TopicIndex, source: SelectionSource) -> Result<Selection, ApiError> {
        if let Some(ids) = source.selected {
            return Ok(Selection::new(index, ids)?);
        }
        if let Some(token) = source.session {
            let session = self.sessions.get(&token)?;
            let session = session.lock().expect("session poisoned");
            return Ok(session
                .selection(index.topic_id())
                .cloned()
                .unwrap_or_else(|| Selection::empty(index.topic_id())));
        }
        Ok(Selection::empty(index.topic_id()))
    }

    /// Requested sentences grouped by document in canonical order, with the
    /// selected values' mentions marked.
    pub fn sentences(
        &self,
        topic_id: &str,
        refs: &[SentenceRef],
        source: SelectionSource,
    ) -> Result<Vec<SentenceGroup>, ApiError> {
        let index = self.topic(topic_id)?;
        let selection = self.selection_for(index, source)?;
        let mut ordinals = refs
            .iter()
            .map(|r| {
                index.corpus().ordinal(r).ok_or_else(|| {
                    ApiError::BadRequest(format!("invalid sentence reference {r}"))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        ordinals.sort_unstable();
        ordinals.dedup();

        let mut groups: Vec<SentenceGroup> = Vec::new();
        for o in ordinals {
            let r = index.corpus().sentence_ref(o);
            let marked = mark_sentence(index, &selection, &r, true);
            match groups.last_mut() {
                Some(g) if g.doc_id == r.doc_id => g.sentences.push(marked),
                _ => groups.push(SentenceGroup {
                    title: index.corpus().document(&r.doc_id).map(|d| d.title.clone()).unwrap_or_default(),
                    doc_id: r.doc_id,
                    sentences: vec![marked],
                }),
            }
        }
        Ok(groups)
    }

    /// A whole document. Sentences are flagged from `flag` when given,
    /// otherwise from the selection's sentence-set.
    pub fn document(
        &self,
        topic_id: &str,
        doc_id: &str,
        flag: Option<&[usize]>,
        source: SelectionSource,
    ) -> Result<SentenceGroup, ApiError> {
        let index = self.topic(topic_id)?;
        let doc = index
            .corpus()
            .document(doc_id)
            .ok_or_else(|| ApiError::NotFound(format!("unknown document `{doc_id}`")))?;
        let selection = self.selection_for(index, source)?;
        let relevant = if selection.is_empty() {
            SentenceSet::default()
        } else {
            intersect(index, &selection)?
        };
        let sentences = (0..doc.sentences.len())
            .map(|i| {
                let r = SentenceRef::new(doc_id, i);
                let flagged = match flag {
                    Some(f) => f.contains(&i),
                    None => index
                        .corpus()
                        .ordinal(&r)
                        .is_some_and(|o| relevant.contains(o as u32)),
                };
                mark_sentence(index, &selection, &r, flagged)
            })
            .collect();
        Ok(SentenceGroup {
            doc_id: doc.doc_id.clone(),
            title: doc.title.clone(),
            sentences,
        })
    }

    pub fn history(&self, session: &str) -> Result<Vec<HistoryEntry>, ApiError> {
        Ok(self.sessions.list_history(session)?)
    }
}

fn selected_values(index: &TopicIndex, selection: &Selection) -> Result<Vec<SelectedValue>, ApiError> {
    selection
        .selected
        .iter()
        .map(|id| {
            let v = index.value(id)?;
            Ok(SelectedValue {
                value_id: v.value_id.clone(),
                label: v.label.clone(),
                facet: v.facet,
            })
        })
        .collect()
}

fn mark_sentence(index: &TopicIndex, selection: &Selection, r: &SentenceRef, flagged: bool) -> MarkedSentence {
    let sentence = index.corpus().sentence(r).expect("reference resolved by caller");
    let mut starts = Vec::with_capacity(sentence.tokens.len() + 1);
    let mut offset = 0;
    for t in &sentence.tokens {
        starts.push(offset);
        offset += t.text.chars().count() + usize::from(t.ws);
    }
    let token_end_char = |i: usize| starts[i] + sentence.tokens[i].text.chars().count();

    let mut highlights = Vec::new();
    for id in &selection.selected {
        let Ok(value) = index.value(id) else { continue };
        for m in value.mentions.iter().filter(|m| &m.sentence == r) {
            highlights.push(Highlight {
                value_id: id.clone(),
                token_start: m.token_start,
                token_end: m.token_end,
                char_start: starts[m.token_start],
                char_end: token_end_char(m.token_end),
            });
        }
    }
    highlights.sort_by(|a, b| {
        (a.token_start, a.token_end, &a.value_id).cmp(&(b.token_start, b.token_end, &b.value_id))
    });
    highlights.dedup();
    MarkedSentence {
        sent_index: r.sent_index,
        text: sentence.text.clone(),
        flagged,
        highlights,
    }
}
