//! Selection semantics over a built topic: sentence-set intersection,
//! facet refresh restricted to the current sentences, and mention forms.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::corpus::SentenceRef;
use crate::error::{Error, Result};
use crate::facets::label::surface_counts;
use crate::facets::{EntityCategory, FacetKind};
use crate::index::TopicIndex;

pub mod session;

pub use session::{HistoryEntry, Session, SessionStore, SessionToken, HISTORY_CAP};

/// Selected facet-values in click order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Selection {
    pub topic_id: String,
    pub selected: Vec<String>,
}

impl Selection {
    pub fn empty(topic_id: impl Into<String>) -> Self {
        Self {
            topic_id: topic_id.into(),
            selected: Vec::new(),
        }
    }

    /// Validates that every id exists and none repeats.
    pub fn new(index: &TopicIndex, selected: Vec<String>) -> Result<Self> {
        let mut seen = HashSet::new();
        for id in &selected {
            index.value(id)?;
            if !seen.insert(id.as_str()) {
                return Err(Error::DuplicateSelection(id.clone()));
            }
        }
        Ok(Self {
            topic_id: index.topic_id().to_string(),
            selected,
        })
    }

    /// Adds the value if absent, removes it if present.
    pub fn toggled(&self, index: &TopicIndex, value_id: &str) -> Result<Self> {
        index.value(value_id)?;
        let mut next = self.clone();
        if let Some(pos) = next.selected.iter().position(|v| v == value_id) {
            next.selected.remove(pos);
        } else {
            next.selected.push(value_id.to_string());
        }
        Ok(next)
    }

    /// Sorted ids: identical for any click order.
    pub fn canonical(&self) -> Vec<String> {
        let mut ids = self.selected.clone();
        ids.sort();
        ids
    }

    pub fn is_empty(&self) -> bool {
        self.selected.is_empty()
    }

    pub fn contains(&self, value_id: &str) -> bool {
        self.selected.iter().any(|v| v == value_id)
    }
}

/// A set of sentences as ascending global ordinals.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SentenceSet {
    ordinals: Vec<u32>,
}

impl SentenceSet {
    pub fn all(index: &TopicIndex) -> Self {
        Self {
            ordinals: (0..index.corpus().sentence_count() as u32).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.ordinals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ordinals.is_empty()
    }

    pub fn ordinals(&self) -> &[u32] {
        &self.ordinals
    }

    pub fn contains(&self, ordinal: u32) -> bool {
        self.ordinals.binary_search(&ordinal).is_ok()
    }

    /// References in canonical document order.
    pub fn refs(&self, index: &TopicIndex) -> Vec<SentenceRef> {
        self.ordinals
            .iter()
            .map(|&o| index.corpus().sentence_ref(o as usize))
            .collect()
    }

    fn intersect(&self, other: &[u32]) -> Self {
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < self.ordinals.len() && j < other.len() {
            match self.ordinals[i].cmp(&other[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    out.push(other[j]);
                    i += 1;
                    j += 1;
                }
            }
        }
        Self { ordinals: out }
    }

    fn mask(&self, size: usize) -> Vec<bool> {
        let mut mask = vec![false; size];
        for &o in &self.ordinals {
            mask[o as usize] = true;
        }
        mask
    }
}

/// Sentences holding at least one mention of the value.
pub fn sentence_set(index: &TopicIndex, value_id: &str) -> Result<SentenceSet> {
    Ok(SentenceSet {
        ordinals: index.postings(value_id)?.sentences.clone(),
    })
}

/// Intersection of the selected values' sentence-sets. An empty selection
/// yields every sentence of the topic.
pub fn intersect(index: &TopicIndex, selection: &Selection) -> Result<SentenceSet> {
    let mut lists = selection
        .selected
        .iter()
        .map(|id| index.postings(id).map(|p| p.sentences.as_slice()))
        .collect::<Result<Vec<_>>>()?;
    lists.sort_by_key(|l| l.len());
    let Some((first, rest)) = lists.split_first() else {
        return Ok(SentenceSet::all(index));
    };
    let mut acc = SentenceSet {
        ordinals: first.to_vec(),
    };
    for list in rest {
        if acc.is_empty() {
            break;
        }
        acc = acc.intersect(list);
    }
    Ok(acc)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViewEntry {
    pub value_id: String,
    pub label: String,
    /// Mentions inside the current sentence-set.
    pub frequency: usize,
    pub global_frequency: usize,
    pub category: Option<EntityCategory>,
    pub selected: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacetPanel {
    pub values: Vec<ViewEntry>,
    /// Size of the facet before restriction.
    pub total_values: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacetView {
    pub concepts: FacetPanel,
    pub entities: FacetPanel,
    pub statements: FacetPanel,
}

impl FacetView {
    pub fn panel(&self, kind: FacetKind) -> &FacetPanel {
        match kind {
            FacetKind::Concepts => &self.concepts,
            FacetKind::Entities => &self.entities,
            FacetKind::Statements => &self.statements,
        }
    }

    fn panel_mut(&mut self, kind: FacetKind) -> &mut FacetPanel {
        match kind {
            FacetKind::Concepts => &mut self.concepts,
            FacetKind::Entities => &mut self.entities,
            FacetKind::Statements => &mut self.statements,
        }
    }
}

/// Facets restricted to the given sentence-set.
pub fn restricted_view(index: &TopicIndex, selection: &Selection, sentences: &SentenceSet) -> FacetView {
    let mask = sentences.mask(index.corpus().sentence_count());
    let mut view = FacetView::default();
    for kind in FacetKind::ALL {
        let values = index.facets().facet(kind);
        let mut entries: Vec<(usize, ViewEntry)> = values
            .iter()
            .enumerate()
            .filter_map(|(pos, v)| {
                let postings = index.postings(&v.value_id).ok()?;
                let frequency = postings
                    .mention_sentences
                    .iter()
                    .filter(|&&o| mask[o as usize])
                    .count();
                (frequency > 0).then(|| {
                    (
                        pos,
                        ViewEntry {
                            value_id: v.value_id.clone(),
                            label: v.label.clone(),
                            frequency,
                            global_frequency: v.frequency(),
                            category: v.category,
                            selected: selection.contains(&v.value_id),
                        },
                    )
                })
            })
            .collect();
        entries.sort_by_cached_key(|(pos, e)| {
            (std::cmp::Reverse(e.frequency), e.label.to_lowercase(), e.label.clone(), *pos)
        });
        let panel = view.panel_mut(kind);
        panel.total_values = values.len();
        panel.values = entries.into_iter().map(|(_, e)| e).collect();
    }
    view
}

/// Facets listing only values with a mention in the selection's
/// intersection, with frequencies counted inside it.
pub fn refresh_facets(index: &TopicIndex, selection: &Selection) -> Result<FacetView> {
    let sentences = intersect(index, selection)?;
    Ok(restricted_view(index, selection, &sentences))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MentionForm {
    pub surface: String,
    pub count: usize,
}

/// Distinct surface forms of a value (case-insensitive), most frequent first.
pub fn mention_forms(index: &TopicIndex, value_id: &str) -> Result<Vec<MentionForm>> {
    let value = index.value(value_id)?;
    let mut forms = surface_counts(&value.mentions);
    forms.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.folded.cmp(&b.folded)));
    Ok(forms
        .into_iter()
        .map(|f| MentionForm {
            surface: f.surface,
            count: f.count,
        })
        .collect())
}
