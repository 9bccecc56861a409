//! Facet formation: turns a validated annotation bundle into the Concepts,
//! Entities and Statements facet tables.

use std::cmp::Reverse;
use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::annotations::AnnotationBundle;
use crate::corpus::{Corpus, Mention, SentenceRef};
use crate::error::{Error, Result};

pub mod entities;
pub mod events;
pub mod filters;
pub mod label;
pub mod statements;

pub use entities::{
    agglomerative_entity_clustering, categorize_entity_cluster, wd_clusters_to_pair_scores,
    EntityCategory,
};
pub use events::{filter_verbal_event_clusters, mention_is_verbal, merge_same_label_event_clusters};
pub use filters::{apply_facet_filters, filter_reason, FilterReason};
pub use label::cluster_label;
pub use statements::proposition_clusters;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum FacetKind {
    Concepts,
    Entities,
    Statements,
}

impl FacetKind {
    pub const ALL: [FacetKind; 3] = [FacetKind::Concepts, FacetKind::Entities, FacetKind::Statements];

    pub fn as_str(self) -> &'static str {
        match self {
            FacetKind::Concepts => "CONCEPTS",
            FacetKind::Entities => "ENTITIES",
            FacetKind::Statements => "STATEMENTS",
        }
    }

    fn id_prefix(self) -> char {
        match self {
            FacetKind::Concepts => 'C',
            FacetKind::Entities => 'E',
            FacetKind::Statements => 'S',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ClusteringConfig {
    /// Score given to mention pairs sharing a within-document cluster.
    pub wd_pair_score: f64,
    /// Minimum average similarity for two entity clusters to merge.
    pub cd_merge_threshold: f64,
    /// Alignments must score strictly above this to link propositions.
    pub alignment_threshold: f64,
    pub max_cluster_mentions: usize,
    pub min_label_chars: usize,
    /// Also apply the no-verb label rule to statements.
    pub verb_filter_statements: bool,
}

impl Default for ClusteringConfig {
    fn default() -> Self {
        Self {
            wd_pair_score: 1.0,
            cd_merge_threshold: 0.5,
            alignment_threshold: 0.5,
            max_cluster_mentions: 50,
            min_label_chars: 3,
            verb_filter_statements: false,
        }
    }
}

impl ClusteringConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::Config(msg.to_string()));
        if !(self.cd_merge_threshold > 0.0 && self.cd_merge_threshold <= 1.0) {
            return bad("cd_merge_threshold must be in (0, 1]");
        }
        if !(0.0..=1.0).contains(&self.alignment_threshold) {
            return bad("alignment_threshold must be in [0, 1]");
        }
        if !(0.0..=1.0).contains(&self.wd_pair_score) {
            return bad("wd_pair_score must be in [0, 1]");
        }
        if self.max_cluster_mentions == 0 {
            return bad("max_cluster_mentions must be positive");
        }
        Ok(())
    }
}

/// A labelled mention cluster on its way to becoming a facet-value.
#[derive(Debug, Clone, PartialEq)]
pub struct FacetCandidate {
    pub label: String,
    pub mentions: Vec<Mention>,
    pub category: Option<EntityCategory>,
}

impl FacetCandidate {
    fn labelled(mentions: Vec<Mention>, facet: FacetKind) -> Self {
        Self {
            label: cluster_label(&mentions, facet),
            mentions,
            category: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FacetValue {
    pub value_id: String,
    pub facet: FacetKind,
    pub label: String,
    pub mentions: Vec<Mention>,
    pub category: Option<EntityCategory>,
}

impl FacetValue {
    /// Number of mentions.
    pub fn frequency(&self) -> usize {
        self.mentions.len()
    }

    /// Sentences holding at least one mention.
    pub fn sentence_set(&self) -> BTreeSet<SentenceRef> {
        self.mentions.iter().map(|m| m.sentence.clone()).collect()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FacetTables {
    pub concepts: Vec<FacetValue>,
    pub entities: Vec<FacetValue>,
    pub statements: Vec<FacetValue>,
}

impl FacetTables {
    pub fn facet(&self, kind: FacetKind) -> &[FacetValue] {
        match kind {
            FacetKind::Concepts => &self.concepts,
            FacetKind::Entities => &self.entities,
            FacetKind::Statements => &self.statements,
        }
    }

    /// All values, concepts first, each facet in presentation order.
    pub fn values(&self) -> impl Iterator<Item = &FacetValue> {
        self.concepts.iter().chain(&self.entities).chain(&self.statements)
    }

    pub fn len(&self) -> usize {
        self.concepts.len() + self.entities.len() + self.statements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn concept_candidates(corpus: &Corpus, bundle: &AnnotationBundle) -> Vec<FacetCandidate> {
    let kept = filter_verbal_event_clusters(corpus, bundle.event_clusters.clone());
    let labelled = kept
        .into_iter()
        .map(|c| FacetCandidate::labelled(c.mentions, FacetKind::Concepts))
        .collect();
    merge_same_label_event_clusters(labelled)
}

fn entity_candidates(corpus: &Corpus, bundle: &AnnotationBundle, config: &ClusteringConfig) -> Vec<FacetCandidate> {
    agglomerative_entity_clustering(&bundle.entity_wd_clusters, &bundle.entity_cd_scores, config)
        .into_iter()
        .map(|mentions| {
            let mut c = FacetCandidate::labelled(mentions, FacetKind::Entities);
            c.category = Some(categorize_entity_cluster(corpus, &c.mentions));
            c
        })
        .collect()
}

fn statement_candidates(bundle: &AnnotationBundle, config: &ClusteringConfig) -> Vec<FacetCandidate> {
    proposition_clusters(&bundle.proposition_mentions, &bundle.proposition_alignments, config)
        .into_iter()
        .map(|mentions| FacetCandidate::labelled(mentions, FacetKind::Statements))
        .collect()
}

/// Candidate clusters of one facet before filtering.
pub fn facet_candidates(
    corpus: &Corpus,
    bundle: &AnnotationBundle,
    facet: FacetKind,
    config: &ClusteringConfig,
) -> Vec<FacetCandidate> {
    match facet {
        FacetKind::Concepts => concept_candidates(corpus, bundle),
        FacetKind::Entities => entity_candidates(corpus, bundle, config),
        FacetKind::Statements => statement_candidates(bundle, config),
    }
}

/// Sorts by descending frequency, then label, and assigns ids `C1`, `E1`, ...
fn finalize(facet: FacetKind, mut candidates: Vec<FacetCandidate>) -> Vec<FacetValue> {
    candidates.sort_by_cached_key(|c| {
        (
            Reverse(c.mentions.len()),
            c.label.to_lowercase(),
            c.label.clone(),
            c.mentions[0].mention_id.clone(),
        )
    });
    candidates
        .into_iter()
        .enumerate()
        .map(|(i, c)| FacetValue {
            value_id: format!("{}{}", facet.id_prefix(), i + 1),
            facet,
            label: c.label,
            mentions: c.mentions,
            category: c.category,
        })
        .collect()
}

/// Runs the three facet pipelines end to end.
///
/// Concepts: verbal filter, labelling, same-label merging, filters.
/// Entities: agglomerative clustering seeded with the within-document
/// clusters, labelling, NER categories, filters. Statements: alignment graph
/// components, labelling, filters.
pub fn build_facets(corpus: &Corpus, bundle: &AnnotationBundle, config: &ClusteringConfig) -> Result<FacetTables> {
    config.validate()?;
    bundle.validate(corpus)?;
    let build = |facet| {
        let candidates = facet_candidates(corpus, bundle, facet, config);
        finalize(facet, apply_facet_filters(corpus, candidates, facet, config))
    };
    let (concepts, entities, statements) = std::thread::scope(|s| {
        let entities = s.spawn(|| build(FacetKind::Entities));
        let statements = s.spawn(|| build(FacetKind::Statements));
        let concepts = build(FacetKind::Concepts);
        (
            concepts,
            entities.join().expect("entity pipeline panicked"),
            statements.join().expect("statement pipeline panicked"),
        )
    });
    Ok(FacetTables {
        concepts,
        entities,
        statements,
    })
}
