use std::collections::HashSet;
use std::fmt;

use crate::corpus::{Corpus, Pos};
use crate::facets::{ClusteringConfig, FacetCandidate, FacetKind};

/// Why a candidate facet-value was dropped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FilterReason {
    TooManyMentions,
    SingleSentence,
    ShortLabel,
    VerbalLabel,
}

impl fmt::Display for FilterReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FilterReason::TooManyMentions => "too many mentions",
            FilterReason::SingleSentence => "at most one linked sentence",
            FilterReason::ShortLabel => "label too short",
            FilterReason::VerbalLabel => "label has a verb tag",
        })
    }
}

/// Whether any token of the label carries a VERB tag. The tags are read from
/// the first mention whose surface equals the label.
pub fn label_has_verb(corpus: &Corpus, candidate: &FacetCandidate) -> bool {
    candidate
        .mentions
        .iter()
        .find(|m| m.surface == candidate.label)
        .and_then(|m| {
            corpus
                .sentence(&m.sentence)?
                .tokens
                .get(m.token_start..=m.token_end)
        })
        .is_some_and(|toks| toks.iter().any(|t| t.pos == Pos::Verb))
}

/// First filter (in application order) that rejects the candidate.
pub fn filter_reason(
    corpus: &Corpus,
    candidate: &FacetCandidate,
    facet: FacetKind,
    config: &ClusteringConfig,
) -> Option<FilterReason> {
    if candidate.mentions.len() > config.max_cluster_mentions {
        return Some(FilterReason::TooManyMentions);
    }
    let sentences: HashSet<_> = candidate.mentions.iter().map(|m| &m.sentence).collect();
    if sentences.len() <= 1 {
        return Some(FilterReason::SingleSentence);
    }
    if candidate.label.chars().count() < config.min_label_chars {
        return Some(FilterReason::ShortLabel);
    }
    let verb_rule_applies = facet != FacetKind::Statements || config.verb_filter_statements;
    if verb_rule_applies && label_has_verb(corpus, candidate) {
        return Some(FilterReason::VerbalLabel);
    }
    None
}

/// Keeps candidates that pass the mention cap, the two-sentence minimum, the
/// label length minimum and the no-verb label rule, in that order.
pub fn apply_facet_filters(
    corpus: &Corpus,
    candidates: Vec<FacetCandidate>,
    facet: FacetKind,
    config: &ClusteringConfig,
) -> Vec<FacetCandidate> {
    candidates
        .into_iter()
        .filter(|c| filter_reason(corpus, c, facet, config).is_none())
        .collect()
}
