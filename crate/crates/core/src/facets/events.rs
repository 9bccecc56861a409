//! Concepts: verbal-cluster filtering and same-label merging of event clusters.

use std::collections::{HashMap, HashSet};

use crate::annotations::RawCluster;
use crate::corpus::{Corpus, Mention, Pos};
use crate::facets::label::cluster_label;
use crate::facets::{FacetCandidate, FacetKind};

/// A mention is verbal when its final (head) token is tagged VERB.
pub fn mention_is_verbal(corpus: &Corpus, mention: &Mention) -> bool {
    corpus
        .sentence(&mention.sentence)
        .and_then(|s| s.tokens.get(mention.token_end))
        .is_some_and(|t| t.pos == Pos::Verb)
}

/// Drops clusters where strictly more than half of the mentions are verbal.
pub fn filter_verbal_event_clusters(corpus: &Corpus, clusters: Vec<RawCluster>) -> Vec<RawCluster> {
    clusters
        .into_iter()
        .filter(|c| {
            let verbal = c.mentions.iter().filter(|m| mention_is_verbal(corpus, m)).count();
            verbal * 2 <= c.mentions.len()
        })
        .collect()
}

/// Unions clusters whose labels match case-insensitively, relabelling each
/// union. Repeats until no two labels match, so the result is a fixpoint.
pub fn merge_same_label_event_clusters(mut clusters: Vec<FacetCandidate>) -> Vec<FacetCandidate> {
    loop {
        let before = clusters.len();
        clusters = merge_once(clusters);
        if clusters.len() == before {
            return clusters;
        }
    }
}

fn merge_once(clusters: Vec<FacetCandidate>) -> Vec<FacetCandidate> {
    let mut slot: HashMap<String, usize> = HashMap::new();
    let mut groups: Vec<Vec<Mention>> = Vec::new();
    for c in clusters {
        let key = c.label.to_lowercase();
        match slot.get(&key) {
            Some(&i) => groups[i].extend(c.mentions),
            None => {
                slot.insert(key, groups.len());
                groups.push(c.mentions);
            }
        }
    }
    groups
        .into_iter()
        .map(|mut mentions| {
            let mut seen = HashSet::new();
            mentions.retain(|m| seen.insert(m.mention_id.clone()));
            FacetCandidate {
                label: cluster_label(&mentions, FacetKind::Concepts),
                mentions,
                category: None,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::annotations::ClusterKind;
    use crate::corpus::tests::doc;
    use crate::corpus::{MentionKind, SentenceRef};

    fn corpus() -> Corpus {
        Corpus::new(vec![doc(
            "d",
            &["said/VERB unemployment/NOUN casino/NOUN gambling/NOUN found/VERB"],
        )])
        .unwrap()
    }

    fn at(tok: usize) -> Mention {
        let c = corpus();
        let s = c.sentence(&SentenceRef::new("d", 0)).unwrap();
        Mention {
            mention_id: format!("m{tok}"),
            sentence: SentenceRef::new("d", 0),
            token_start: tok,
            token_end: tok,
            surface: s.tokens[tok].text.clone(),
            kind: MentionKind::Event,
        }
    }

    fn cluster(toks: &[usize]) -> RawCluster {
        RawCluster {
            cluster_id: format!("{toks:?}"),
            kind: ClusterKind::Event,
            mentions: toks.iter().map(|&t| at(t)).collect(),
        }
    }

    #[test]
    fn verbality_by_final_token() {
        let c = corpus();
        assert!(mention_is_verbal(&c, &at(0)));
        assert!(!mention_is_verbal(&c, &at(1)));
        let mut span = at(2);
        span.token_end = 3;
        assert!(!mention_is_verbal(&c, &span));
        span.token_end = 4;
        assert!(mention_is_verbal(&c, &span));
    }

    #[test]
    fn verbal_filter_is_strict_majority() {
        let c = corpus();
        // VERB VERB NOUN, NOUN NOUN VERB, VERB NOUN
        let out = filter_verbal_event_clusters(&c, vec![cluster(&[0, 4, 1]), cluster(&[1, 2, 0]), cluster(&[0, 1])]);
        let ids: Vec<_> = out.iter().map(|c| c.cluster_id.as_str()).collect();
        assert_eq!(ids, ["[1, 2, 0]", "[0, 1]"]);
    }

    #[test]
    fn two_mention_tie_cases_enumerated() {
        let c = corpus();
        // Every assignment of {VERB, NOUN} to two mentions: removed iff both verbal.
        for (a, b) in [(0, 4), (0, 1), (1, 0), (1, 2)] {
            let both_verbal = [a, b].iter().all(|&t| mention_is_verbal(&c, &at(t)));
            let kept = filter_verbal_event_clusters(&c, vec![cluster(&[a, b])]).len() == 1;
            assert_eq!(kept, !both_verbal, "{a} {b}");
        }
    }

    fn cand(label: &str, ids: &[&str]) -> FacetCandidate {
        FacetCandidate {
            label: label.into(),
            mentions: ids
                .iter()
                .map(|id| Mention {
                    mention_id: id.to_string(),
                    sentence: SentenceRef::new("d", 0),
                    token_start: 0,
                    token_end: 0,
                    surface: label.into(),
                    kind: MentionKind::Event,
                })
                .collect(),
            category: None,
        }
    }

    #[test]
    fn same_label_merge() {
        let out = merge_same_label_event_clusters(vec![cand("unemployment", &["a"]), cand("Unemployment", &["b", "c"])]);
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].mentions.len(), 3);
        assert_eq!(out[0].label, "unemployment");

        let out = merge_same_label_event_clusters(vec![cand("poverty", &["a"]), cand("treaties", &["b"])]);
        assert_eq!(out.len(), 2);

        let out = merge_same_label_event_clusters(vec![
            cand("crash", &["a", "b"]),
            cand("crash", &["c"]),
            cand("crash", &["d", "e", "f"]),
        ]);
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].label, "crash");
        let ids: Vec<_> = out[0].mentions.iter().map(|m| m.mention_id.as_str()).collect();
        assert_eq!(ids, ["a", "b", "c", "d", "e", "f"]);
    }

    #[test]
    fn shared_mentions_counted_once() {
        let out = merge_same_label_event_clusters(vec![cand("crash", &["a", "b"]), cand("crash", &["b"])]);
        assert_eq!(out[0].mentions.len(), 2);
    }
}
