//! Statements: connected components of the proposition alignment graph.

use std::collections::HashMap;

use crate::annotations::PairScore;
use crate::corpus::Mention;
use crate::facets::ClusteringConfig;
use crate::union_find::DisjointSet;

/// Clusters propositions by connectivity over alignments scoring strictly
/// above `alignment_threshold`. Unlinked propositions come back as
/// singletons. Components are ordered by their earliest proposition.
pub fn proposition_clusters(
    propositions: &[Mention],
    alignments: &[PairScore],
    config: &ClusteringConfig,
) -> Vec<Vec<Mention>> {
    let index: HashMap<&str, usize> = propositions
        .iter()
        .enumerate()
        .map(|(i, m)| (m.mention_id.as_str(), i))
        .collect();
    let mut sets = DisjointSet::new(propositions.len());
    for p in alignments {
        if p.score <= config.alignment_threshold {
            continue;
        }
        if let (Some(&a), Some(&b)) = (index.get(p.mention_a.as_str()), index.get(p.mention_b.as_str())) {
            sets.union(a, b);
        }
    }
    sets.groups()
        .into_iter()
        .map(|g| g.into_iter().map(|i| propositions[i].clone()).collect())
        .collect()
}
