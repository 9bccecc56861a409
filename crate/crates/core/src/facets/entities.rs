//! Entities: merging within-document clusters with cross-document pair
//! scores by average-linkage agglomerative clustering, then NER categories.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};

use serde::{Deserialize, Serialize};

use crate::annotations::{PairScore, RawCluster};
use crate::corpus::{Corpus, Mention, NerTag};
use crate::facets::ClusteringConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum EntityCategory {
    Person,
    Location,
    Organization,
    Miscellaneous,
}

impl EntityCategory {
    pub fn as_str(self) -> &'static str {
        match self {
            EntityCategory::Person => "PERSON",
            EntityCategory::Location => "LOCATION",
            EntityCategory::Organization => "ORGANIZATION",
            EntityCategory::Miscellaneous => "MISCELLANEOUS",
        }
    }
}

/// Scores every unordered mention pair inside a within-document cluster.
/// Pairs across clusters are implicitly 0 and not emitted.
pub fn wd_clusters_to_pair_scores(wd_clusters: &[RawCluster], config: &ClusteringConfig) -> Vec<PairScore> {
    let mut out = Vec::new();
    for c in wd_clusters {
        for (i, a) in c.mentions.iter().enumerate() {
            for b in &c.mentions[i + 1..] {
                out.push(PairScore::new(&a.mention_id, &b.mention_id, config.wd_pair_score));
            }
        }
    }
    out
}

#[derive(PartialEq)]
struct Candidate {
    distance: f64,
    reps: (String, String),
    a: usize,
    b: usize,
    generation: (u32, u32),
}

impl Eq for Candidate {}

impl Ord for Candidate {
    // Reversed so the max-heap yields the closest pair, smallest reps first.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .distance
            .total_cmp(&self.distance)
            .then_with(|| other.reps.cmp(&self.reps))
    }
}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

struct Linkage<'a> {
    ids: &'a [&'a str],
    members: Vec<Vec<usize>>,
    rep: Vec<usize>,
    generation: Vec<u32>,
    alive: Vec<bool>,
    /// Sum of member-pair similarities for clusters with any positive pair.
    sums: Vec<HashMap<usize, f64>>,
}

impl Linkage<'_> {
    fn candidate(&self, a: usize, b: usize) -> Candidate {
        let size = (self.members[a].len() * self.members[b].len()) as f64;
        let distance = 1.0 - self.sums[a][&b] / size;
        let (ra, rb) = (self.ids[self.rep[a]], self.ids[self.rep[b]]);
        let reps = if ra <= rb { (ra, rb) } else { (rb, ra) };
        Candidate {
            distance,
            reps: (reps.0.to_string(), reps.1.to_string()),
            a,
            b,
            generation: (self.generation[a], self.generation[b]),
        }
    }

    fn is_current(&self, c: &Candidate) -> bool {
        self.alive[c.a]
            && self.alive[c.b]
            && self.generation[c.a] == c.generation.0
            && self.generation[c.b] == c.generation.1
    }

    fn merge(&mut self, a: usize, b: usize) {
        let moved = std::mem::take(&mut self.members[b]);
        self.members[a].extend(moved);
        if self.ids[self.rep[b]] < self.ids[self.rep[a]] {
            self.rep[a] = self.rep[b];
        }
        self.alive[b] = false;
        self.generation[a] += 1;

        let b_sums = std::mem::take(&mut self.sums[b]);
        self.sums[a].remove(&b);
        for (c, s) in b_sums {
            if c == a {
                continue;
            }
            *self.sums[a].entry(c).or_insert(0.0) += s;
            let from_c = self.sums[c].remove(&b).unwrap_or(0.0);
            *self.sums[c].entry(a).or_insert(0.0) += from_c;
        }
    }
}

/// Average-linkage agglomerative clustering over entity mentions.
///
/// The within-document clusters form the initial partition, so mentions that
/// share one are never separated. Pair similarity is the larger of the
/// within-document score and the cross-document score, with missing pairs at
/// 0; distance is `1 - similarity`. The closest pair of clusters (ties broken
/// by the smallest pair of representative mention ids, a cluster's
/// representative being its smallest id) merges while its average distance is
/// at most `1 - cd_merge_threshold`.
///
/// Output clusters are ordered by their earliest mention in input order, and
/// mentions keep input order within a cluster.
pub fn agglomerative_entity_clustering(
    wd_clusters: &[RawCluster],
    cd_scores: &[PairScore],
    config: &ClusteringConfig,
) -> Vec<Vec<Mention>> {
    let mentions: Vec<&Mention> = wd_clusters.iter().flat_map(|c| &c.mentions).collect();
    let ids: Vec<&str> = mentions.iter().map(|m| m.mention_id.as_str()).collect();
    let index: HashMap<&str, usize> = ids.iter().enumerate().map(|(i, id)| (*id, i)).collect();

    let mut owner = vec![0; mentions.len()];
    let mut members = Vec::with_capacity(wd_clusters.len());
    let mut next = 0;
    for (ci, c) in wd_clusters.iter().enumerate() {
        let range: Vec<usize> = (next..next + c.mentions.len()).collect();
        for &m in &range {
            owner[m] = ci;
        }
        next += c.mentions.len();
        members.push(range);
    }

    let mut pair_sim: HashMap<(usize, usize), f64> = HashMap::new();
    let wd_pairs = wd_clusters_to_pair_scores(wd_clusters, config);
    for p in wd_pairs.iter().chain(cd_scores) {
        let (Some(&a), Some(&b)) = (index.get(p.mention_a.as_str()), index.get(p.mention_b.as_str())) else {
            continue;
        };
        let key = (a.min(b), a.max(b));
        let entry = pair_sim.entry(key).or_insert(0.0);
        *entry = entry.max(p.score);
    }

    let n = members.len();
    let mut sums: Vec<HashMap<usize, f64>> = vec![HashMap::new(); n];
    let mut keys: Vec<_> = pair_sim.into_iter().collect();
    keys.sort_by_key(|k| k.0);
    for ((a, b), s) in keys {
        let (ca, cb) = (owner[a], owner[b]);
        if ca == cb || s <= 0.0 {
            continue;
        }
        *sums[ca].entry(cb).or_insert(0.0) += s;
        *sums[cb].entry(ca).or_insert(0.0) += s;
    }

    let rep = members
        .iter()
        .map(|m| *m.iter().min_by_key(|&&i| ids[i]).expect("clusters are non-empty"))
        .collect();
    let mut link = Linkage {
        ids: &ids,
        members,
        rep,
        generation: vec![0; n],
        alive: vec![true; n],
        sums,
    };

    let mut heap = BinaryHeap::new();
    for a in 0..n {
        let mut neighbours: Vec<usize> = link.sums[a].keys().copied().filter(|&b| b > a).collect();
        neighbours.sort_unstable();
        for b in neighbours {
            heap.push(link.candidate(a, b));
        }
    }

    let max_distance = 1.0 - config.cd_merge_threshold;
    while let Some(best) = heap.pop() {
        if !link.is_current(&best) {
            continue;
        }
        if best.distance > max_distance {
            break;
        }
        let (a, b) = (best.a.min(best.b), best.a.max(best.b));
        link.merge(a, b);
        let mut neighbours: Vec<usize> = link.sums[a].keys().copied().collect();
        neighbours.sort_unstable();
        for c in neighbours {
            heap.push(link.candidate(a, c));
        }
    }

    let mut out: Vec<Vec<usize>> = (0..n)
        .filter(|&c| link.alive[c])
        .map(|c| {
            let mut m = std::mem::take(&mut link.members[c]);
            m.sort_unstable();
            m
        })
        .collect();
    out.sort_by_key(|m| m[0]);
    out.into_iter()
        .map(|m| m.into_iter().map(|i| mentions[i].clone()).collect())
        .collect()
}

/// NER category of an entity cluster.
///
/// A mention counts toward a tag only when every one of its tokens carries
/// that tag. The most counted of PERSON, LOCATION, ORGANIZATION wins, ties in
/// that order; no counted mention gives MISCELLANEOUS.
pub fn categorize_entity_cluster(corpus: &Corpus, mentions: &[Mention]) -> EntityCategory {
    let mut counts = [0usize; 3];
    for m in mentions {
        let Some(tokens) = corpus
            .sentence(&m.sentence)
            .and_then(|s| s.tokens.get(m.token_start..=m.token_end))
        else {
            continue;
        };
        let first = tokens[0].ner;
        if tokens.iter().any(|t| t.ner != first) {
            continue;
        }
        match first {
            NerTag::Person => counts[0] += 1,
            NerTag::Location => counts[1] += 1,
            NerTag::Organization => counts[2] += 1,
            NerTag::None => {}
        }
    }
    let order = [
        EntityCategory::Person,
        EntityCategory::Location,
        EntityCategory::Organization,
    ];
    let best = (0..3).fold(0, |best, i| if counts[i] > counts[best] { i } else { best });
    if counts[best] == 0 {
        EntityCategory::Miscellaneous
    } else {
        order[best]
    }
}
