//! Brute-force reference implementations and random topic generators shared
//! by the property tests and the acceptance suite.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use facetnav_core::annotations::{ClusterKind, PairScore, RawCluster};
use facetnav_core::{
    AnnotationBundle, Corpus, Document, FacetKind, Mention, MentionKind, NerTag, Pos, Sentence, SentenceRef, Token,
    TopicIndex,
};
use rand::rngs::StdRng;
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Connected components over edges scoring strictly above `threshold`,
/// computed as a reachability matrix relaxed until nothing changes.
/// Components are ordered by smallest member, members ascending.
pub fn closure_components(n: usize, edges: &[(usize, usize, f64)], threshold: f64) -> Vec<Vec<usize>> {
    let mut reach = vec![vec![false; n]; n];
    for (i, row) in reach.iter_mut().enumerate() {
        row[i] = true;
    }
    for &(a, b, s) in edges {
        if s > threshold {
            reach[a][b] = true;
            reach[b][a] = true;
        }
    }
    loop {
        let mut changed = false;
        for i in 0..n {
            for j in 0..n {
                if reach[i][j] {
                    continue;
                }
                if (0..n).any(|k| reach[i][k] && reach[k][j]) {
                    reach[i][j] = true;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for i in 0..n {
        if seen[i] {
            continue;
        }
        let comp: Vec<usize> = (0..n).filter(|&j| reach[i][j]).collect();
        for &j in &comp {
            seen[j] = true;
        }
        out.push(comp);
    }
    out
}

/// Average-linkage clustering recomputed from scratch at every step.
///
/// `sim[i][j]` is the pair similarity; `ids` gives each item's name for
/// representative tie-breaks. Starting from `partition`, the pair of clusters
/// with the smallest average distance merges (ties to the smallest pair of
/// representative ids) while that distance is at most `1 - threshold`.
/// Output clusters are sorted ascending and ordered by smallest member.
pub fn reference_average_linkage(
    ids: &[String],
    sim: &[Vec<f64>],
    partition: &[Vec<usize>],
    threshold: f64,
) -> Vec<Vec<usize>> {
    let mut clusters: Vec<Vec<usize>> = partition.to_vec();
    let rep = |c: &Vec<usize>| c.iter().map(|&i| ids[i].clone()).min().unwrap();
    loop {
        let mut best: Option<(f64, (String, String), usize, usize)> = None;
        for a in 0..clusters.len() {
            for b in a + 1..clusters.len() {
                let mut pairs: Vec<(usize, usize)> = Vec::new();
                for &x in &clusters[a] {
                    for &y in &clusters[b] {
                        pairs.push((x.min(y), x.max(y)));
                    }
                }
                pairs.sort_unstable();
                let total: f64 = pairs.iter().map(|&(x, y)| sim[x][y]).sum();
                let distance = 1.0 - total / (clusters[a].len() * clusters[b].len()) as f64;
                let (ra, rb) = (rep(&clusters[a]), rep(&clusters[b]));
                let reps = if ra <= rb { (ra, rb) } else { (rb, ra) };
                let better = match &best {
                    None => true,
                    Some((d, r, _, _)) => distance < *d || (distance == *d && reps < *r),
                };
                if better {
                    best = Some((distance, reps, a, b));
                }
            }
        }
        match best {
            Some((d, _, a, b)) if d <= 1.0 - threshold => {
                let moved = clusters.remove(b);
                clusters[a].extend(moved);
            }
            _ => break,
        }
    }
    for c in &mut clusters {
        c.sort_unstable();
    }
    clusters.sort();
    clusters
}

/// Every sentence of the topic (canonical order) mentioning all selected values.
pub fn brute_intersection(index: &TopicIndex, selected: &[String]) -> Vec<SentenceRef> {
    let corpus = index.corpus();
    corpus
        .refs()
        .filter(|r| {
            selected.iter().all(|id| {
                index
                    .value(id)
                    .unwrap()
                    .mentions
                    .iter()
                    .any(|m| &m.sentence == r)
            })
        })
        .collect()
}

/// Facet rows (value id, restricted frequency) for a sentence set, by
/// scanning every mention of every value.
pub fn brute_refresh(index: &TopicIndex, sentences: &[SentenceRef], kind: FacetKind) -> Vec<(String, usize)> {
    let inside: BTreeSet<&SentenceRef> = sentences.iter().collect();
    let mut rows: Vec<(usize, String, String, usize)> = Vec::new();
    for (pos, v) in index.facets().facet(kind).iter().enumerate() {
        let freq = v.mentions.iter().filter(|m| inside.contains(&m.sentence)).count();
        if freq > 0 {
            rows.push((pos, v.value_id.clone(), v.label.clone(), freq));
        }
    }
    rows.sort_by(|a, b| {
        b.3.cmp(&a.3)
            .then_with(|| a.2.to_lowercase().cmp(&b.2.to_lowercase()))
            .then_with(|| a.2.cmp(&b.2))
            .then(a.0.cmp(&b.0))
    });
    rows.into_iter().map(|r| (r.1, r.3)).collect()
}

const WORDS: &[(&str, Pos, NerTag)] = &[
    ("tribes", Pos::Noun, NerTag::None),
    ("casino", Pos::Noun, NerTag::None),
    ("gambling", Pos::Noun, NerTag::None),
    ("treaty", Pos::Noun, NerTag::None),
    ("of", Pos::Adp, NerTag::None),
    ("a", Pos::Det, NerTag::None),
    ("opened", Pos::Verb, NerTag::None),
    ("sued", Pos::Verb, NerTag::None),
    ("ruling", Pos::Noun, NerTag::None),
    ("won", Pos::Verb, NerTag::None),
    ("new", Pos::Adj, NerTag::None),
    ("Clinton", Pos::Propn, NerTag::Person),
    ("Nebraska", Pos::Propn, NerTag::Location),
    ("York", Pos::Propn, NerTag::Location),
    ("FBI", Pos::Propn, NerTag::Organization),
    ("Navajo", Pos::Propn, NerTag::Organization),
    ("he", Pos::Pron, NerTag::None),
    ("it", Pos::Pron, NerTag::None),
];

fn random_sentence(rng: &mut StdRng) -> Sentence {
    let n = rng.random_range(3..=8);
    let mut tokens: Vec<Token> = (0..n)
        .map(|_| {
            let &(text, pos, ner) = WORDS.choose(rng).unwrap();
            Token {
                text: text.to_string(),
                ws: true,
                pos,
                ner,
            }
        })
        .collect();
    tokens.last_mut().unwrap().ws = false;
    let text = tokens
        .iter()
        .map(|t| if t.ws { format!("{} ", t.text) } else { t.text.clone() })
        .collect();
    Sentence { text, tokens }
}

struct MentionMaker<'a> {
    corpus: &'a Corpus,
    next: usize,
}

impl MentionMaker<'_> {
    fn make(&mut self, rng: &mut StdRng, r: &SentenceRef, kind: MentionKind, max_len: usize) -> Mention {
        let s = self.corpus.sentence(r).unwrap();
        let len = rng.random_range(1..=max_len.min(s.tokens.len()));
        let start = rng.random_range(0..=s.tokens.len() - len);
        self.next += 1;
        Mention {
            mention_id: format!("{}{:04}", kind.as_str().chars().next().unwrap().to_ascii_lowercase(), self.next),
            sentence: r.clone(),
            token_start: start,
            token_end: start + len - 1,
            surface: s.span_text(start, start + len - 1).unwrap(),
            kind,
        }
    }
}

/// Scores drawn from a grid of 1/64 steps when `dyadic`, so sums are exact.
pub fn random_score(rng: &mut StdRng, dyadic: bool) -> f64 {
    if dyadic {
        rng.random_range(0..=64) as f64 / 64.0
    } else {
        rng.random::<f64>()
    }
}

/// A small random topic with valid annotations of every kind. Some event
/// clusters are oversized so the mention cap is exercised.
pub fn random_topic(rng: &mut StdRng) -> (Corpus, AnnotationBundle) {
    let docs: Vec<Document> = (0..rng.random_range(1..=4))
        .map(|d| Document {
            doc_id: format!("D{d}"),
            title: String::new(),
            sentences: (0..rng.random_range(1..=6)).map(|_| random_sentence(rng)).collect(),
        })
        .collect();
    let corpus = Corpus::new(docs).unwrap();
    let refs: Vec<SentenceRef> = corpus.refs().collect();
    let mut maker = MentionMaker { corpus: &corpus, next: 0 };

    let mut bundle = AnnotationBundle::default();
    for c in 0..rng.random_range(0..=6) {
        let size = if rng.random_bool(0.1) { rng.random_range(45..=60) } else { rng.random_range(1..=6) };
        let mentions = (0..size)
            .map(|_| {
                let r = refs.choose(rng).unwrap().clone();
                maker.make(rng, &r, MentionKind::Event, 2)
            })
            .collect();
        bundle.event_clusters.push(RawCluster {
            cluster_id: format!("ev{c}"),
            kind: ClusterKind::Event,
            mentions,
        });
    }

    let mut entity_ids = Vec::new();
    for (c, doc) in corpus.documents().iter().enumerate() {
        for k in 0..rng.random_range(0..=3) {
            let doc_refs: Vec<&SentenceRef> = refs.iter().filter(|r| r.doc_id == doc.doc_id).collect();
            let mentions: Vec<Mention> = (0..rng.random_range(1..=3))
                .map(|_| {
                    let r = (*doc_refs.choose(rng).unwrap()).clone();
                    maker.make(rng, &r, MentionKind::Entity, 2)
                })
                .collect();
            entity_ids.extend(mentions.iter().map(|m| m.mention_id.clone()));
            bundle.entity_wd_clusters.push(RawCluster {
                cluster_id: format!("wd{c}_{k}"),
                kind: ClusterKind::EntityWd,
                mentions,
            });
        }
    }
    for (i, a) in entity_ids.iter().enumerate() {
        for b in &entity_ids[i + 1..] {
            if rng.random_bool(0.4) {
                bundle.entity_cd_scores.push(PairScore::new(a, b, random_score(rng, true)));
            }
        }
    }

    for _ in 0..rng.random_range(0..=8) {
        let r = refs.choose(rng).unwrap().clone();
        bundle.proposition_mentions.push(maker.make(rng, &r, MentionKind::Proposition, 8));
    }
    let props: Vec<String> = bundle.proposition_mentions.iter().map(|m| m.mention_id.clone()).collect();
    for (i, a) in props.iter().enumerate() {
        for b in &props[i + 1..] {
            if rng.random_bool(0.3) {
                bundle.proposition_alignments.push(PairScore::new(a, b, random_score(rng, true)));
            }
        }
    }
    bundle.validate(&corpus).unwrap();
    (corpus, bundle)
}

/// Entity-only instance for clustering oracles: a random WD partition over
/// `n` mentions spread across documents, plus random CD scores.
pub struct EntityInstance {
    pub corpus: Corpus,
    pub wd: Vec<RawCluster>,
    pub cd: Vec<PairScore>,
}

pub fn random_entity_instance(rng: &mut StdRng, max_mentions: usize, dyadic: bool) -> EntityInstance {
    let n_docs = rng.random_range(1..=4);
    let docs: Vec<Document> = (0..n_docs)
        .map(|d| Document {
            doc_id: format!("D{d}"),
            title: String::new(),
            sentences: (0..3).map(|_| random_sentence(rng)).collect(),
        })
        .collect();
    let corpus = Corpus::new(docs).unwrap();
    let mut maker = MentionMaker { corpus: &corpus, next: 0 };
    let n = rng.random_range(1..=max_mentions);
    let mut by_doc: HashMap<usize, Vec<Mention>> = HashMap::new();
    for _ in 0..n {
        let d = rng.random_range(0..n_docs);
        let r = SentenceRef::new(format!("D{d}"), rng.random_range(0..3));
        by_doc.entry(d).or_default().push(maker.make(rng, &r, MentionKind::Entity, 2));
    }
    let mut wd = Vec::new();
    let mut docs: Vec<_> = by_doc.into_iter().collect();
    docs.sort_by_key(|(d, _)| *d);
    for (d, mut mentions) in docs {
        mentions.shuffle(rng);
        while !mentions.is_empty() {
            let take = rng.random_range(1..=mentions.len());
            let rest = mentions.split_off(take);
            wd.push(RawCluster {
                cluster_id: format!("wd{d}_{}", wd.len()),
                kind: ClusterKind::EntityWd,
                mentions,
            });
            mentions = rest;
        }
    }
    wd.shuffle(rng);
    let ids: Vec<String> = wd.iter().flat_map(|c| c.mentions.iter().map(|m| m.mention_id.clone())).collect();
    let mut cd = Vec::new();
    for (i, a) in ids.iter().enumerate() {
        for b in &ids[i + 1..] {
            if rng.random_bool(0.7) {
                let (x, y) = if rng.random_bool(0.5) { (a, b) } else { (b, a) };
                cd.push(PairScore::new(x, y, random_score(rng, dyadic)));
            }
        }
    }
    EntityInstance { corpus, wd, cd }
}
