//! Synthetic workloads shaped like a demo topic: a few dozen news documents
//! with tens of sentences each and a few hundred facet values.

use std::collections::BTreeSet;

use facetnav_core::annotations::{ClusterKind, PairScore, RawCluster};
use facetnav_core::{
    AnnotationBundle, ClusteringConfig, Corpus, Document, Mention, MentionKind, NerTag, Pos, Sentence,
    SentenceRef, Token, TopicIndex,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const VOCAB: usize = 400;

fn sentence(rng: &mut StdRng) -> Sentence {
    let len = rng.random_range(8..30);
    let tokens: Vec<Token> = (0..len)
        .map(|i| Token {
            text: format!("w{}", rng.random_range(0..VOCAB)),
            ws: i + 1 < len,
            pos: if rng.random_bool(0.2) { Pos::Verb } else { Pos::Noun },
            ner: NerTag::None,
        })
        .collect();
    let text = tokens.iter().map(|t| t.text.as_str()).collect::<Vec<_>>().join(" ");
    Sentence { text, tokens }
}

pub fn corpus(rng: &mut StdRng, docs: usize, sentences: usize) -> Corpus {
    let docs = (0..docs)
        .map(|d| Document {
            doc_id: format!("D{d:03}"),
            title: String::new(),
            sentences: (0..sentences).map(|_| sentence(rng)).collect(),
        })
        .collect();
    Corpus::new(docs).expect("generated corpus is valid")
}

fn mention(corpus: &Corpus, r: SentenceRef, id: String, kind: MentionKind) -> Mention {
    let s = corpus.sentence(&r).expect("generated ref");
    let start = (id.len() * 7) % s.tokens.len();
    Mention {
        mention_id: id,
        surface: s.tokens[start].text.clone(),
        sentence: r,
        token_start: start,
        token_end: start,
        kind,
    }
}

fn random_ref(rng: &mut StdRng, corpus: &Corpus) -> SentenceRef {
    corpus.sentence_ref(rng.random_range(0..corpus.sentence_count()))
}

/// A built topic with roughly `values` values per facet.
pub fn topic(seed: u64, docs: usize, sentences: usize, values: usize) -> TopicIndex {
    let mut rng = StdRng::seed_from_u64(seed);
    let corpus = corpus(&mut rng, docs, sentences);
    let mut bundle = AnnotationBundle::default();
    let mut next = 0;
    let mut id = |prefix: &str| {
        next += 1;
        format!("{prefix}{next:06}")
    };

    for c in 0..values {
        let n = rng.random_range(2..30);
        let mentions = (0..n)
            .map(|_| mention(&corpus, random_ref(&mut rng, &corpus), id("v"), MentionKind::Event))
            .collect();
        bundle.event_clusters.push(RawCluster {
            cluster_id: format!("ev{c}"),
            kind: ClusterKind::Event,
            mentions,
        });
    }

    let mut entity_ids = Vec::new();
    for c in 0..values * 2 {
        let doc = &corpus.documents()[rng.random_range(0..docs)].doc_id.clone();
        let n = rng.random_range(1..5);
        let mentions: Vec<Mention> = (0..n)
            .map(|_| {
                let r = SentenceRef::new(doc, rng.random_range(0..sentences));
                mention(&corpus, r, id("m"), MentionKind::Entity)
            })
            .collect();
        entity_ids.push(mentions[0].mention_id.clone());
        bundle.entity_wd_clusters.push(RawCluster {
            cluster_id: format!("wd{c}"),
            kind: ClusterKind::EntityWd,
            mentions,
        });
    }
    let mut pairs = BTreeSet::new();
    for _ in 0..entity_ids.len() * 3 {
        let a = rng.random_range(0..entity_ids.len());
        let b = rng.random_range(0..entity_ids.len());
        if a != b {
            pairs.insert((a.min(b), a.max(b)));
        }
    }
    for (a, b) in pairs {
        bundle
            .entity_cd_scores
            .push(PairScore::new(&entity_ids[a], &entity_ids[b], rng.random()));
    }

    TopicIndex::build("bench", "Bench", corpus, &bundle, &ClusteringConfig::default()).expect("build")
}

/// `mentions` entity mentions in within-document clusters of one to three,
/// with a cross-document score for each pair with probability `density`.
pub fn entity_workload(seed: u64, mentions: usize, density: f64) -> (Vec<RawCluster>, Vec<PairScore>) {
    let mut rng = StdRng::seed_from_u64(seed);
    let corpus = corpus(&mut rng, 25, 4);
    let mut wd = Vec::new();
    let mut made = 0;
    while made < mentions {
        let doc = corpus.documents()[rng.random_range(0..25)].doc_id.clone();
        let n = rng.random_range(1..=3).min(mentions - made);
        let ms = (0..n)
            .map(|i| {
                let r = SentenceRef::new(&doc, rng.random_range(0..4));
                mention(&corpus, r, format!("m{:05}", made + i), MentionKind::Entity)
            })
            .collect();
        made += n;
        wd.push(RawCluster {
            cluster_id: format!("wd{}", wd.len()),
            kind: ClusterKind::EntityWd,
            mentions: ms,
        });
    }
    let mut cd = Vec::new();
    for a in 0..mentions {
        for b in a + 1..mentions {
            if rng.random_bool(density) {
                cd.push(PairScore::new(format!("m{a:05}"), format!("m{b:05}"), rng.random()));
            }
        }
    }
    (wd, cd)
}
