mod support;

use std::collections::{BTreeSet, HashMap};

use facetnav_core::facets::{
    agglomerative_entity_clustering, filter_verbal_event_clusters, merge_same_label_event_clusters,
    proposition_clusters, FacetCandidate,
};
use facetnav_core::summarize::{extractive_summary, InputSentence};
use facetnav_core::{
    build_facets, intersect, refresh_facets, ClusteringConfig, FacetKind, Mention, MentionKind, Pos, Selection,
    SentenceRef, TopicIndex,
};
use proptest::prelude::*;
use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;
use support::*;

fn config() -> ProptestConfig {
    ProptestConfig::with_cases(128)
}

fn index_of(seed: u64, cfg: &ClusteringConfig) -> TopicIndex {
    let (corpus, bundle) = random_topic(&mut rng(seed));
    TopicIndex::build("t", "t", corpus, &bundle, cfg).unwrap()
}

fn flat_positions(wd: &[facetnav_core::RawCluster]) -> HashMap<String, usize> {
    wd.iter()
        .flat_map(|c| &c.mentions)
        .enumerate()
        .map(|(i, m)| (m.mention_id.clone(), i))
        .collect()
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn propositions_match_transitive_closure(seed in any::<u64>(), n in 1usize..40, threshold in 0.0f64..1.0) {
        let mut r = rng(seed);
        let props: Vec<Mention> = (0..n)
            .map(|i| Mention {
                mention_id: format!("P{i:02}"),
                sentence: SentenceRef::new("d", i),
                token_start: 0,
                token_end: 0,
                surface: format!("p{i}"),
                kind: MentionKind::Proposition,
            })
            .collect();
        let mut edges = Vec::new();
        let mut alignments = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if r.random_bool(0.1) {
                    let s = r.random::<f64>();
                    edges.push((a, b, s));
                    alignments.push(facetnav_core::PairScore::new(&props[a].mention_id, &props[b].mention_id, s));
                }
            }
        }
        let cfg = ClusteringConfig { alignment_threshold: threshold, ..Default::default() };
        let got: Vec<Vec<usize>> = proposition_clusters(&props, &alignments, &cfg)
            .iter()
            .map(|c| c.iter().map(|m| m.sentence.sent_index).collect())
            .collect();
        prop_assert_eq!(got, closure_components(n, &edges, threshold));
    }

    #[test]
    fn agglomerative_matches_reference(seed in any::<u64>(), dyadic in any::<bool>()) {
        let mut r = rng(seed);
        let inst = random_entity_instance(&mut r, 10, dyadic);
        let threshold = [0.25, 0.5, 0.75, 1.0].choose(&mut r).copied().unwrap();
        let cfg = ClusteringConfig { cd_merge_threshold: threshold, ..Default::default() };
        let pos = flat_positions(&inst.wd);
        let ids: Vec<String> = inst.wd.iter().flat_map(|c| c.mentions.iter().map(|m| m.mention_id.clone())).collect();
        let n = ids.len();
        let mut sim = vec![vec![0.0f64; n]; n];
        let mut partition = Vec::new();
        for c in &inst.wd {
            let members: Vec<usize> = c.mentions.iter().map(|m| pos[&m.mention_id]).collect();
            for &a in &members {
                for &b in &members {
                    sim[a][b] = 1.0;
                }
            }
            partition.push(members);
        }
        for p in &inst.cd {
            let (a, b) = (pos[&p.mention_a], pos[&p.mention_b]);
            let s = sim[a][b].max(p.score);
            sim[a][b] = s;
            sim[b][a] = s;
        }
        let mut got: Vec<Vec<usize>> = agglomerative_entity_clustering(&inst.wd, &inst.cd, &cfg)
            .iter()
            .map(|c| {
                let mut v: Vec<usize> = c.iter().map(|m| pos[&m.mention_id]).collect();
                v.sort_unstable();
                v
            })
            .collect();
        got.sort();
        prop_assert_eq!(got, reference_average_linkage(&ids, &sim, &partition, threshold));
    }

    #[test]
    fn wd_clusters_never_split(seed in any::<u64>()) {
        let (corpus, bundle) = random_topic(&mut rng(seed));
        let facets = build_facets(&corpus, &bundle, &ClusteringConfig::default()).unwrap();
        let owner: HashMap<&str, &str> = facets
            .entities
            .iter()
            .flat_map(|v| v.mentions.iter().map(move |m| (m.mention_id.as_str(), v.value_id.as_str())))
            .collect();
        for c in &bundle.entity_wd_clusters {
            let owners: BTreeSet<Option<&&str>> = c.mentions.iter().map(|m| owner.get(m.mention_id.as_str())).collect();
            prop_assert_eq!(owners.len(), 1, "cluster {} split", c.cluster_id);
        }
    }

    #[test]
    fn survivors_pass_every_filter(seed in any::<u64>(), strict in any::<bool>()) {
        let cfg = ClusteringConfig { verb_filter_statements: strict, ..Default::default() };
        let index = index_of(seed, &cfg);
        for v in index.facets().values() {
            prop_assert!(v.mentions.len() <= 50);
            let sentences: BTreeSet<&SentenceRef> = v.mentions.iter().map(|m| &m.sentence).collect();
            prop_assert!(sentences.len() >= 2);
            prop_assert!(v.label.chars().count() > 2);
            if v.facet != FacetKind::Statements || strict {
                let m = v.mentions.iter().find(|m| m.surface == v.label).unwrap();
                let s = index.corpus().sentence(&m.sentence).unwrap();
                prop_assert!(s.tokens[m.token_start..=m.token_end].iter().all(|t| t.pos != Pos::Verb));
            }
        }
    }

    #[test]
    fn concept_labels_are_unique(seed in any::<u64>()) {
        let index = index_of(seed, &ClusteringConfig::default());
        let labels: BTreeSet<&str> = index.facets().concepts.iter().map(|v| v.label.as_str()).collect();
        prop_assert_eq!(labels.len(), index.facets().concepts.len());
    }

    #[test]
    fn same_label_merge_is_idempotent(seed in any::<u64>()) {
        let (corpus, bundle) = random_topic(&mut rng(seed));
        let kept = filter_verbal_event_clusters(&corpus, bundle.event_clusters.clone());
        let cands: Vec<FacetCandidate> = kept
            .into_iter()
            .map(|c| FacetCandidate {
                label: facetnav_core::facets::cluster_label(&c.mentions, FacetKind::Concepts),
                mentions: c.mentions,
                category: None,
            })
            .collect();
        let once = merge_same_label_event_clusters(cands);
        let twice = merge_same_label_event_clusters(once.clone());
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn intersection_laws(seed in any::<u64>()) {
        let mut r = rng(seed);
        let index = index_of(seed, &ClusteringConfig::default());
        let ids: Vec<String> = index.facets().values().map(|v| v.value_id.clone()).collect();
        let k = r.random_range(0..=ids.len().min(4));
        let picked: Vec<String> = ids.choose_multiple(&mut r, k).cloned().collect();
        let sel = Selection::new(&index, picked.clone()).unwrap();
        let set = intersect(&index, &sel).unwrap();
        prop_assert_eq!(set.refs(&index), brute_intersection(&index, &picked));

        let mut shuffled = picked.clone();
        shuffled.shuffle(&mut r);
        let permuted = Selection::new(&index, shuffled).unwrap();
        prop_assert_eq!(&intersect(&index, &permuted).unwrap(), &set);
        prop_assert_eq!(refresh_facets(&index, &permuted).unwrap(), refresh_facets(&index, &sel).unwrap());

        if let Some(extra) = ids.iter().find(|id| !picked.contains(id)) {
            let bigger = sel.toggled(&index, extra).unwrap();
            let sub = intersect(&index, &bigger).unwrap();
            prop_assert!(sub.ordinals().iter().all(|&o| set.contains(o)));
        }
    }

    #[test]
    fn build_is_deterministic(seed in any::<u64>()) {
        let cfg = ClusteringConfig::default();
        prop_assert_eq!(index_of(seed, &cfg).to_bytes().unwrap(), index_of(seed, &cfg).to_bytes().unwrap());
    }

    #[test]
    fn extractive_respects_budget(tokens in prop::collection::vec((1usize..60, 0usize..4), 1..50), budget in 1usize..150) {
        let inputs: Vec<InputSentence> = tokens
            .iter()
            .enumerate()
            .map(|(i, &(t, m))| InputSentence {
                sentence: SentenceRef::new("d", i),
                text: String::new(),
                tokens: t,
                selected_mentions: m,
            })
            .collect();
        let picked = extractive_summary(&inputs, budget);
        prop_assert!(!picked.is_empty());
        prop_assert!(picked.windows(2).all(|w| w[0] < w[1]));
        let used: usize = picked.iter().map(|&i| inputs[i].tokens).sum();
        prop_assert!(picked.len() == 1 || used <= budget);
        // Nothing left out would still fit.
        for (i, input) in inputs.iter().enumerate() {
            if !picked.contains(&i) {
                prop_assert!(used + input.tokens > budget);
            }
        }
    }
}

#[test]
fn generator_exercises_every_facet_and_filter() {
    let mut survivors = [0usize; 3];
    let mut oversized = 0;
    for seed in 0..200 {
        let index = index_of(seed, &ClusteringConfig::default());
        for (i, kind) in FacetKind::ALL.into_iter().enumerate() {
            survivors[i] += index.facets().facet(kind).len();
        }
        let (_, bundle) = random_topic(&mut rng(seed));
        oversized += bundle.event_clusters.iter().filter(|c| c.mentions.len() > 50).count();
    }
    assert!(survivors.iter().all(|&n| n > 20), "{survivors:?}");
    assert!(oversized > 0);
}
