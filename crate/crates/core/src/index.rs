//! A built topic: corpus plus facet tables, with lookups for exploration.
//!
//! The binary form is a magic header followed by a bincode payload. The
//! JSONL form is for inspection only: one header line, then one line per
//! facet-value.

use std::collections::HashMap;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::annotations::{load_bundle, validate_surfaces, AnnotationBundle, BundlePaths, MentionRecord};
use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::facets::{build_facets, ClusteringConfig, EntityCategory, FacetKind, FacetTables, FacetValue};

const MAGIC: &[u8; 8] = b"FNAVIDX\x01";

pub const DOCUMENTS_FILE: &str = "documents.jsonl";
pub const TOPIC_META_FILE: &str = "topic.json";

#[derive(Debug, Serialize, Deserialize)]
struct Stored {
    topic_id: String,
    display_name: String,
    config: ClusteringConfig,
    corpus: Corpus,
    facets: FacetTables,
}

#[derive(Debug, Default, Deserialize)]
struct TopicMeta {
    #[serde(default)]
    display_name: Option<String>,
}

/// Per-value positions, in global sentence ordinals.
#[derive(Debug, Clone)]
pub(crate) struct ValuePostings {
    /// Sentence ordinal of each mention, in mention order.
    pub(crate) mention_sentences: Vec<u32>,
    /// Distinct sentence ordinals, ascending.
    pub(crate) sentences: Vec<u32>,
}

#[derive(Debug)]
pub struct TopicIndex {
    stored: Stored,
    by_id: HashMap<String, (FacetKind, usize)>,
    postings: HashMap<String, ValuePostings>,
}

impl TopicIndex {
    pub fn new(
        topic_id: impl Into<String>,
        display_name: impl Into<String>,
        corpus: Corpus,
        facets: FacetTables,
        config: ClusteringConfig,
    ) -> Result<Self> {
        Self::from_stored(Stored {
            topic_id: topic_id.into(),
            display_name: display_name.into(),
            config,
            corpus,
            facets,
        })
    }

    /// Forms facets from an annotation bundle.
    pub fn build(
        topic_id: impl Into<String>,
        display_name: impl Into<String>,
        corpus: Corpus,
        bundle: &AnnotationBundle,
        config: &ClusteringConfig,
    ) -> Result<Self> {
        let facets = build_facets(&corpus, bundle, config)?;
        Self::new(topic_id, display_name, corpus, facets, config.clone())
    }

    /// Loads `documents.jsonl` and the annotation files from a topic
    /// directory and builds its index. Surface mismatches are an error unless
    /// `force` is set.
    pub fn build_dir(dir: &Path, config: &ClusteringConfig, force: bool) -> Result<Self> {
        let topic_id = dir
            .canonicalize()
            .ok()
            .and_then(|p| p.file_name().map(|n| n.to_string_lossy().into_owned()))
            .unwrap_or_else(|| "topic".to_string());
        let meta_path = dir.join(TOPIC_META_FILE);
        let meta: TopicMeta = if meta_path.is_file() {
            let text = std::fs::read_to_string(&meta_path).map_err(|e| Error::io(&meta_path, e))?;
            serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", meta_path.display())))?
        } else {
            TopicMeta::default()
        };
        let corpus = Corpus::load(&dir.join(DOCUMENTS_FILE))?;
        let bundle = load_bundle(&corpus, &BundlePaths::in_dir(dir))?;
        let mismatches = validate_surfaces(&corpus, &bundle);
        if !force {
            if let Some(first) = mismatches.first() {
                return Err(Error::SurfaceMismatch {
                    count: mismatches.len(),
                    first: format!("{} stores {:?} but spans {:?}", first.mention_id, first.stored, first.actual),
                });
            }
        }
        let display_name = meta.display_name.unwrap_or_else(|| topic_id.clone());
        Self::build(topic_id, display_name, corpus, &bundle, config)
    }

    fn from_stored(stored: Stored) -> Result<Self> {
        let mut by_id = HashMap::new();
        let mut postings = HashMap::new();
        for kind in FacetKind::ALL {
            for (i, v) in stored.facets.facet(kind).iter().enumerate() {
                if by_id.insert(v.value_id.clone(), (kind, i)).is_some() {
                    return Err(Error::Index(format!("duplicate value id {}", v.value_id)));
                }
                let mention_sentences = v
                    .mentions
                    .iter()
                    .map(|m| {
                        stored
                            .corpus
                            .ordinal(&m.sentence)
                            .map(|o| o as u32)
                            .ok_or_else(|| Error::Index(format!("mention {} has no sentence", m.mention_id)))
                    })
                    .collect::<Result<Vec<u32>>>()?;
                let mut sentences = mention_sentences.clone();
                sentences.sort_unstable();
                sentences.dedup();
                postings.insert(
                    v.value_id.clone(),
                    ValuePostings {
                        mention_sentences,
                        sentences,
                    },
                );
            }
        }
        Ok(Self {
            stored,
            by_id,
            postings,
        })
    }

    pub fn topic_id(&self) -> &str {
        &self.stored.topic_id
    }

    pub fn display_name(&self) -> &str {
        &self.stored.display_name
    }

    pub fn corpus(&self) -> &Corpus {
        &self.stored.corpus
    }

    pub fn facets(&self) -> &FacetTables {
        &self.stored.facets
    }

    pub fn config(&self) -> &ClusteringConfig {
        &self.stored.config
    }

    pub fn value(&self, value_id: &str) -> Result<&FacetValue> {
        let &(kind, i) = self
            .by_id
            .get(value_id)
            .ok_or_else(|| Error::UnknownValue(value_id.to_string()))?;
        Ok(&self.stored.facets.facet(kind)[i])
    }

    pub(crate) fn postings(&self, value_id: &str) -> Result<&ValuePostings> {
        self.postings
            .get(value_id)
            .ok_or_else(|| Error::UnknownValue(value_id.to_string()))
    }

    /// Resolves a value id, or failing that a case-insensitive label. Labels
    /// shared by several values resolve to the first in presentation order.
    pub fn resolve(&self, key: &str) -> Result<&FacetValue> {
        if let Ok(v) = self.value(key) {
            return Ok(v);
        }
        let folded = key.to_lowercase();
        self.stored
            .facets
            .values()
            .find(|v| v.label.to_lowercase() == folded)
            .ok_or_else(|| Error::UnknownValue(key.to_string()))
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        let mut out = MAGIC.to_vec();
        bincode::serialize_into(&mut out, &self.stored).map_err(|e| Error::Index(e.to_string()))?;
        Ok(out)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let payload = bytes
            .strip_prefix(MAGIC.as_slice())
            .ok_or_else(|| Error::Index("not a facet index (bad magic)".into()))?;
        let stored: Stored = bincode::deserialize(payload).map_err(|e| Error::Index(e.to_string()))?;
        Self::from_stored(stored)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let bytes = self.to_bytes()?;
        std::fs::write(path, bytes).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let mut bytes = Vec::new();
        std::fs::File::open(path)
            .and_then(|mut f| f.read_to_end(&mut bytes))
            .map_err(|e| Error::io(path, e))?;
        Self::from_bytes(&bytes)
    }

    /// Writes the diagnostic JSONL form.
    pub fn write_jsonl<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let header = serde_json::json!({
            "topic_id": self.topic_id(),
            "display_name": self.display_name(),
            "documents": self.corpus().documents().len(),
            "sentences": self.corpus().sentence_count(),
            "config": self.config(),
        });
        serde_json::to_writer(&mut out, &header)?;
        out.write_all(b"\n")?;
        for v in self.facets().values() {
            let line = DiagnosticValue {
                value_id: &v.value_id,
                facet: v.facet,
                label: &v.label,
                category: v.category,
                frequency: v.frequency(),
                sentence_count: self.postings[&v.value_id].sentences.len(),
                mentions: v.mentions.iter().map(MentionRecord::from).collect(),
            };
            serde_json::to_writer(&mut out, &line)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct DiagnosticValue<'a> {
    value_id: &'a str,
    facet: FacetKind,
    label: &'a str,
    category: Option<EntityCategory>,
    frequency: usize,
    sentence_count: usize,
    mentions: Vec<MentionRecord>,
}
