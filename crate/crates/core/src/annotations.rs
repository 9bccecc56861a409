//! Loading and validating the precomputed pipeline outputs for a topic.
//!
//! Event clusters and within-document entity clusters arrive already
//! clustered; cross-document entity evidence and proposition alignments
//! arrive as pair scores. Missing files yield empty collections.

use std::collections::{HashMap, HashSet};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::corpus::{mention_surface, Corpus, Mention, MentionKind, SentenceRef};
use crate::error::{Error, Result, ValidationError};

pub const EVENT_CLUSTERS_FILE: &str = "event_clusters.jsonl";
pub const ENTITY_WD_CLUSTERS_FILE: &str = "entity_wd_clusters.jsonl";
pub const ENTITY_CD_SCORES_FILE: &str = "entity_cd_scores.jsonl";
pub const PROPOSITIONS_FILE: &str = "propositions.jsonl";
pub const PROPOSITION_ALIGNMENTS_FILE: &str = "proposition_alignments.jsonl";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ClusterKind {
    Event,
    EntityWd,
    Proposition,
}

impl ClusterKind {
    fn mention_kind(self) -> MentionKind {
        match self {
            ClusterKind::Event => MentionKind::Event,
            ClusterKind::EntityWd => MentionKind::Entity,
            ClusterKind::Proposition => MentionKind::Proposition,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawCluster {
    pub cluster_id: String,
    pub kind: ClusterKind,
    pub mentions: Vec<Mention>,
}

/// Score for an unordered mention pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairScore {
    pub mention_a: String,
    pub mention_b: String,
    pub score: f64,
}

impl PairScore {
    pub fn new(a: impl Into<String>, b: impl Into<String>, score: f64) -> Self {
        Self {
            mention_a: a.into(),
            mention_b: b.into(),
            score,
        }
    }

    fn key(&self) -> (String, String) {
        if self.mention_a <= self.mention_b {
            (self.mention_a.clone(), self.mention_b.clone())
        } else {
            (self.mention_b.clone(), self.mention_a.clone())
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct AnnotationBundle {
    pub event_clusters: Vec<RawCluster>,
    pub entity_wd_clusters: Vec<RawCluster>,
    pub entity_cd_scores: Vec<PairScore>,
    pub proposition_mentions: Vec<Mention>,
    pub proposition_alignments: Vec<PairScore>,
}

/// On-disk mention record.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MentionRecord {
    pub mention_id: String,
    pub doc_id: String,
    pub sent_index: usize,
    pub token_start: usize,
    pub token_end: usize,
    pub surface: String,
}

impl MentionRecord {
    fn into_mention(self, kind: MentionKind) -> Mention {
        Mention {
            mention_id: self.mention_id,
            sentence: SentenceRef::new(self.doc_id, self.sent_index),
            token_start: self.token_start,
            token_end: self.token_end,
            surface: self.surface,
            kind,
        }
    }
}

impl From<&Mention> for MentionRecord {
    fn from(m: &Mention) -> Self {
        Self {
            mention_id: m.mention_id.clone(),
            doc_id: m.sentence.doc_id.clone(),
            sent_index: m.sentence.sent_index,
            token_start: m.token_start,
            token_end: m.token_end,
            surface: m.surface.clone(),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct ClusterRecord {
    cluster_id: String,
    mentions: Vec<MentionRecord>,
}

/// Locations of the annotation files; `None` means the file is absent.
#[derive(Debug, Clone, Default)]
pub struct BundlePaths {
    pub event_clusters: Option<PathBuf>,
    pub entity_wd_clusters: Option<PathBuf>,
    pub entity_cd_scores: Option<PathBuf>,
    pub propositions: Option<PathBuf>,
    pub proposition_alignments: Option<PathBuf>,
}

impl BundlePaths {
    /// Standard file names inside a topic directory; files that do not exist are skipped.
    pub fn in_dir(dir: &Path) -> Self {
        let existing = |name: &str| {
            let p = dir.join(name);
            p.is_file().then_some(p)
        };
        Self {
            event_clusters: existing(EVENT_CLUSTERS_FILE),
            entity_wd_clusters: existing(ENTITY_WD_CLUSTERS_FILE),
            entity_cd_scores: existing(ENTITY_CD_SCORES_FILE),
            propositions: existing(PROPOSITIONS_FILE),
            proposition_alignments: existing(PROPOSITION_ALIGNMENTS_FILE),
        }
    }
}

/// Record-at-a-time validation shared by file loading and in-memory checks.
struct Validator<'a> {
    corpus: &'a Corpus,
    defined: HashMap<String, Mention>,
}

impl<'a> Validator<'a> {
    fn new(corpus: &'a Corpus) -> Self {
        Self {
            corpus,
            defined: HashMap::new(),
        }
    }

    fn define(&mut self, m: &Mention) -> Result<(), ValidationError> {
        if self.corpus.document(&m.sentence.doc_id).is_none() {
            return Err(ValidationError::UnknownDocument {
                mention_id: m.mention_id.clone(),
                doc_id: m.sentence.doc_id.clone(),
            });
        }
        mention_surface(self.corpus, m)?;
        if let Some(prev) = self.defined.get(&m.mention_id) {
            // Event clusters may share a mention; the definitions must agree.
            if !(m.kind == MentionKind::Event && prev == m) {
                return Err(ValidationError::DuplicateMention(m.mention_id.clone()));
            }
            return Ok(());
        }
        self.defined.insert(m.mention_id.clone(), m.clone());
        Ok(())
    }

    fn cluster(&mut self, c: &RawCluster) -> Result<(), ValidationError> {
        let first = c
            .mentions
            .first()
            .ok_or_else(|| ValidationError::EmptyCluster(c.cluster_id.clone()))?;
        let mut seen = HashSet::new();
        for m in &c.mentions {
            if m.kind != c.kind.mention_kind() {
                return Err(ValidationError::WrongMentionKind {
                    mention_id: m.mention_id.clone(),
                    expected: c.kind.mention_kind().as_str(),
                    found: m.kind.as_str(),
                });
            }
            if c.kind == ClusterKind::EntityWd && m.sentence.doc_id != first.sentence.doc_id {
                return Err(ValidationError::CrossDocumentCluster {
                    cluster_id: c.cluster_id.clone(),
                    first: first.sentence.doc_id.clone(),
                    second: m.sentence.doc_id.clone(),
                });
            }
            if !seen.insert(&m.mention_id) {
                return Err(ValidationError::DuplicateMention(m.mention_id.clone()));
            }
            self.define(m)?;
        }
        Ok(())
    }

    fn pair(
        &self,
        p: &PairScore,
        kind: MentionKind,
        seen: &mut HashSet<(String, String)>,
    ) -> Result<(), ValidationError> {
        if !(0.0..=1.0).contains(&p.score) {
            return Err(ValidationError::ScoreOutOfRange(p.score));
        }
        if p.mention_a == p.mention_b {
            return Err(ValidationError::SelfPair(p.mention_a.clone()));
        }
        for id in [&p.mention_a, &p.mention_b] {
            let m = self
                .defined
                .get(id)
                .ok_or_else(|| ValidationError::UnknownMention(id.clone()))?;
            if m.kind != kind {
                return Err(ValidationError::WrongMentionKind {
                    mention_id: id.clone(),
                    expected: kind.as_str(),
                    found: m.kind.as_str(),
                });
            }
        }
        let key = p.key();
        if !seen.insert(key.clone()) {
            return Err(ValidationError::DuplicatePair(key.0, key.1));
        }
        Ok(())
    }
}

fn read_records<T, F>(path: &Path, mut each: F) -> Result<()>
where
    T: for<'de> Deserialize<'de>,
    F: FnMut(T, usize) -> Result<(), ValidationError>,
{
    let name = path.display().to_string();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let record: T = serde_json::from_str(&line)
            .map_err(|e| Error::at(&name, i + 1, ValidationError::Malformed(e.to_string())))?;
        each(record, i + 1).map_err(|kind| Error::at(&name, i + 1, kind))?;
    }
    Ok(())
}

/// Loads and fully validates a topic's annotation files against `corpus`.
///
/// Records keep file order. Every defect is reported with its file and line;
/// loading stops at the first one.
pub fn load_bundle(corpus: &Corpus, paths: &BundlePaths) -> Result<AnnotationBundle> {
    let mut bundle = AnnotationBundle::default();
    let mut v = Validator::new(corpus);

    let clusters = [
        (&paths.event_clusters, ClusterKind::Event),
        (&paths.entity_wd_clusters, ClusterKind::EntityWd),
    ];
    for (path, kind) in clusters {
        let Some(path) = path else { continue };
        let mut out = Vec::new();
        read_records(path, |r: ClusterRecord, _| {
            let cluster = RawCluster {
                cluster_id: r.cluster_id,
                kind,
                mentions: r
                    .mentions
                    .into_iter()
                    .map(|m| m.into_mention(kind.mention_kind()))
                    .collect(),
            };
            v.cluster(&cluster)?;
            out.push(cluster);
            Ok(())
        })?;
        match kind {
            ClusterKind::Event => bundle.event_clusters = out,
            _ => bundle.entity_wd_clusters = out,
        }
    }

    if let Some(path) = &paths.propositions {
        read_records(path, |r: MentionRecord, _| {
            let m = r.into_mention(MentionKind::Proposition);
            v.define(&m)?;
            bundle.proposition_mentions.push(m);
            Ok(())
        })?;
    }

    let pairs = [
        (&paths.entity_cd_scores, MentionKind::Entity),
        (&paths.proposition_alignments, MentionKind::Proposition),
    ];
    for (path, kind) in pairs {
        let Some(path) = path else { continue };
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        read_records(path, |p: PairScore, _| {
            v.pair(&p, kind, &mut seen)?;
            out.push(p);
            Ok(())
        })?;
        match kind {
            MentionKind::Entity => bundle.entity_cd_scores = out,
            _ => bundle.proposition_alignments = out,
        }
    }
    Ok(bundle)
}

impl AnnotationBundle {
    /// Runs the load-time checks on an in-memory bundle. Errors name the
    /// collection and 1-based record position in place of file and line.
    pub fn validate(&self, corpus: &Corpus) -> Result<()> {
        let mut v = Validator::new(corpus);
        for (name, clusters) in [
            (EVENT_CLUSTERS_FILE, &self.event_clusters),
            (ENTITY_WD_CLUSTERS_FILE, &self.entity_wd_clusters),
        ] {
            for (i, c) in clusters.iter().enumerate() {
                v.cluster(c).map_err(|k| Error::at(name, i + 1, k))?;
            }
        }
        for (i, m) in self.proposition_mentions.iter().enumerate() {
            if m.kind != MentionKind::Proposition {
                return Err(Error::at(
                    PROPOSITIONS_FILE,
                    i + 1,
                    ValidationError::WrongMentionKind {
                        mention_id: m.mention_id.clone(),
                        expected: MentionKind::Proposition.as_str(),
                        found: m.kind.as_str(),
                    },
                ));
            }
            v.define(m).map_err(|k| Error::at(PROPOSITIONS_FILE, i + 1, k))?;
        }
        for (name, pairs, kind) in [
            (ENTITY_CD_SCORES_FILE, &self.entity_cd_scores, MentionKind::Entity),
            (
                PROPOSITION_ALIGNMENTS_FILE,
                &self.proposition_alignments,
                MentionKind::Proposition,
            ),
        ] {
            let mut seen = HashSet::new();
            for (i, p) in pairs.iter().enumerate() {
                v.pair(p, kind, &mut seen).map_err(|k| Error::at(name, i + 1, k))?;
            }
        }
        Ok(())
    }

    /// Every distinct mention in the bundle, in file order.
    pub fn mentions(&self) -> impl Iterator<Item = &Mention> {
        let mut seen = HashSet::new();
        self.event_clusters
            .iter()
            .chain(&self.entity_wd_clusters)
            .flat_map(|c| &c.mentions)
            .chain(&self.proposition_mentions)
            .filter(move |m| seen.insert(m.mention_id.as_str()))
    }

    pub fn is_empty(&self) -> bool {
        self.event_clusters.is_empty()
            && self.entity_wd_clusters.is_empty()
            && self.proposition_mentions.is_empty()
    }

    /// Writes all five annotation files into `dir`.
    pub fn write_dir(&self, dir: &Path) -> Result<()> {
        fn write<T: Serialize>(dir: &Path, name: &str, records: impl Iterator<Item = T>) -> Result<()> {
            let path = dir.join(name);
            let mut out = std::io::BufWriter::new(
                std::fs::File::create(&path).map_err(|e| Error::io(&path, e))?,
            );
            for r in records {
                serde_json::to_writer(&mut out, &r).map_err(|e| Error::io(&path, e.into()))?;
                out.write_all(b"\n").map_err(|e| Error::io(&path, e))?;
            }
            out.flush().map_err(|e| Error::io(&path, e))
        }
        let clusters = |cs: &Vec<RawCluster>| {
            cs.iter()
                .map(|c| ClusterRecord {
                    cluster_id: c.cluster_id.clone(),
                    mentions: c.mentions.iter().map(MentionRecord::from).collect(),
                })
                .collect::<Vec<_>>()
        };
        write(dir, EVENT_CLUSTERS_FILE, clusters(&self.event_clusters).into_iter())?;
        write(dir, ENTITY_WD_CLUSTERS_FILE, clusters(&self.entity_wd_clusters).into_iter())?;
        write(dir, ENTITY_CD_SCORES_FILE, self.entity_cd_scores.iter())?;
        write(dir, PROPOSITIONS_FILE, self.proposition_mentions.iter().map(MentionRecord::from))?;
        write(dir, PROPOSITION_ALIGNMENTS_FILE, self.proposition_alignments.iter())?;
        Ok(())
    }
}

/// A mention whose stored surface differs from its span text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurfaceMismatch {
    pub mention_id: String,
    pub stored: String,
    pub actual: String,
}

/// Lists every mention whose recorded surface is not the text its span covers.
pub fn validate_surfaces(corpus: &Corpus, bundle: &AnnotationBundle) -> Vec<SurfaceMismatch> {
    bundle
        .mentions()
        .filter_map(|m| {
            let actual = mention_surface(corpus, m).ok()?;
            (actual != m.surface).then(|| SurfaceMismatch {
                mention_id: m.mention_id.clone(),
                stored: m.surface.clone(),
                actual,
            })
        })
        .collect()
}
