//! Manual validation: reproducible sample draws, label records, label-file
//! I/O, and multi-annotator merging.
//!
//! Label files are flat CSV tables so independent annotators can work
//! concurrently and merge later. A paper's final label must be consistent
//! across files: include-vs-exclude disagreement is a hard error, and any
//! doubtful label keeps the paper out of the positive pool until it is
//! relabeled.

pub mod session;

/// Bundled annotation guideline, rendered verbatim in sessions unless the
/// caller supplies another document.
pub const DEFAULT_GUIDELINE: &str = include_str!("../../data/guideline.txt");

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::PaperId;
use crate::rng::stream_rng;
use crate::strategies::RetrievalResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Label {
    Include,
    Exclude,
    /// Non-final; blocks metric computation until resolved.
    Doubtful,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Label::Include => "include",
            Label::Exclude => "exclude",
            Label::Doubtful => "doubtful",
        };
        f.write_str(s)
    }
}

impl FromStr for Label {
    type Err = ValidationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "include" => Ok(Label::Include),
            "exclude" => Ok(Label::Exclude),
            "doubtful" => Ok(Label::Doubtful),
            other => Err(ValidationError::BadField(format!("label {other:?}"))),
        }
    }
}

/// The three kinds of field interaction an included paper can show.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelationType {
    NeuroWithComputational,
    CsWithNeuro,
    CloseInteraction,
}

impl fmt::Display for RelationType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RelationType::NeuroWithComputational => "neuro_with_computational",
            RelationType::CsWithNeuro => "cs_with_neuro",
            RelationType::CloseInteraction => "close_interaction",
        };
        f.write_str(s)
    }
}

impl FromStr for RelationType {
    type Err = ValidationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "neuro_with_computational" => Ok(RelationType::NeuroWithComputational),
            "cs_with_neuro" => Ok(RelationType::CsWithNeuro),
            "close_interaction" => Ok(RelationType::CloseInteraction),
            other => Err(ValidationError::BadField(format!(
                "relation type {other:?}"
            ))),
        }
    }
}

/// One annotator decision for one paper.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelRecord {
    pub paper_id: PaperId,
    pub label: Label,
    /// Required when the label is include.
    pub relation_type: Option<RelationType>,
    pub annotator: String,
    pub note: String,
    pub timestamp: String,
}

impl LabelRecord {
    pub fn validate(&self) -> Result<(), ValidationError> {
        if self.label == Label::Include && self.relation_type.is_none() {
            return Err(ValidationError::MissingRelationType(self.paper_id.clone()));
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum ValidationError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("label file: {0}")]
    Csv(#[from] csv::Error),
    #[error("bad field: {0}")]
    BadField(String),
    #[error("included paper {0} has no relation type")]
    MissingRelationType(PaperId),
    #[error("conflicting final labels:\n{}", format_conflicts(.0))]
    Conflicts(Vec<LabelConflict>),
    #[error("cannot sample from an empty retrieval result")]
    EmptyResult,
    #[error("label for paper {0} which is not in the sample")]
    ForeignLabel(PaperId),
    #[error("sample was drawn from store {expected} but the current store is {actual}")]
    StoreMismatch { expected: String, actual: String },
}

/// One include-vs-exclude disagreement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelConflict {
    pub paper_id: PaperId,
    pub labels: Vec<(String, Label)>,
}

fn format_conflicts(conflicts: &[LabelConflict]) -> String {
    conflicts
        .iter()
        .map(|c| {
            let detail: Vec<String> = c
                .labels
                .iter()
                .map(|(annotator, label)| format!("{annotator}={label}"))
                .collect();
            format!("  {}: {}", c.paper_id, detail.join(", "))
        })
        .collect::<Vec<_>>()
        .join("\n")
}

const LABEL_HEADER: [&str; 6] = [
    "paper_id",
    "label",
    "relation_type",
    "annotator",
    "note",
    "timestamp",
];

/// Write a label table (CSV with header).
pub fn write_labels<W: Write>(out: W, labels: &[LabelRecord]) -> Result<(), ValidationError> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(LABEL_HEADER)?;
    for rec in labels {
        rec.validate()?;
        writer.write_record([
            rec.paper_id.as_str(),
            &rec.label.to_string(),
            &rec.relation_type.map(|r| r.to_string()).unwrap_or_default(),
            &rec.annotator,
            &rec.note,
            &rec.timestamp,
        ])?;
    }
    writer.flush()?;
    Ok(())
}

/// Read a label table written by [`write_labels`].
pub fn read_labels<R: Read>(input: R) -> Result<Vec<LabelRecord>, ValidationError> {
    let mut reader = csv::Reader::from_reader(input);
    let mut out = Vec::new();
    for row in reader.records() {
        let row = row?;
        let get = |i: usize| row.get(i).unwrap_or("").to_string();
        let relation = {
            let raw = get(2);
            if raw.is_empty() {
                None
            } else {
                Some(RelationType::from_str(&raw)?)
            }
        };
        let rec = LabelRecord {
            paper_id: PaperId(get(0)),
            label: Label::from_str(&get(1))?,
            relation_type: relation,
            annotator: get(3),
            note: get(4),
            timestamp: get(5),
        };
        rec.validate()?;
        out.push(rec);
    }
    Ok(out)
}

/// Per-paper final label across annotators: identical labels merge, any
/// doubtful makes the paper doubtful, include-vs-exclude is a conflict.
/// Returns every conflict at once.
pub fn resolve_labels(labels: &[LabelRecord]) -> Result<BTreeMap<PaperId, Label>, ValidationError> {
    let mut per_paper: BTreeMap<PaperId, Vec<&LabelRecord>> = BTreeMap::new();
    for rec in labels {
        per_paper.entry(rec.paper_id.clone()).or_default().push(rec);
    }
    let mut resolved = BTreeMap::new();
    let mut conflicts = Vec::new();
    for (paper, recs) in per_paper {
        let has_include = recs.iter().any(|r| r.label == Label::Include);
        let has_exclude = recs.iter().any(|r| r.label == Label::Exclude);
        let has_doubtful = recs.iter().any(|r| r.label == Label::Doubtful);
        if has_include && has_exclude {
            conflicts.push(LabelConflict {
                paper_id: paper.clone(),
                labels: recs
                    .iter()
                    .map(|r| (r.annotator.clone(), r.label))
                    .collect(),
            });
            continue;
        }
        let label = if has_doubtful {
            Label::Doubtful
        } else if has_include {
            Label::Include
        } else {
            Label::Exclude
        };
        resolved.insert(paper, label);
    }
    if !conflicts.is_empty() {
        return Err(ValidationError::Conflicts(conflicts));
    }
    Ok(resolved)
}

/// Consolidated label table plus the positive pool.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergedLabels {
    /// One representative record per paper, sorted by paper id.
    pub records: Vec<LabelRecord>,
    /// Distinct papers resolved include.
    pub positive_pool: BTreeSet<PaperId>,
    /// Papers flagged doubtful anywhere; excluded from the pool until
    /// relabeled.
    pub doubtful: BTreeSet<PaperId>,
}

/// Merge label files from independent annotators.
pub fn merge_labels(label_sets: &[Vec<LabelRecord>]) -> Result<MergedLabels, ValidationError> {
    let all: Vec<LabelRecord> = label_sets.iter().flatten().cloned().collect();
    let resolution = resolve_labels(&all)?;
    let mut records = Vec::new();
    let mut positive_pool = BTreeSet::new();
    let mut doubtful = BTreeSet::new();
    for (paper, label) in &resolution {
        // representative: first record carrying the resolved label
        let rep = all
            .iter()
            .find(|r| &r.paper_id == paper && r.label == *label)
            .expect("resolved label comes from some record")
            .clone();
        records.push(rep);
        match label {
            Label::Include => {
                positive_pool.insert(paper.clone());
            }
            Label::Doubtful => {
                doubtful.insert(paper.clone());
            }
            Label::Exclude => {}
        }
    }
    Ok(MergedLabels {
        records,
        positive_pool,
        doubtful,
    })
}

/// A reproducible random sample from one strategy's retrieved set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleDraw {
    pub strategy: String,
    pub n_requested: usize,
    pub seed: u64,
    pub result_fingerprint: String,
    pub store_fingerprint: String,
    /// Sampled ids in presentation order; `min(n, |retrieved|)` entries,
    /// no duplicates.
    pub sample: Vec<PaperId>,
}

impl SampleDraw {
    pub fn write_json<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        serde_json::to_writer_pretty(&mut out, self)?;
        out.write_all(b"\n")
    }

    pub fn read_json<R: Read>(reader: R) -> Result<Self, serde_json::Error> {
        serde_json::from_reader(reader)
    }
}

/// Draw a uniform sample without replacement from a retrieval result.
///
/// The retrieved universe is sorted before sampling, so the draw depends
/// only on (result fingerprint, n, seed), never on store iteration order.
/// A result smaller than `n` comes back whole, with a warning.
pub fn draw_sample(
    result: &RetrievalResult,
    n: usize,
    seed: u64,
) -> Result<SampleDraw, ValidationError> {
    if result.is_empty() {
        return Err(ValidationError::EmptyResult);
    }
    let universe: Vec<&PaperId> = result.retrieved.iter().collect();
    let k = n.min(universe.len());
    if k < n {
        log::warn!(
            "requested {n} papers from {} retrieved; returning all {}",
            universe.len(),
            universe.len()
        );
    }
    let mut rng = stream_rng(seed, 0);
    let picked = rand::seq::index::sample(&mut rng, universe.len(), k);
    let sample: Vec<PaperId> = picked.iter().map(|i| universe[i].clone()).collect();
    Ok(SampleDraw {
        strategy: result.strategy_label(),
        n_requested: n,
        seed,
        result_fingerprint: result.fingerprint(),
        store_fingerprint: result.metadata.store_fingerprint.clone(),
        sample,
    })
}
