//! Synthetic bibliographic corpora with planted interdisciplinary papers.
//!
//! The generative model is deliberately simple: categorical keyword draws
//! and Bernoulli cross-links. It exists to exercise the machinery with a
//! known ground truth, not to model science; strategy rankings measured on
//! synthetic data say nothing about real corpora.
//!
//! Two synthetic fields, "alpha" and "beta", are resolvable through the
//! same journal rules as real corpora (title wildcards plus specialty
//! labels). A configurable share of papers is planted as genuinely
//! interdisciplinary: those draw keywords from both vocabularies and
//! reference across fields at an elevated rate. Planting is exact-quota
//! (`round(fraction * n)` papers) for test determinism.

pub mod oracle;

use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, Write};

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{CorpusStore, FieldDefinition, JournalId, JournalRecord, PaperId, PaperRecord};
use crate::lexicon::{Lexicon, LexiconProvenance};
use crate::numeric::{real_from_usize, Real};
use crate::rng::stream_rng;
use crate::strategies::RetrievalResult;

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("infeasible generator config: {0}")]
    InfeasibleConfig(String),
    #[error("ground truth contains no planted papers; recall is undefined")]
    NoPlantedPapers,
    #[error("ground truth does not cover paper {0}")]
    UncoveredPaper(PaperId),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("truth file: {0}")]
    Csv(#[from] csv::Error),
}

/// Generator parameters. All probabilities in [0, 1].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GenConfig {
    pub n_field_a: usize,
    pub n_field_b: usize,
    pub n_background: usize,
    pub journals_per_field: usize,
    pub background_journals: usize,
    pub year_min: i32,
    pub year_max: i32,
    pub vocab_a_size: usize,
    pub vocab_b_size: usize,
    pub vocab_background_size: usize,
    /// Inclusive (min, max) keywords per paper.
    pub keywords_per_paper: (usize, usize),
    /// Probability that a planted paper draws a keyword from the other
    /// side's vocabulary.
    pub planted_cross_keyword_prob: f64,
    /// Inclusive (min, max) reference draws per paper; actual counts can
    /// fall short when earlier papers are scarce.
    pub refs_per_paper: (usize, usize),
    pub cross_ref_prob_planted: f64,
    pub cross_ref_prob_normal: f64,
    /// Share of all papers planted as interdisciplinary, exact quota.
    pub planted_fraction: f64,
    pub seed: u64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            n_field_a: 1000,
            n_field_b: 1000,
            n_background: 500,
            journals_per_field: 20,
            background_journals: 10,
            year_min: 1995,
            year_max: 2020,
            vocab_a_size: 60,
            vocab_b_size: 60,
            vocab_background_size: 40,
            keywords_per_paper: (3, 8),
            planted_cross_keyword_prob: 0.5,
            refs_per_paper: (2, 12),
            cross_ref_prob_planted: 0.45,
            cross_ref_prob_normal: 0.05,
            planted_fraction: 0.1,
            seed: 7,
        }
    }
}

impl GenConfig {
    pub fn total_papers(&self) -> usize {
        self.n_field_a + self.n_field_b + self.n_background
    }

    pub fn validate(&self) -> Result<(), SynthError> {
        let probs = [
            (
                "planted_cross_keyword_prob",
                self.planted_cross_keyword_prob,
            ),
            ("cross_ref_prob_planted", self.cross_ref_prob_planted),
            ("cross_ref_prob_normal", self.cross_ref_prob_normal),
            ("planted_fraction", self.planted_fraction),
        ];
        for (name, p) in probs {
            if !(0.0..=1.0).contains(&p) {
                return Err(SynthError::InfeasibleConfig(format!(
                    "{name} = {p} outside [0, 1]"
                )));
            }
        }
        if self.total_papers() == 0 {
            return Err(SynthError::InfeasibleConfig("no papers requested".into()));
        }
        if self.year_min > self.year_max {
            return Err(SynthError::InfeasibleConfig("year_min > year_max".into()));
        }
        if self.keywords_per_paper.0 > self.keywords_per_paper.1 {
            return Err(SynthError::InfeasibleConfig(
                "keywords_per_paper min > max".into(),
            ));
        }
        if self.refs_per_paper.0 > self.refs_per_paper.1 {
            return Err(SynthError::InfeasibleConfig(
                "refs_per_paper min > max".into(),
            ));
        }
        if self.refs_per_paper.0 >= self.total_papers() {
            return Err(SynthError::InfeasibleConfig(format!(
                "minimum reference count {} exceeds available earlier papers",
                self.refs_per_paper.0
            )));
        }
        if (self.n_field_a > 0 || self.n_field_b > 0) && self.journals_per_field == 0 {
            return Err(SynthError::InfeasibleConfig(
                "field papers requested but journals_per_field = 0".into(),
            ));
        }
        if self.n_background > 0 && self.background_journals == 0 {
            return Err(SynthError::InfeasibleConfig(
                "background papers requested but background_journals = 0".into(),
            ));
        }
        if (self.n_field_a > 0 && self.vocab_a_size == 0)
            || (self.n_field_b > 0 && self.vocab_b_size == 0)
            || (self.n_background > 0 && self.vocab_background_size == 0)
        {
            return Err(SynthError::InfeasibleConfig(
                "papers requested with an empty keyword vocabulary".into(),
            ));
        }
        Ok(())
    }
}

/// Which planted flag each generated paper carries, plus summary counts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub planted: BTreeMap<PaperId, bool>,
    pub log: GenLog,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenLog {
    pub total_papers: usize,
    pub planted_count: usize,
    pub field_a_papers: usize,
    pub field_b_papers: usize,
    pub background_papers: usize,
    pub seed: u64,
}

impl GroundTruth {
    pub fn planted_set(&self) -> BTreeSet<PaperId> {
        self.planted
            .iter()
            .filter(|(_, v)| **v)
            .map(|(k, _)| k.clone())
            .collect()
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Group {
    FieldA,
    FieldB,
    Background,
}

fn paper_id(i: usize) -> PaperId {
    PaperId(format!("P{i:05}"))
}

/// Keyword vocabulary for field alpha.
pub fn vocab_a(config: &GenConfig) -> Vec<String> {
    (0..config.vocab_a_size)
        .map(|i| format!("alpha term {i:03}"))
        .collect()
}

/// Keyword vocabulary for field beta.
pub fn vocab_b(config: &GenConfig) -> Vec<String> {
    (0..config.vocab_b_size)
        .map(|i| format!("beta term {i:03}"))
        .collect()
}

/// Keyword vocabulary shared by background papers.
pub fn vocab_background(config: &GenConfig) -> Vec<String> {
    (0..config.vocab_background_size)
        .map(|i| format!("common term {i:03}"))
        .collect()
}

fn lexicon_from_vocab(field_name: &str, words: &[String]) -> Lexicon {
    Lexicon {
        field_name: field_name.to_string(),
        keywords: words
            .iter()
            .map(|w| crate::lexicon::normalize_keyword(w))
            .collect(),
        provenance: LexiconProvenance {
            source: format!("synthetic:{field_name}"),
            exclusions_applied: 0,
            cap: words.len().max(1),
            shortfall: false,
        },
    }
}

/// Full-vocabulary lexicon for field alpha.
pub fn lexicon_a(config: &GenConfig) -> Lexicon {
    lexicon_from_vocab("alpha", &vocab_a(config))
}

/// Full-vocabulary lexicon for field beta.
pub fn lexicon_b(config: &GenConfig) -> Lexicon {
    lexicon_from_vocab("beta", &vocab_b(config))
}

/// The field definitions matching the generator's journal conventions.
/// Both rule paths are exercised: even-indexed journals match by title
/// wildcard, odd-indexed ones only by specialty label.
pub fn field_definitions() -> (FieldDefinition, FieldDefinition) {
    (
        FieldDefinition::new("alpha")
            .with_wildcards(&["alpha*"])
            .with_specialties(&["Alpha Systems"]),
        FieldDefinition::new("beta")
            .with_wildcards(&["beta*"])
            .with_specialties(&["Beta Systems"]),
    )
}

fn make_journals(config: &GenConfig) -> Vec<(Group, JournalRecord)> {
    let mut out = Vec::new();
    for i in 0..config.journals_per_field {
        let (title, specialty) = if i % 2 == 0 {
            (format!("ALPHA STUDIES {i:03}"), None)
        } else {
            (
                format!("ANNALS OF RECORDS A{i:03}"),
                Some("Alpha Systems".to_string()),
            )
        };
        out.push((
            Group::FieldA,
            JournalRecord {
                journal_id: JournalId(format!("JA{i:03}")),
                title,
                specialty,
            },
        ));
    }
    for i in 0..config.journals_per_field {
        let (title, specialty) = if i % 2 == 0 {
            (format!("BETA REVIEW {i:03}"), None)
        } else {
            (
                format!("ARCHIVE OF RECORDS B{i:03}"),
                Some("Beta Systems".to_string()),
            )
        };
        out.push((
            Group::FieldB,
            JournalRecord {
                journal_id: JournalId(format!("JB{i:03}")),
                title,
                specialty,
            },
        ));
    }
    for i in 0..config.background_journals {
        out.push((
            Group::Background,
            JournalRecord {
                journal_id: JournalId(format!("JX{i:03}")),
                title: format!("GENERAL SCIENCE REVIEW {i:03}"),
                specialty: None,
            },
        ));
    }
    out
}

/// Generate a corpus and its ground truth. Deterministic given the seed;
/// references never point to papers of the same or a later year.
pub fn generate_corpus(config: &GenConfig) -> Result<(CorpusStore, GroundTruth), SynthError> {
    config.validate()?;
    let mut rng = stream_rng(config.seed, 0);
    let total = config.total_papers();

    let journals = make_journals(config);
    let journals_a: Vec<&JournalRecord> = journals
        .iter()
        .filter(|(g, _)| *g == Group::FieldA)
        .map(|(_, j)| j)
        .collect();
    let journals_b: Vec<&JournalRecord> = journals
        .iter()
        .filter(|(g, _)| *g == Group::FieldB)
        .map(|(_, j)| j)
        .collect();
    let journals_x: Vec<&JournalRecord> = journals
        .iter()
        .filter(|(g, _)| *g == Group::Background)
        .map(|(_, j)| j)
        .collect();

    let group_of = |i: usize| {
        if i < config.n_field_a {
            Group::FieldA
        } else if i < config.n_field_a + config.n_field_b {
            Group::FieldB
        } else {
            Group::Background
        }
    };

    // exact-quota planting over all papers
    let quota = (config.planted_fraction * total as f64).round() as usize;
    let planted_idx: BTreeSet<usize> = rand::seq::index::sample(&mut rng, total, quota.min(total))
        .iter()
        .collect();

    let words_a = vocab_a(config);
    let words_b = vocab_b(config);
    let words_x = vocab_background(config);

    // first pass: years, journals, keywords
    let mut years = Vec::with_capacity(total);
    let mut journal_ids = Vec::with_capacity(total);
    let mut keyword_lists: Vec<Vec<String>> = Vec::with_capacity(total);
    for i in 0..total {
        let group = group_of(i);
        years.push(rng.random_range(config.year_min..=config.year_max));
        let journal_pool = match group {
            Group::FieldA => &journals_a,
            Group::FieldB => &journals_b,
            Group::Background => &journals_x,
        };
        journal_ids.push(
            journal_pool[rng.random_range(0..journal_pool.len())]
                .journal_id
                .clone(),
        );

        let planted = planted_idx.contains(&i);
        let k = rng.random_range(config.keywords_per_paper.0..=config.keywords_per_paper.1);
        let mut keywords = Vec::with_capacity(k);
        for _ in 0..k {
            let cross = planted && rng.random_bool(config.planted_cross_keyword_prob);
            let pool: &[String] = match (group, cross) {
                (Group::FieldA, false) => &words_a,
                (Group::FieldA, true) => &words_b,
                (Group::FieldB, false) => &words_b,
                (Group::FieldB, true) => &words_a,
                (Group::Background, false) => &words_x,
                (Group::Background, true) => {
                    if rng.random_bool(0.5) {
                        &words_a
                    } else {
                        &words_b
                    }
                }
            };
            keywords.push(pool[rng.random_range(0..pool.len())].clone());
        }
        keyword_lists.push(keywords);
    }

    // second pass: references, year by year so targets are strictly older
    let mut order: Vec<usize> = (0..total).collect();
    order.sort_by_key(|&i| (years[i], i));
    let mut pool_a: Vec<usize> = Vec::new();
    let mut pool_b: Vec<usize> = Vec::new();
    let mut pool_x: Vec<usize> = Vec::new();
    let mut pool_ab: Vec<usize> = Vec::new();
    let mut references: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); total];
    let mut batch_start = 0usize;
    while batch_start < total {
        let year = years[order[batch_start]];
        let mut batch_end = batch_start;
        while batch_end < total && years[order[batch_end]] == year {
            batch_end += 1;
        }
        for &i in &order[batch_start..batch_end] {
            let group = group_of(i);
            let planted = planted_idx.contains(&i);
            let cross_prob = if planted {
                config.cross_ref_prob_planted
            } else {
                config.cross_ref_prob_normal
            };
            let target = rng.random_range(config.refs_per_paper.0..=config.refs_per_paper.1);
            for _ in 0..target {
                let cross = rng.random_bool(cross_prob);
                let (primary, fallback): (&Vec<usize>, &Vec<usize>) = match (group, cross) {
                    (Group::FieldA, false) => (&pool_a, &pool_b),
                    (Group::FieldA, true) => (&pool_b, &pool_a),
                    (Group::FieldB, false) => (&pool_b, &pool_a),
                    (Group::FieldB, true) => (&pool_a, &pool_b),
                    (Group::Background, false) => (&pool_x, &pool_ab),
                    (Group::Background, true) => (&pool_ab, &pool_x),
                };
                let pool = if !primary.is_empty() {
                    primary
                } else {
                    fallback
                };
                if pool.is_empty() {
                    continue;
                }
                references[i].insert(pool[rng.random_range(0..pool.len())]);
            }
        }
        for &i in &order[batch_start..batch_end] {
            match group_of(i) {
                Group::FieldA => {
                    pool_a.push(i);
                    pool_ab.push(i);
                }
                Group::FieldB => {
                    pool_b.push(i);
                    pool_ab.push(i);
                }
                Group::Background => pool_x.push(i),
            }
        }
        batch_start = batch_end;
    }

    let mut store = CorpusStore::default();
    for (_, journal) in journals {
        store.journals.insert(journal.journal_id.clone(), journal);
    }
    let mut planted = BTreeMap::new();
    for i in 0..total {
        let id = paper_id(i);
        let is_planted = planted_idx.contains(&i);
        planted.insert(id.clone(), is_planted);
        let kind = if is_planted {
            "bridging"
        } else {
            "intra-field"
        };
        let record = PaperRecord {
            paper_id: id.clone(),
            title: format!("Synthetic {kind} study {i:05}"),
            abstract_text: format!(
                "Automatically generated {kind} record combining {} keyword(s).",
                keyword_lists[i].len()
            ),
            year: Some(years[i]),
            journal_id: journal_ids[i].clone(),
            keywords: keyword_lists[i].clone(),
            references: references[i].iter().map(|&t| paper_id(t)).collect(),
            specialty: None,
        };
        store.papers.insert(id, record);
    }

    let log = GenLog {
        total_papers: total,
        planted_count: planted_idx.len(),
        field_a_papers: config.n_field_a,
        field_b_papers: config.n_field_b,
        background_papers: config.n_background,
        seed: config.seed,
    };
    Ok((store, GroundTruth { planted, log }))
}

/// Write a ground-truth table: `paper_id,is_planted` CSV.
pub fn write_truth<W: Write>(out: W, truth: &GroundTruth) -> Result<(), SynthError> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(["paper_id", "is_planted"])?;
    for (paper, flag) in &truth.planted {
        writer.write_record([paper.as_str(), if *flag { "true" } else { "false" }])?;
    }
    writer.flush()?;
    Ok(())
}

/// Read a ground-truth table written by [`write_truth`].
pub fn read_truth<R: BufRead>(input: R) -> Result<BTreeMap<PaperId, bool>, SynthError> {
    let mut reader = csv::Reader::from_reader(input);
    let mut out = BTreeMap::new();
    for row in reader.records() {
        let row = row?;
        let id = PaperId(row.get(0).unwrap_or("").to_string());
        let flag = row.get(1) == Some("true");
        out.insert(id, flag);
    }
    Ok(out)
}

/// Precision, recall, and F1 of a retrieval result against the planted
/// truth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruthMetrics<R> {
    pub true_precision: R,
    pub true_recall: R,
    pub f1: R,
}

/// Score a result against the planted flags. Empty retrieval scores zero
/// precision; a truth without planted papers is an error because recall
/// is undefined.
pub fn evaluate_against_truth<R: Real>(
    result: &RetrievalResult,
    truth: &GroundTruth,
) -> Result<TruthMetrics<R>, SynthError> {
    for id in &result.retrieved {
        if !truth.planted.contains_key(id) {
            return Err(SynthError::UncoveredPaper(id.clone()));
        }
    }
    let planted = truth.planted_set();
    if planted.is_empty() {
        return Err(SynthError::NoPlantedPapers);
    }
    let hits = result
        .retrieved
        .iter()
        .filter(|p| planted.contains(*p))
        .count();
    let precision = if result.is_empty() {
        R::zero()
    } else {
        real_from_usize::<R>(hits) / real_from_usize::<R>(result.len())
    };
    let recall = real_from_usize::<R>(hits) / real_from_usize::<R>(planted.len());
    let f1 = if precision + recall > R::zero() {
        let two = real_from_usize::<R>(2);
        two * precision * recall / (precision + recall)
    } else {
        R::zero()
    };
    Ok(TruthMetrics {
        true_precision: precision,
        true_recall: recall,
        f1,
    })
}
