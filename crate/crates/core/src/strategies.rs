//! The four retrieval strategies and the threshold-sweep analysis.
//!
//! S1 (shared keywords) searches every ingested paper for keywords from
//! both lexicons, regardless of discipline. S2 (cross-keywords) retrieves
//! papers of one disciplinary corpus carrying the other field's keywords.
//! S3 (cross-citations) and S4 (cross-references) threshold the share of a
//! paper's citations/references that cross fields. Thresholds are
//! inclusive (`>=`); papers whose ratio is undefined (no citations for S3,
//! no in-universe references for S4) are never retrieved.
//!
//! Every run is a pure function of immutable inputs and returns per-paper
//! evidence sufficient to replay the inclusion decision.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{CorpusStore, PaperId};
use crate::graph::{cross_citation_ratio, cross_reference_ratio, CitationIndex, CrossRatio};
use crate::lexicon::{match_keywords, Lexicon};
use crate::numeric::Tau;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum StrategyId {
    S1,
    S2,
    S3,
    S4,
}

impl fmt::Display for StrategyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            StrategyId::S1 => "S1",
            StrategyId::S2 => "S2",
            StrategyId::S3 => "S3",
            StrategyId::S4 => "S4",
        };
        f.write_str(s)
    }
}

impl FromStr for StrategyId {
    type Err = StrategyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "S1" => Ok(StrategyId::S1),
            "S2" => Ok(StrategyId::S2),
            "S3" => Ok(StrategyId::S3),
            "S4" => Ok(StrategyId::S4),
            other => Err(StrategyError::UnknownStrategy(other.to_string())),
        }
    }
}

/// Retrieval threshold for the link-based strategies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", content = "value", rename_all = "snake_case")]
pub enum Threshold {
    /// Minimum cross-field share of links, inclusive.
    Relative(Tau),
    /// Minimum cross-field link count, inclusive. Kept for comparison runs;
    /// relative mode is the default because absolute counts are biased
    /// toward highly linked papers.
    Absolute(u32),
}

/// Validated strategy parameters: S1/S2 take no threshold, S3/S4 take
/// exactly one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrategyParams {
    pub strategy: StrategyId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<Threshold>,
}

impl StrategyParams {
    pub fn s1() -> Self {
        StrategyParams {
            strategy: StrategyId::S1,
            threshold: None,
        }
    }

    pub fn s2() -> Self {
        StrategyParams {
            strategy: StrategyId::S2,
            threshold: None,
        }
    }

    pub fn s3(tau: Tau) -> Self {
        StrategyParams {
            strategy: StrategyId::S3,
            threshold: Some(Threshold::Relative(tau)),
        }
    }

    pub fn s4(tau: Tau) -> Self {
        StrategyParams {
            strategy: StrategyId::S4,
            threshold: Some(Threshold::Relative(tau)),
        }
    }

    pub fn s3_absolute(k: u32) -> Self {
        StrategyParams {
            strategy: StrategyId::S3,
            threshold: Some(Threshold::Absolute(k)),
        }
    }

    pub fn s4_absolute(k: u32) -> Self {
        StrategyParams {
            strategy: StrategyId::S4,
            threshold: Some(Threshold::Absolute(k)),
        }
    }

    pub fn validate(&self) -> Result<(), StrategyError> {
        match (self.strategy, self.threshold) {
            (StrategyId::S1 | StrategyId::S2, None) => Ok(()),
            (StrategyId::S1 | StrategyId::S2, Some(_)) => {
                Err(StrategyError::UnexpectedThreshold(self.strategy))
            }
            (StrategyId::S3 | StrategyId::S4, Some(Threshold::Absolute(0))) => {
                Err(StrategyError::ZeroAbsoluteThreshold)
            }
            (StrategyId::S3 | StrategyId::S4, Some(_)) => Ok(()),
            (StrategyId::S3 | StrategyId::S4, None) => {
                Err(StrategyError::MissingThreshold(self.strategy))
            }
        }
    }
}

#[derive(Debug, Error)]
pub enum StrategyError {
    #[error("unknown strategy {0:?}")]
    UnknownStrategy(String),
    #[error("lexicon {0} is empty")]
    EmptyLexicon(String),
    #[error("{0} takes no threshold")]
    UnexpectedThreshold(StrategyId),
    #[error("{0} requires a threshold")]
    MissingThreshold(StrategyId),
    #[error("absolute threshold must be at least 1")]
    ZeroAbsoluteThreshold,
    #[error("sweep grid is empty")]
    EmptyGrid,
    #[error("sweep grid must be strictly increasing")]
    GridNotIncreasing,
    #[error("retrieval-rate base corpus is empty")]
    EmptyRateBase,
}

/// One keyword clause of an S2 hit: the corpus the paper belongs to plus
/// the other field's keywords it matched.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeywordClause {
    pub member_of: String,
    pub matched: BTreeSet<String>,
}

/// One link clause of an S3/S4 hit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkClause {
    pub member_of: String,
    pub other_field: String,
    pub ratio: CrossRatio,
}

/// Why a paper was retrieved; sufficient to replay the decision.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    SharedKeywords {
        matched_a: BTreeSet<String>,
        matched_b: BTreeSet<String>,
    },
    CrossKeywords {
        clauses: Vec<KeywordClause>,
    },
    CrossLinks {
        clauses: Vec<LinkClause>,
    },
}

/// Fingerprints of the inputs a run saw. `timestamp` stays unset unless a
/// caller explicitly stamps the run, keeping serialized results
/// byte-reproducible.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunMetadata {
    pub store_fingerprint: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub field_fingerprints: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub lexicon_fingerprints: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
}

/// One strategy run: parameters, retrieved set, per-paper evidence, and
/// provenance metadata.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RetrievalResult {
    pub params: StrategyParams,
    pub retrieved: BTreeSet<PaperId>,
    pub evidence: BTreeMap<PaperId, Evidence>,
    pub metadata: RunMetadata,
}

impl RetrievalResult {
    pub fn strategy_label(&self) -> String {
        self.params.strategy.to_string()
    }

    pub fn len(&self) -> usize {
        self.retrieved.len()
    }

    pub fn is_empty(&self) -> bool {
        self.retrieved.is_empty()
    }

    /// Fingerprint of parameters plus the retrieved set; the basis for
    /// sample-draw determinism.
    pub fn fingerprint(&self) -> String {
        let mut fp = crate::fingerprint::Fingerprinter::new();
        fp.push_str(&serde_json::to_string(&self.params).expect("params serialize"));
        for id in &self.retrieved {
            fp.push_str(id.as_str());
        }
        fp.finish()
    }

    pub fn write_json<W: std::io::Write>(&self, mut out: W) -> std::io::Result<()> {
        serde_json::to_writer_pretty(&mut out, self)?;
        out.write_all(b"\n")
    }

    pub fn read_json<R: std::io::Read>(reader: R) -> Result<Self, serde_json::Error> {
        serde_json::from_reader(reader)
    }
}

/// A named field membership, borrowed from the caller.
#[derive(Debug, Clone, Copy)]
pub struct FieldView<'a> {
    pub name: &'a str,
    pub members: &'a BTreeSet<PaperId>,
}

impl<'a> FieldView<'a> {
    pub fn new(name: &'a str, members: &'a BTreeSet<PaperId>) -> Self {
        FieldView { name, members }
    }
}

fn base_metadata(store: &CorpusStore) -> RunMetadata {
    RunMetadata {
        store_fingerprint: store.fingerprint(),
        ..Default::default()
    }
}

fn field_fingerprint(view: &FieldView<'_>) -> String {
    let mut fp = crate::fingerprint::Fingerprinter::new();
    fp.push_str(view.name);
    for id in view.members {
        fp.push_str(id.as_str());
    }
    fp.finish()
}

/// S1, shared keywords: papers carrying keywords from both lexicons,
/// searched over every ingested paper with no disciplinary bound.
pub fn run_s1(
    store: &CorpusStore,
    lex_a: &Lexicon,
    lex_b: &Lexicon,
) -> Result<RetrievalResult, StrategyError> {
    if lex_a.is_empty() {
        return Err(StrategyError::EmptyLexicon(lex_a.field_name.clone()));
    }
    if lex_b.is_empty() {
        return Err(StrategyError::EmptyLexicon(lex_b.field_name.clone()));
    }
    let mut retrieved = BTreeSet::new();
    let mut evidence = BTreeMap::new();
    for (id, paper) in &store.papers {
        let matched_a = match_keywords(paper, lex_a);
        if matched_a.is_empty() {
            continue;
        }
        let matched_b = match_keywords(paper, lex_b);
        if matched_b.is_empty() {
            continue;
        }
        retrieved.insert(id.clone());
        evidence.insert(
            id.clone(),
            Evidence::SharedKeywords {
                matched_a,
                matched_b,
            },
        );
    }
    let mut metadata = base_metadata(store);
    metadata
        .lexicon_fingerprints
        .insert(lex_a.field_name.clone(), lex_a.fingerprint());
    metadata
        .lexicon_fingerprints
        .insert(lex_b.field_name.clone(), lex_b.fingerprint());
    Ok(RetrievalResult {
        params: StrategyParams::s1(),
        retrieved,
        evidence,
        metadata,
    })
}

/// S2, cross-keywords: papers of corpus A carrying keywords of field B,
/// united with papers of corpus B carrying keywords of field A.
/// Dual-membership papers may qualify through either clause; the evidence
/// records every clause that fired.
pub fn run_s2(
    store: &CorpusStore,
    field_a: FieldView<'_>,
    field_b: FieldView<'_>,
    lex_a: &Lexicon,
    lex_b: &Lexicon,
) -> Result<RetrievalResult, StrategyError> {
    if lex_a.is_empty() {
        return Err(StrategyError::EmptyLexicon(lex_a.field_name.clone()));
    }
    if lex_b.is_empty() {
        return Err(StrategyError::EmptyLexicon(lex_b.field_name.clone()));
    }
    let mut retrieved = BTreeSet::new();
    let mut evidence: BTreeMap<PaperId, Vec<KeywordClause>> = BTreeMap::new();
    let clauses: [(&FieldView<'_>, &Lexicon); 2] = [(&field_a, lex_b), (&field_b, lex_a)];
    for (view, other_lexicon) in clauses {
        for id in view.members.iter() {
            let Some(paper) = store.paper(id) else {
                continue;
            };
            let matched = match_keywords(paper, other_lexicon);
            if matched.is_empty() {
                continue;
            }
            retrieved.insert(id.clone());
            evidence.entry(id.clone()).or_default().push(KeywordClause {
                member_of: view.name.to_string(),
                matched,
            });
        }
    }
    let mut metadata = base_metadata(store);
    metadata
        .field_fingerprints
        .insert(field_a.name.to_string(), field_fingerprint(&field_a));
    metadata
        .field_fingerprints
        .insert(field_b.name.to_string(), field_fingerprint(&field_b));
    metadata
        .lexicon_fingerprints
        .insert(lex_a.field_name.clone(), lex_a.fingerprint());
    metadata
        .lexicon_fingerprints
        .insert(lex_b.field_name.clone(), lex_b.fingerprint());
    Ok(RetrievalResult {
        params: StrategyParams::s2(),
        retrieved,
        evidence: evidence
            .into_iter()
            .map(|(id, clauses)| (id, Evidence::CrossKeywords { clauses }))
            .collect(),
        metadata,
    })
}

fn threshold_holds(ratio: &CrossRatio, threshold: Threshold) -> bool {
    match threshold {
        Threshold::Relative(tau) => ratio.at_least(tau),
        Threshold::Absolute(k) => ratio.is_defined() && ratio.at_least_count(k),
    }
}

fn run_link_strategy(
    store: &CorpusStore,
    field_a: FieldView<'_>,
    field_b: FieldView<'_>,
    index: &CitationIndex,
    params: StrategyParams,
    ratio_fn: fn(&PaperId, &BTreeSet<PaperId>, &CitationIndex) -> CrossRatio,
) -> Result<RetrievalResult, StrategyError> {
    params.validate()?;
    let threshold = params.threshold.expect("validated");
    let mut retrieved = BTreeSet::new();
    let mut evidence: BTreeMap<PaperId, Vec<LinkClause>> = BTreeMap::new();
    let clauses: [(&FieldView<'_>, &FieldView<'_>); 2] =
        [(&field_a, &field_b), (&field_b, &field_a)];
    for (own, other) in clauses {
        for id in own.members.iter() {
            if !store.papers.contains_key(id) {
                continue;
            }
            let ratio = ratio_fn(id, other.members, index);
            if threshold_holds(&ratio, threshold) {
                retrieved.insert(id.clone());
                evidence.entry(id.clone()).or_default().push(LinkClause {
                    member_of: own.name.to_string(),
                    other_field: other.name.to_string(),
                    ratio,
                });
            }
        }
    }
    let mut metadata = base_metadata(store);
    metadata
        .field_fingerprints
        .insert(field_a.name.to_string(), field_fingerprint(&field_a));
    metadata
        .field_fingerprints
        .insert(field_b.name.to_string(), field_fingerprint(&field_b));
    Ok(RetrievalResult {
        params,
        retrieved,
        evidence: evidence
            .into_iter()
            .map(|(id, clauses)| (id, Evidence::CrossLinks { clauses }))
            .collect(),
        metadata,
    })
}

/// S3, cross-citations: papers of either corpus whose share of citations
/// received from the other corpus meets the threshold. Uncited papers are
/// excluded at every threshold.
pub fn run_s3(
    store: &CorpusStore,
    field_a: FieldView<'_>,
    field_b: FieldView<'_>,
    index: &CitationIndex,
    params: StrategyParams,
) -> Result<RetrievalResult, StrategyError> {
    debug_assert_eq!(params.strategy, StrategyId::S3);
    run_link_strategy(store, field_a, field_b, index, params, cross_citation_ratio)
}

/// S4, cross-references: papers of either corpus whose share of in-universe
/// references to the other corpus meets the threshold. Unlike S3 this
/// admits uncited papers, but papers without in-universe references are
/// excluded.
pub fn run_s4(
    store: &CorpusStore,
    field_a: FieldView<'_>,
    field_b: FieldView<'_>,
    index: &CitationIndex,
    params: StrategyParams,
) -> Result<RetrievalResult, StrategyError> {
    debug_assert_eq!(params.strategy, StrategyId::S4);
    run_link_strategy(
        store,
        field_a,
        field_b,
        index,
        params,
        cross_reference_ratio,
    )
}

/// Denominator of the sweep retrieval rate.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RateBase {
    FieldA,
    FieldB,
    /// Union of the two disciplinary corpora.
    #[default]
    Union,
    AllIngested,
}

impl FromStr for RateBase {
    type Err = StrategyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "a" | "field_a" => Ok(RateBase::FieldA),
            "b" | "field_b" => Ok(RateBase::FieldB),
            "union" => Ok(RateBase::Union),
            "all" | "all_ingested" => Ok(RateBase::AllIngested),
            other => Err(StrategyError::UnknownStrategy(format!("rate base {other}"))),
        }
    }
}

/// Threshold grid for a sweep; must be strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", content = "values", rename_all = "snake_case")]
pub enum SweepGrid {
    Relative(Vec<Tau>),
    Absolute(Vec<u32>),
}

impl SweepGrid {
    fn validate(&self) -> Result<(), StrategyError> {
        let (empty, increasing) = match self {
            SweepGrid::Relative(taus) => (taus.is_empty(), taus.windows(2).all(|w| w[0] < w[1])),
            SweepGrid::Absolute(ks) => (ks.is_empty(), ks.windows(2).all(|w| w[0] < w[1])),
        };
        if empty {
            return Err(StrategyError::EmptyGrid);
        }
        if !increasing {
            return Err(StrategyError::GridNotIncreasing);
        }
        Ok(())
    }

    fn thresholds(&self) -> Vec<Threshold> {
        match self {
            SweepGrid::Relative(taus) => taus.iter().map(|t| Threshold::Relative(*t)).collect(),
            SweepGrid::Absolute(ks) => ks.iter().map(|k| Threshold::Absolute(*k)).collect(),
        }
    }
}

/// One sweep grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub threshold: String,
    pub retrieved_count: usize,
    pub retrieval_rate: f64,
}

/// Run a link-based strategy across a threshold grid and report retrieval
/// rates against the chosen base corpus. Counts are non-increasing in the
/// threshold because inclusive thresholds nest.
pub fn threshold_sweep(
    store: &CorpusStore,
    field_a: FieldView<'_>,
    field_b: FieldView<'_>,
    index: &CitationIndex,
    strategy: StrategyId,
    grid: &SweepGrid,
    base: RateBase,
) -> Result<Vec<SweepPoint>, StrategyError> {
    grid.validate()?;
    let base_size = match base {
        RateBase::FieldA => field_a.members.len(),
        RateBase::FieldB => field_b.members.len(),
        RateBase::Union => field_a.members.union(field_b.members).count(),
        RateBase::AllIngested => store.len(),
    };
    if base_size == 0 {
        return Err(StrategyError::EmptyRateBase);
    }
    let mut points = Vec::new();
    for threshold in grid.thresholds() {
        let params = StrategyParams {
            strategy,
            threshold: Some(threshold),
        };
        let result = match strategy {
            StrategyId::S3 => run_s3(store, field_a, field_b, index, params)?,
            StrategyId::S4 => run_s4(store, field_a, field_b, index, params)?,
            other => return Err(StrategyError::UnexpectedThreshold(other)),
        };
        let label = match threshold {
            Threshold::Relative(tau) => tau.to_string(),
            Threshold::Absolute(k) => k.to_string(),
        };
        points.push(SweepPoint {
            threshold: label,
            retrieved_count: result.len(),
            retrieval_rate: result.len() as f64 / base_size as f64,
        });
    }
    Ok(points)
}
