//! Quantitative comparison of retrieval strategies: absolute and
//! fractional counts, Jaccard overlap, yearly series with Lowess
//! smoothing, discipline and journal profiles, precision, pooled
//! pseudo-recall, and bootstrap confidence intervals.
//!
//! Fractional counting runs on exact rational arithmetic so the
//! conservation identity (strategy credits sum to the distinct-paper
//! union) holds exactly; floats appear only at the report boundary.

mod bootstrap;
mod lowess;

pub use bootstrap::{bootstrap_ci, BootstrapInterval, Statistic};
pub use lowess::lowess_smooth;

use std::collections::{BTreeMap, BTreeSet};

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{CorpusStore, JournalId, PaperId};
use crate::numeric::{real_from_usize, Real};
use crate::strategies::RetrievalResult;
use crate::validation::{resolve_labels, Label, LabelRecord, ValidationError};
use crate::BigFraction;

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("sample is empty")]
    EmptySample,
    #[error("series needs at least 2 points, got {0}")]
    SeriesTooShort(usize),
    #[error("series x values must be strictly increasing")]
    SeriesNotIncreasing,
    #[error("neighborhood fraction must lie in (0, 1], got {0}")]
    FracOutOfRange(f64),
    #[error("frac too small to cover 2 points (window {window} of {n})")]
    WindowTooSmall { window: usize, n: usize },
    #[error("bootstrap needs at least 1 replication")]
    ZeroReplications,
    #[error("confidence level must lie in (0, 1), got {0}")]
    InvalidLevel(f64),
    #[error("labels contain {0} doubtful paper(s); resolve them before computing metrics")]
    DoubtfulLabels(usize),
    #[error("no positives pooled")]
    EmptyPool,
    #[error("no labels for strategy {0}")]
    MissingLabels(String),
    #[error(transparent)]
    Labels(#[from] ValidationError),
}

/// Jaccard index `|a ∩ b| / |a ∪ b|`; 0 when both sets are empty (logged).
pub fn jaccard<T: Ord, R: Real>(a: &BTreeSet<T>, b: &BTreeSet<T>) -> R {
    if a.is_empty() && b.is_empty() {
        log::warn!("jaccard of two empty sets defined as 0");
        return R::zero();
    }
    let intersection = a.intersection(b).count();
    let union = a.len() + b.len() - intersection;
    real_from_usize::<R>(intersection) / real_from_usize::<R>(union)
}

/// Pairwise Jaccard overlap between strategy results. Symmetric, values in
/// [0, 1], diagonal 1 for every non-empty strategy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverlapMatrix<R> {
    pub strategies: Vec<String>,
    pub values: Vec<Vec<R>>,
}

pub fn overlap_matrix<R: Real>(results: &[&RetrievalResult]) -> OverlapMatrix<R> {
    let strategies: Vec<String> = results.iter().map(|r| r.strategy_label()).collect();
    let values = results
        .iter()
        .map(|row| {
            results
                .iter()
                .map(|col| jaccard::<_, R>(&row.retrieved, &col.retrieved))
                .collect()
        })
        .collect();
    OverlapMatrix { strategies, values }
}

/// Per-strategy absolute and fractional counts.
///
/// A paper retrieved by `m` strategies credits `1/m` to each, so the
/// fractional counts sum exactly to the union size.
#[derive(Debug, Clone, PartialEq)]
pub struct CountRow {
    pub strategy: String,
    pub absolute: usize,
    pub fractional: BigFraction,
}

impl CountRow {
    pub fn fractional_f64(&self) -> f64 {
        self.fractional.to_f64().expect("fraction fits f64")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CountReport {
    pub rows: Vec<CountRow>,
    pub union_size: usize,
}

impl CountReport {
    /// Exact sum of the fractional counts; equals `union_size` by
    /// construction.
    pub fn fractional_sum(&self) -> BigFraction {
        self.rows
            .iter()
            .fold(BigFraction::from_integer(0.into()), |acc, row| {
                acc + row.fractional.clone()
            })
    }
}

pub fn count_report(results: &[&RetrievalResult]) -> CountReport {
    let mut multiplicity: BTreeMap<&PaperId, usize> = BTreeMap::new();
    for result in results {
        for id in &result.retrieved {
            *multiplicity.entry(id).or_default() += 1;
        }
    }
    let rows = results
        .iter()
        .map(|result| {
            let fractional = result
                .retrieved
                .iter()
                .fold(BigFraction::from_integer(0.into()), |acc, id| {
                    acc + BigFraction::new(1.into(), (multiplicity[id] as u64).into())
                });
            CountRow {
                strategy: result.strategy_label(),
                absolute: result.len(),
                fractional,
            }
        })
        .collect();
    CountReport {
        rows,
        union_size: multiplicity.len(),
    }
}

/// Papers per calendar year over the store's full year span, zero-filled.
/// Retrieved papers without a year are skipped.
pub fn yearly_series(result: &RetrievalResult, store: &CorpusStore) -> Vec<(i32, usize)> {
    let Some((min_year, max_year)) = store.year_range() else {
        return Vec::new();
    };
    let mut counts: BTreeMap<i32, usize> = (min_year..=max_year).map(|y| (y, 0)).collect();
    for id in &result.retrieved {
        if let Some(year) = store.paper(id).and_then(|p| p.year) {
            if let Some(slot) = counts.get_mut(&year) {
                *slot += 1;
            }
        }
    }
    counts.into_iter().collect()
}

/// Share of each discipline among a result's papers. Journals missing from
/// the taxonomy map to "Unclassified"; disciplines below `min_share` merge
/// into "Others", appended last. Shares sum to 1 for non-empty results.
pub fn discipline_distribution<R: Real>(
    result: &RetrievalResult,
    store: &CorpusStore,
    taxonomy: &BTreeMap<JournalId, String>,
    min_share: R,
) -> Vec<(String, R)> {
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    let mut total = 0usize;
    for id in &result.retrieved {
        let Some(paper) = store.paper(id) else {
            continue;
        };
        let discipline = taxonomy
            .get(&paper.journal_id)
            .cloned()
            .unwrap_or_else(|| "Unclassified".to_string());
        *counts.entry(discipline).or_default() += 1;
        total += 1;
    }
    if total == 0 {
        return Vec::new();
    }
    let total_r = real_from_usize::<R>(total);
    let mut named: Vec<(String, R)> = Vec::new();
    let mut others = R::zero();
    for (discipline, count) in counts {
        let share = real_from_usize::<R>(count) / total_r;
        if share < min_share {
            others += share;
        } else {
            named.push((discipline, share));
        }
    }
    named.sort_by(|a, b| {
        b.1.partial_cmp(&a.1)
            .expect("shares are finite")
            .then_with(|| a.0.cmp(&b.0))
    });
    if others > R::zero() {
        named.push(("Others".to_string(), others));
    }
    named
}

/// One row of the per-strategy journal ranking.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JournalRankEntry {
    pub journal_id: JournalId,
    pub journal: String,
    pub frequency: usize,
    /// Share of the strategy's retrieved papers, full precision; reports
    /// round for display.
    pub proportion: f64,
}

/// Top-`n` journals by frequency within a result, lexicographic tie-break
/// on the display title.
pub fn journal_ranking(
    result: &RetrievalResult,
    store: &CorpusStore,
    n: usize,
) -> Vec<JournalRankEntry> {
    let mut counts: BTreeMap<JournalId, usize> = BTreeMap::new();
    for id in &result.retrieved {
        if let Some(paper) = store.paper(id) {
            *counts.entry(paper.journal_id.clone()).or_default() += 1;
        }
    }
    let total = result.len();
    let mut entries: Vec<JournalRankEntry> = counts
        .into_iter()
        .map(|(journal_id, frequency)| {
            let journal = store
                .journal(&journal_id)
                .map(|j| j.title.clone())
                .unwrap_or_else(|| journal_id.to_string());
            JournalRankEntry {
                journal_id,
                journal,
                frequency,
                proportion: frequency as f64 / total as f64,
            }
        })
        .collect();
    entries.sort_by(|a, b| {
        b.frequency
            .cmp(&a.frequency)
            .then_with(|| a.journal.cmp(&b.journal))
            .then_with(|| a.journal_id.cmp(&b.journal_id))
    });
    entries.truncate(n);
    entries
}

fn resolved_without_doubt(
    labels: &[LabelRecord],
) -> Result<BTreeMap<PaperId, Label>, MetricsError> {
    let resolution = resolve_labels(labels)?;
    let doubtful = resolution
        .values()
        .filter(|l| **l == Label::Doubtful)
        .count();
    if doubtful > 0 {
        return Err(MetricsError::DoubtfulLabels(doubtful));
    }
    Ok(resolution)
}

/// Precision of one strategy's labeled sample: included / labeled.
/// Doubtful labels must be resolved first.
pub fn precision<R: Real>(labels: &[LabelRecord]) -> Result<R, MetricsError> {
    if labels.is_empty() {
        return Err(MetricsError::EmptySample);
    }
    let resolution = resolved_without_doubt(labels)?;
    let includes = resolution
        .values()
        .filter(|l| **l == Label::Include)
        .count();
    Ok(real_from_usize::<R>(includes) / real_from_usize::<R>(resolution.len()))
}

/// Per-strategy pseudo-recall against the pooled positives.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PseudoRecallRow<R> {
    pub strategy: String,
    pub pool_hits: usize,
    pub value: R,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PseudoRecallReport<R> {
    pub pool_size: usize,
    pub rows: Vec<PseudoRecallRow<R>>,
}

/// Pool the positively labeled papers across all samples and score each
/// strategy by the share of the pool its *full* retrieved set contains.
/// A positive discovered in one strategy's sample credits every strategy
/// that retrieved it.
pub fn pseudo_recall<R: Real>(
    all_labels: &[LabelRecord],
    results: &[&RetrievalResult],
) -> Result<PseudoRecallReport<R>, MetricsError> {
    let resolution = resolved_without_doubt(all_labels)?;
    let pool: BTreeSet<&PaperId> = resolution
        .iter()
        .filter(|(_, l)| **l == Label::Include)
        .map(|(p, _)| p)
        .collect();
    if pool.is_empty() {
        return Err(MetricsError::EmptyPool);
    }
    let pool_size = pool.len();
    let rows = results
        .iter()
        .map(|result| {
            let hits = pool
                .iter()
                .filter(|p| result.retrieved.contains(**p))
                .count();
            PseudoRecallRow {
                strategy: result.strategy_label(),
                pool_hits: hits,
                value: real_from_usize::<R>(hits) / real_from_usize::<R>(pool_size),
            }
        })
        .collect();
    Ok(PseudoRecallReport { pool_size, rows })
}

/// One evaluation row mirroring the strategy-comparison table: precision
/// and pseudo-recall with bootstrap confidence intervals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalRow<R> {
    pub strategy: String,
    pub sample_size: usize,
    pub precision: BootstrapInterval<R>,
    pub pool_hits: usize,
    pub pseudo_recall: BootstrapInterval<R>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport<R> {
    pub pool_size: usize,
    pub rows: Vec<EvalRow<R>>,
}

/// Full evaluation: per-strategy precision over its labeled sample and
/// pseudo-recall over the pooled positives, both with percentile bootstrap
/// intervals. Consecutive bootstrap calls take consecutive seed offsets
/// from `seed`, so the whole report is reproducible.
pub fn evaluate<R: Real>(
    labels_by_strategy: &BTreeMap<String, Vec<LabelRecord>>,
    results: &[&RetrievalResult],
    replications: usize,
    level: f64,
    seed: u64,
) -> Result<EvalReport<R>, MetricsError> {
    let all_labels: Vec<LabelRecord> = labels_by_strategy
        .values()
        .flat_map(|v| v.iter().cloned())
        .collect();
    let pooled = pseudo_recall::<R>(&all_labels, results)?;
    let pool: BTreeSet<PaperId> = {
        let resolution = resolved_without_doubt(&all_labels)?;
        resolution
            .into_iter()
            .filter(|(_, l)| *l == Label::Include)
            .map(|(p, _)| p)
            .collect()
    };

    let mut rows = Vec::new();
    for (idx, result) in results.iter().enumerate() {
        let label = result.strategy_label();
        let sample_labels = labels_by_strategy
            .get(&label)
            .ok_or_else(|| MetricsError::MissingLabels(label.clone()))?;
        if sample_labels.is_empty() {
            return Err(MetricsError::EmptySample);
        }
        let resolution = resolved_without_doubt(sample_labels)?;
        // outcomes in sorted paper order: estimates are order-independent
        let outcomes: Vec<bool> = resolution.values().map(|l| *l == Label::Include).collect();
        let precision_ci = bootstrap_ci::<R>(
            &outcomes,
            Statistic::Mean,
            replications,
            level,
            seed.wrapping_add(2 * idx as u64),
        )?;
        let pool_outcomes: Vec<bool> = pool.iter().map(|p| result.retrieved.contains(p)).collect();
        let recall_ci = bootstrap_ci::<R>(
            &pool_outcomes,
            Statistic::Mean,
            replications,
            level,
            seed.wrapping_add(2 * idx as u64 + 1),
        )?;
        rows.push(EvalRow {
            strategy: label,
            sample_size: resolution.len(),
            precision: precision_ci,
            pool_hits: pooled.rows[idx].pool_hits,
            pseudo_recall: recall_ci,
        });
    }
    Ok(EvalReport {
        pool_size: pooled.pool_size,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{JournalRecord, PaperRecord};
    use crate::strategies::{RunMetadata, StrategyParams};
    use crate::validation::RelationType;
    use num_traits::One;
    use proptest::prelude::*;

    fn ids(xs: &[&str]) -> BTreeSet<PaperId> {
        xs.iter().map(|x| PaperId::from(*x)).collect()
    }

    fn result_of(strategy_seq: usize, papers: &[&str]) -> RetrievalResult {
        let params = match strategy_seq {
            1 => StrategyParams::s1(),
            2 => StrategyParams::s2(),
            3 => StrategyParams::s3(crate::Tau::new(1, 4).unwrap()),
            _ => StrategyParams::s4(crate::Tau::new(3, 20).unwrap()),
        };
        RetrievalResult {
            params,
            retrieved: ids(papers),
            evidence: BTreeMap::new(),
            metadata: RunMetadata::default(),
        }
    }

    fn label(paper: &str, l: Label) -> LabelRecord {
        LabelRecord {
            paper_id: PaperId::from(paper),
            label: l,
            relation_type: (l == Label::Include).then_some(RelationType::CloseInteraction),
            annotator: "t".into(),
            note: String::new(),
            timestamp: "1".into(),
        }
    }

    #[test]
    fn jaccard_basics() {
        let a = ids(&["1", "2", "3"]);
        let b = ids(&["2", "3", "4"]);
        assert_eq!(jaccard::<_, f64>(&a, &b), 0.5);
        assert_eq!(jaccard::<_, f64>(&a, &a), 1.0);
        let disjoint = ids(&["9"]);
        assert_eq!(jaccard::<_, f64>(&a, &disjoint), 0.0);
        let empty: BTreeSet<PaperId> = BTreeSet::new();
        assert_eq!(jaccard::<_, f64>(&empty, &empty), 0.0);
    }

    #[test]
    fn overlap_matrix_is_symmetric_with_unit_diagonal() {
        let r1 = result_of(1, &["a", "b", "c"]);
        let r2 = result_of(2, &["b", "c", "d"]);
        let r3 = result_of(3, &[]);
        let m = overlap_matrix::<f64>(&[&r1, &r2, &r3]);
        assert_eq!(m.strategies, vec!["S1", "S2", "S3"]);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(m.values[i][j], m.values[j][i]);
            }
        }
        assert_eq!(m.values[0][0], 1.0);
        // empty strategy's diagonal is 0 by the two-empty-sets rule
        assert_eq!(m.values[2][2], 0.0);
        assert_eq!(m.values[0][1], 0.5);
    }

    #[test]
    fn fractional_counts_split_shared_papers() {
        let r1 = result_of(1, &["shared", "only1"]);
        let r2 = result_of(2, &["shared", "only2"]);
        let report = count_report(&[&r1, &r2]);
        let half = BigFraction::new(1.into(), 2.into());
        let expected = BigFraction::one() + half;
        assert_eq!(report.rows[0].fractional, expected);
        assert_eq!(report.rows[1].fractional, expected);
        assert_eq!(report.union_size, 3);
        assert_eq!(report.fractional_sum(), BigFraction::from_integer(3.into()));
    }

    #[test]
    fn disjoint_results_make_fractional_equal_absolute() {
        let r1 = result_of(1, &["a", "b"]);
        let r2 = result_of(2, &["c"]);
        let report = count_report(&[&r1, &r2]);
        assert_eq!(
            report.rows[0].fractional,
            BigFraction::from_integer(2.into())
        );
        assert_eq!(
            report.rows[1].fractional,
            BigFraction::from_integer(1.into())
        );
    }

    #[test]
    fn yearly_series_zero_fills_store_range() {
        let mut store = CorpusStore::default();
        for (id, year) in [("p1", 2010), ("p2", 2010), ("p3", 2010), ("p4", 2012)] {
            let rec = PaperRecord {
                paper_id: PaperId::from(id),
                title: String::new(),
                abstract_text: String::new(),
                year: Some(year),
                journal_id: JournalId::from("j"),
                keywords: Vec::new(),
                references: Vec::new(),
                specialty: None,
            };
            store.papers.insert(rec.paper_id.clone(), rec);
        }
        let result = result_of(1, &["p1", "p2", "p3", "p4"]);
        let series = yearly_series(&result, &store);
        assert_eq!(series, vec![(2010, 3), (2011, 0), (2012, 1)]);
        let total: usize = series.iter().map(|(_, c)| c).sum();
        assert_eq!(total, result.len());

        let empty = result_of(2, &[]);
        let zeroes = yearly_series(&empty, &store);
        assert!(zeroes.iter().all(|(_, c)| *c == 0));
        assert_eq!(zeroes.len(), 3);
    }

    fn store_with_journal_map(entries: &[(&str, &str)]) -> CorpusStore {
        let mut store = CorpusStore::default();
        for (i, (id, journal)) in entries.iter().enumerate() {
            let rec = PaperRecord {
                paper_id: PaperId::from(*id),
                title: String::new(),
                abstract_text: String::new(),
                year: Some(2000 + (i % 5) as i32),
                journal_id: JournalId::from(*journal),
                keywords: Vec::new(),
                references: Vec::new(),
                specialty: None,
            };
            store.papers.insert(rec.paper_id.clone(), rec);
            store.journals.insert(
                JournalId::from(*journal),
                JournalRecord {
                    journal_id: JournalId::from(*journal),
                    title: format!("JOURNAL {}", journal.to_uppercase()),
                    specialty: None,
                },
            );
        }
        store
    }

    #[test]
    fn discipline_shares_merge_small_ones_into_others() {
        // 46/25/9/8/5 named, 3+2+2 small: Others = 0.07
        let mut entries = Vec::new();
        let spec: &[(&str, usize)] = &[
            ("d1", 46),
            ("d2", 25),
            ("d3", 9),
            ("d4", 8),
            ("d5", 5),
            ("d6", 3),
            ("d7", 2),
            ("d8", 2),
        ];
        let mut names = Vec::new();
        for (journal, count) in spec {
            for k in 0..*count {
                names.push(format!("{journal}_{k}"));
                entries.push((names.last().unwrap().clone(), journal.to_string()));
            }
        }
        let borrowed: Vec<(&str, &str)> = entries
            .iter()
            .map(|(p, j)| (p.as_str(), j.as_str()))
            .collect();
        let store = store_with_journal_map(&borrowed);
        let all: Vec<&str> = borrowed.iter().map(|(p, _)| *p).collect();
        let result = result_of(1, &all);
        let taxonomy: BTreeMap<JournalId, String> = spec
            .iter()
            .map(|(j, _)| (JournalId::from(*j), format!("Discipline {j}")))
            .collect();
        let shares = discipline_distribution::<f64>(&result, &store, &taxonomy, 0.05);
        assert_eq!(shares.len(), 6);
        assert_eq!(shares[0], ("Discipline d1".to_string(), 0.46));
        // exactly-at-threshold stays named
        assert!(shares
            .iter()
            .any(|(d, s)| d == "Discipline d5" && *s == 0.05));
        let (last_name, last_share) = shares.last().unwrap();
        assert_eq!(last_name, "Others");
        assert!((last_share - 0.07).abs() < 1e-12);
        let total: f64 = shares.iter().map(|(_, s)| s).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_discipline_result_has_share_one() {
        let store = store_with_journal_map(&[("p1", "j1"), ("p2", "j1")]);
        let result = result_of(1, &["p1", "p2"]);
        let taxonomy: BTreeMap<JournalId, String> =
            BTreeMap::from([(JournalId::from("j1"), "Only".to_string())]);
        let shares = discipline_distribution::<f64>(&result, &store, &taxonomy, 0.03);
        assert_eq!(shares, vec![("Only".to_string(), 1.0)]);
    }

    #[test]
    fn uncovered_journals_become_unclassified() {
        let store = store_with_journal_map(&[("p1", "j1")]);
        let result = result_of(1, &["p1"]);
        let shares = discipline_distribution::<f64>(&result, &store, &BTreeMap::new(), 0.03);
        assert_eq!(shares, vec![("Unclassified".to_string(), 1.0)]);
    }

    #[test]
    fn journal_ranking_orders_and_rounds() {
        let mut entries = Vec::new();
        for i in 0..862 {
            entries.push((format!("big{i}"), "jbig".to_string()));
        }
        for i in 0..(17094 - 862) {
            entries.push((format!("rest{i}"), format!("jr{:04}", i % 400)));
        }
        let borrowed: Vec<(&str, &str)> = entries
            .iter()
            .map(|(p, j)| (p.as_str(), j.as_str()))
            .collect();
        let store = store_with_journal_map(&borrowed);
        let all: Vec<&str> = borrowed.iter().map(|(p, _)| *p).collect();
        let result = result_of(1, &all);
        let ranking = journal_ranking(&result, &store, 20);
        assert_eq!(ranking.len(), 20);
        assert_eq!(ranking[0].journal_id, JournalId::from("jbig"));
        assert_eq!(ranking[0].frequency, 862);
        // 862 / 17094 rounds to 0.05 for display
        assert_eq!(format!("{:.2}", ranking[0].proportion), "0.05");
        let sum: usize = {
            let full = journal_ranking(&result, &store, usize::MAX);
            full.iter().map(|e| e.frequency).sum()
        };
        assert_eq!(sum, result.len());
    }

    #[test]
    fn single_paper_ranking() {
        let store = store_with_journal_map(&[("p1", "j1")]);
        let result = result_of(1, &["p1"]);
        let ranking = journal_ranking(&result, &store, 5);
        assert_eq!(ranking.len(), 1);
        assert_eq!(ranking[0].proportion, 1.0);
    }

    #[test]
    fn precision_is_include_share() {
        let mut labels = Vec::new();
        for i in 0..313 {
            labels.push(label(&format!("in{i}"), Label::Include));
        }
        for i in 0..(522 - 313) {
            labels.push(label(&format!("out{i}"), Label::Exclude));
        }
        let p: f64 = precision(&labels).unwrap();
        assert!((p - 313.0 / 522.0).abs() < 1e-15);
        assert_eq!(format!("{:.0}%", p * 100.0), "60%");

        let all_in: Vec<LabelRecord> = (0..5)
            .map(|i| label(&format!("p{i}"), Label::Include))
            .collect();
        assert_eq!(precision::<f64>(&all_in).unwrap(), 1.0);
        let all_out: Vec<LabelRecord> = (0..5)
            .map(|i| label(&format!("p{i}"), Label::Exclude))
            .collect();
        assert_eq!(precision::<f64>(&all_out).unwrap(), 0.0);
    }

    #[test]
    fn precision_blocks_doubtful_and_empty() {
        assert!(matches!(
            precision::<f64>(&[]),
            Err(MetricsError::EmptySample)
        ));
        let labels = vec![label("p1", Label::Doubtful)];
        assert!(matches!(
            precision::<f64>(&labels),
            Err(MetricsError::DoubtfulLabels(1))
        ));
    }

    #[test]
    fn precision_is_permutation_invariant() {
        let mut labels = vec![
            label("a", Label::Include),
            label("b", Label::Exclude),
            label("c", Label::Include),
        ];
        let p1: f64 = precision(&labels).unwrap();
        labels.reverse();
        let p2: f64 = precision(&labels).unwrap();
        assert_eq!(p1, p2);
    }

    #[test]
    fn pseudo_recall_counts_pool_hits_against_full_sets() {
        let labels = vec![
            label("a", Label::Include),
            label("b", Label::Include),
            label("c", Label::Include),
            label("d", Label::Include),
            label("x", Label::Exclude),
        ];
        let r = result_of(1, &["a", "b", "neg1", "neg2"]);
        let report = pseudo_recall::<f64>(&labels, &[&r]).unwrap();
        assert_eq!(report.pool_size, 4);
        assert_eq!(report.rows[0].pool_hits, 2);
        assert_eq!(report.rows[0].value, 0.5);

        let full = result_of(2, &["a", "b", "c", "d"]);
        let report = pseudo_recall::<f64>(&labels, &[&full]).unwrap();
        assert_eq!(report.rows[0].value, 1.0);
    }

    #[test]
    fn pseudo_recall_is_permutation_invariant() {
        let mut labels = vec![
            label("a", Label::Include),
            label("b", Label::Include),
            label("c", Label::Exclude),
        ];
        let r = result_of(1, &["a", "x"]);
        let first = pseudo_recall::<f64>(&labels, &[&r]).unwrap();
        labels.reverse();
        let second = pseudo_recall::<f64>(&labels, &[&r]).unwrap();
        assert_eq!(first, second);
    }

    #[test]
    fn pseudo_recall_requires_positives() {
        let labels = vec![label("x", Label::Exclude)];
        let r = result_of(1, &["x"]);
        assert!(matches!(
            pseudo_recall::<f64>(&labels, &[&r]),
            Err(MetricsError::EmptyPool)
        ));
    }

    #[test]
    fn subset_identity_links_jaccard_and_sizes() {
        // nested results: J(inner, outer) = |inner| / |outer|
        let outer = result_of(3, &["a", "b", "c", "d", "e"]);
        let inner = result_of(4, &["b", "d"]);
        let j: f64 = jaccard(&inner.retrieved, &outer.retrieved);
        assert_eq!(j, 2.0 / 5.0);
    }

    #[test]
    fn evaluate_produces_ordered_rows() {
        let r1 = result_of(1, &["a", "b", "c"]);
        let r2 = result_of(2, &["b", "c", "d"]);
        let labels = BTreeMap::from([
            (
                "S1".to_string(),
                vec![
                    label("a", Label::Include),
                    label("b", Label::Exclude),
                    label("c", Label::Include),
                ],
            ),
            (
                "S2".to_string(),
                vec![label("b", Label::Exclude), label("d", Label::Include)],
            ),
        ]);
        let report = evaluate::<f64>(&labels, &[&r1, &r2], 500, 0.95, 9).unwrap();
        assert_eq!(report.rows.len(), 2);
        // pool: a and c from the S1 sample, d from the S2 sample
        assert_eq!(report.pool_size, 3);
        let row = &report.rows[0];
        assert_eq!(row.strategy, "S1");
        assert!(row.precision.lower <= row.precision.point);
        assert!(row.precision.point <= row.precision.upper);
        // S1 retrieved a and c from the pool but not d
        assert_eq!(row.pool_hits, 2);
        // reproducible
        let again = evaluate::<f64>(&labels, &[&r1, &r2], 500, 0.95, 9).unwrap();
        assert_eq!(report, again);
    }

    proptest! {
        #[test]
        fn jaccard_matches_brute_force(
            a in proptest::collection::btree_set(0u16..40, 0..20),
            b in proptest::collection::btree_set(0u16..40, 0..20),
        ) {
            let j: f64 = jaccard(&a, &b);
            let inter = a.iter().filter(|x| b.contains(x)).count();
            let uni: BTreeSet<_> = a.union(&b).collect();
            let expected = if uni.is_empty() { 0.0 } else { inter as f64 / uni.len() as f64 };
            prop_assert_eq!(j, expected);
            let sym: f64 = jaccard(&b, &a);
            prop_assert_eq!(j, sym);
        }

        #[test]
        fn fractional_conservation_holds_exactly(
            sets in proptest::collection::vec(
                proptest::collection::btree_set(0u16..60, 0..30), 1..5
            ),
        ) {
            let results: Vec<RetrievalResult> = sets
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    let papers: Vec<String> = s.iter().map(|x| format!("p{x:02}")).collect();
                    let refs: Vec<&str> = papers.iter().map(String::as_str).collect();
                    result_of(i % 4 + 1, &refs)
                })
                .collect();
            let refs: Vec<&RetrievalResult> = results.iter().collect();
            let report = count_report(&refs);
            prop_assert_eq!(
                report.fractional_sum(),
                BigFraction::from_integer((report.union_size as u64).into())
            );
        }
    }
}
