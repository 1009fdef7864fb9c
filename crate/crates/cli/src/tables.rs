//! Flat report tables (CSV, UTF-8, header row). Everything written here
//! is byte-deterministic for fixed inputs: rows come from ordered
//! containers and floats go through the shortest-round-trip formatter.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};

use crossfield::corpus::{CorpusStore, JournalId};
use crossfield::metrics::{
    discipline_distribution, journal_ranking, lowess_smooth, overlap_matrix, yearly_series,
    CountReport, EvalReport,
};
use crossfield::strategies::{RetrievalResult, SweepPoint};
use crossfield::Scalar;

pub fn create(path: &Path) -> Result<csv::Writer<std::fs::File>> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    let file =
        std::fs::File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    Ok(csv::Writer::from_writer(file))
}

pub fn write_counts(path: &Path, report: &CountReport) -> Result<()> {
    let mut w = create(path)?;
    w.write_record([
        "strategy",
        "absolute_count",
        "fractional_count",
        "fractional_exact",
    ])?;
    for row in &report.rows {
        w.write_record([
            row.strategy.clone(),
            row.absolute.to_string(),
            row.fractional_f64().to_string(),
            row.fractional.to_string(),
        ])?;
    }
    w.write_record([
        "union".to_string(),
        report.union_size.to_string(),
        report.union_size.to_string(),
        report.union_size.to_string(),
    ])?;
    w.flush()?;
    Ok(())
}

pub fn write_overlap(path: &Path, results: &[&RetrievalResult]) -> Result<()> {
    let matrix = overlap_matrix::<Scalar>(results);
    let mut w = create(path)?;
    let mut header = vec!["strategy".to_string()];
    header.extend(matrix.strategies.iter().cloned());
    w.write_record(&header)?;
    for (name, row) in matrix.strategies.iter().zip(&matrix.values) {
        let mut record = vec![name.clone()];
        record.extend(row.iter().map(|v| v.to_string()));
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

/// Raw yearly counts plus the Lowess fit, one row per (strategy, year).
pub fn write_yearly(
    path: &Path,
    results: &[&RetrievalResult],
    store: &CorpusStore,
    frac: f64,
    iters: usize,
) -> Result<()> {
    let mut w = create(path)?;
    w.write_record(["strategy", "year", "count", "smoothed"])?;
    for result in results {
        let series = yearly_series(result, store);
        let points: Vec<(Scalar, Scalar)> = series
            .iter()
            .map(|(y, c)| (*y as Scalar, *c as Scalar))
            .collect();
        let smoothed: Vec<String> = if points.len() >= 2 {
            match lowess_smooth(&points, frac, iters) {
                Ok(fit) => fit.iter().map(|(_, v)| v.to_string()).collect(),
                Err(err) => {
                    log::warn!("lowess failed for {}: {err}", result.strategy_label());
                    vec![String::new(); points.len()]
                }
            }
        } else {
            vec![String::new(); points.len()]
        };
        for ((year, count), fit) in series.iter().zip(smoothed) {
            w.write_record([
                result.strategy_label(),
                year.to_string(),
                count.to_string(),
                fit,
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_disciplines(
    path: &Path,
    results: &[&RetrievalResult],
    store: &CorpusStore,
    taxonomy: &BTreeMap<JournalId, String>,
    min_share: Scalar,
) -> Result<()> {
    let mut w = create(path)?;
    w.write_record(["strategy", "discipline", "share"])?;
    for result in results {
        for (discipline, share) in
            discipline_distribution::<Scalar>(result, store, taxonomy, min_share)
        {
            w.write_record([result.strategy_label(), discipline, share.to_string()])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_journals(
    path: &Path,
    results: &[&RetrievalResult],
    store: &CorpusStore,
    top_n: usize,
) -> Result<()> {
    let mut w = create(path)?;
    w.write_record([
        "strategy",
        "journal",
        "absolute_frequency",
        "proportion",
        "proportion_display",
    ])?;
    for result in results {
        for entry in journal_ranking(result, store, top_n) {
            w.write_record([
                result.strategy_label(),
                entry.journal.clone(),
                entry.frequency.to_string(),
                entry.proportion.to_string(),
                format!("{:.2}", entry.proportion),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_sweep(path: &Path, points: &[SweepPoint]) -> Result<()> {
    let mut w = create(path)?;
    w.write_record(["threshold", "retrieved_count", "retrieval_rate"])?;
    for point in points {
        w.write_record([
            point.threshold.clone(),
            point.retrieved_count.to_string(),
            point.retrieval_rate.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Evaluation table mirroring the strategy-comparison layout: precision
/// and pseudo-recall, each with its confidence interval.
pub fn write_evaluation(path: &Path, report: &EvalReport<Scalar>) -> Result<()> {
    let mut w = create(path)?;
    w.write_record([
        "strategy",
        "sample_size",
        "precision",
        "precision_ci_lower",
        "precision_ci_upper",
        "pseudo_recall",
        "pseudo_recall_ci_lower",
        "pseudo_recall_ci_upper",
        "pool_hits",
        "pool_size",
    ])?;
    for row in &report.rows {
        w.write_record([
            row.strategy.clone(),
            row.sample_size.to_string(),
            row.precision.point.to_string(),
            row.precision.lower.to_string(),
            row.precision.upper.to_string(),
            row.pseudo_recall.point.to_string(),
            row.pseudo_recall.lower.to_string(),
            row.pseudo_recall.upper.to_string(),
            row.pool_hits.to_string(),
            report.pool_size.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Title + abstract export for external topic tools, over the union of
/// the retrieved sets.
pub fn write_texts(path: &Path, results: &[&RetrievalResult], store: &CorpusStore) -> Result<()> {
    let mut union = std::collections::BTreeSet::new();
    for result in results {
        union.extend(result.retrieved.iter().cloned());
    }
    let mut w = create(path)?;
    w.write_record(["paper_id", "title", "abstract"])?;
    for id in union {
        if let Some(paper) = store.paper(&id) {
            w.write_record([paper.paper_id.as_str(), &paper.title, &paper.abstract_text])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Load a journal->discipline taxonomy table (CSV: journal_id,discipline).
pub fn read_taxonomy(path: &Path) -> Result<BTreeMap<JournalId, String>> {
    let file = std::fs::File::open(path)
        .with_context(|| format!("cannot open taxonomy {}", path.display()))?;
    let mut reader = csv::Reader::from_reader(file);
    let mut out = BTreeMap::new();
    for row in reader.records() {
        let row = row?;
        let journal = JournalId::from(row.get(0).unwrap_or(""));
        let discipline = row.get(1).unwrap_or("").to_string();
        out.insert(journal, discipline);
    }
    Ok(out)
}

/// Taxonomy fallback: each journal's specialty label, when present.
pub fn taxonomy_from_specialties(store: &CorpusStore) -> BTreeMap<JournalId, String> {
    store
        .journals
        .values()
        .filter_map(|j| {
            j.specialty
                .as_ref()
                .map(|s| (j.journal_id.clone(), s.clone()))
        })
        .collect()
}

/// Write any serializable document as pretty JSON with a trailing newline.
pub fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    let mut file =
        std::fs::File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    serde_json::to_writer_pretty(&mut file, value)?;
    file.write_all(b"\n")?;
    Ok(())
}
