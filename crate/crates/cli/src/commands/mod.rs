//! Subcommand implementations. Each module owns its clap `Args` struct
//! and a `run` function; shared input loading lives here.

pub mod annotate;
pub mod evaluate;
pub mod fields;
pub mod index;
pub mod ingest;
pub mod labels;
pub mod lexicon;
pub mod overlap;
pub mod report;
pub mod run;
pub mod sample;
pub mod sweep;
pub mod synth;

use std::io::BufReader;
use std::path::Path;

use anyhow::{Context, Result};

use crossfield::corpus::{ingest_records, CorpusStore, IngestReport, SchemaConfig};
use crossfield::strategies::RetrievalResult;

/// Ingest a record/journal file pair under an optional schema mapping.
pub fn load_store(
    records: &Path,
    journals: &Path,
    schema: Option<&Path>,
) -> Result<(CorpusStore, IngestReport)> {
    let schema_config = match schema {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("cannot read schema {}", path.display()))?;
            serde_json::from_str::<SchemaConfig>(&text)
                .with_context(|| format!("cannot parse schema {}", path.display()))?
        }
        None => SchemaConfig::default(),
    };
    let records_file = std::fs::File::open(records)
        .with_context(|| format!("cannot open records {}", records.display()))?;
    let journals_file = std::fs::File::open(journals)
        .with_context(|| format!("cannot open journals {}", journals.display()))?;
    let (store, report) = ingest_records(
        BufReader::new(records_file),
        BufReader::new(journals_file),
        &schema_config,
    )?;
    for issue in &report.issues {
        log::warn!("{}:{} {}", issue.stream, issue.line, issue.message);
    }
    Ok((store, report))
}

pub fn load_result(path: &Path) -> Result<RetrievalResult> {
    let file = std::fs::File::open(path)
        .with_context(|| format!("cannot open result {}", path.display()))?;
    RetrievalResult::read_json(BufReader::new(file))
        .with_context(|| format!("cannot parse result {}", path.display()))
}

/// Load `s1.json` .. `s4.json` from a results directory, skipping absent
/// files.
pub fn load_results_dir(dir: &Path) -> Result<Vec<RetrievalResult>> {
    let mut results = Vec::new();
    for name in ["s1.json", "s2.json", "s3.json", "s4.json"] {
        let path = dir.join(name);
        if path.exists() {
            results.push(load_result(&path)?);
        }
    }
    anyhow::ensure!(
        !results.is_empty(),
        "no retrieval results (s1.json..s4.json) found in {}",
        dir.display()
    );
    Ok(results)
}
