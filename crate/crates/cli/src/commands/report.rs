//! `report`: regenerate the metric tables from stored retrieval results.

use std::path::PathBuf;

use anyhow::Result;
use clap::Args;

use crossfield::strategies::RetrievalResult;

use crate::config::RunConfig;
use crate::UsageError;

#[derive(Args, Debug)]
pub struct ReportArgs {
    /// Run configuration document
    #[arg(long)]
    pub config: PathBuf,
    /// Directory holding s1.json..s4.json; defaults to
    /// <output_dir>/results
    #[arg(long)]
    pub results_dir: Option<PathBuf>,
    /// Table output directory; defaults to <output_dir>/tables
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(args: ReportArgs) -> Result<()> {
    let config = RunConfig::load(&args.config).map_err(|e| UsageError(e.to_string()))?;
    config.validate_paths().map_err(UsageError)?;
    let results_dir = args
        .results_dir
        .unwrap_or_else(|| config.paths.output_dir.join("results"));
    let tables_dir = args
        .out
        .unwrap_or_else(|| config.paths.output_dir.join("tables"));

    let (store, _) = super::load_store(&config.paths.records, &config.paths.journals, None)?;
    let results = super::load_results_dir(&results_dir)?;
    // refuse to mix results from a different record universe
    let store_fp = store.fingerprint();
    for result in &results {
        anyhow::ensure!(
            result.metadata.store_fingerprint == store_fp,
            "result {} was produced from store {} but the configured inputs hash to {}",
            result.strategy_label(),
            result.metadata.store_fingerprint,
            store_fp
        );
    }
    let refs: Vec<&RetrievalResult> = results.iter().collect();
    super::run::write_all_tables(&config, &store, &refs, &tables_dir)?;
    println!("tables written to {}", tables_dir.display());
    Ok(())
}
