//! `evaluate`: precision / pseudo-recall table with bootstrap intervals.

use std::collections::BTreeMap;
use std::path::PathBuf;

use anyhow::Result;
use clap::Args;

use crossfield::metrics::evaluate;
use crossfield::strategies::RetrievalResult;
use crossfield::Scalar;

use crate::config::RunConfig;
use crate::UsageError;

#[derive(Args, Debug)]
pub struct EvaluateArgs {
    /// Run configuration document (bootstrap settings, label paths)
    #[arg(long)]
    pub config: PathBuf,
    /// Directory holding s1.json..s4.json; defaults to
    /// <output_dir>/results
    #[arg(long)]
    pub results_dir: Option<PathBuf>,
    /// Per-strategy label files as STRATEGY=PATH (repeatable); overrides
    /// the config's label paths
    #[arg(long = "labels", value_name = "STRATEGY=PATH")]
    pub labels: Vec<String>,
    /// Evaluation table output (CSV); defaults to
    /// <output_dir>/tables/evaluation.csv
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(args: EvaluateArgs) -> Result<()> {
    let config = RunConfig::load(&args.config).map_err(|e| UsageError(e.to_string()))?;
    let results_dir = args
        .results_dir
        .unwrap_or_else(|| config.paths.output_dir.join("results"));
    let out = args.out.unwrap_or_else(|| {
        config
            .paths
            .output_dir
            .join("tables")
            .join("evaluation.csv")
    });

    let label_paths: BTreeMap<String, PathBuf> = if args.labels.is_empty() {
        if config.paths.labels.is_empty() {
            return Err(UsageError(
                "no label files: pass --labels STRATEGY=PATH or set paths.labels".into(),
            )
            .into());
        }
        config.paths.labels.clone()
    } else {
        let mut map = BTreeMap::new();
        for spec in &args.labels {
            let (strategy, path) = spec.split_once('=').ok_or_else(|| {
                UsageError(format!(
                    "bad --labels value {spec:?}, expected STRATEGY=PATH"
                ))
            })?;
            map.insert(strategy.to_uppercase(), PathBuf::from(path));
        }
        map
    };

    let results = super::load_results_dir(&results_dir)?;
    let evaluated: Vec<&RetrievalResult> = results
        .iter()
        .filter(|r| label_paths.contains_key(&r.strategy_label()))
        .collect();
    anyhow::ensure!(
        !evaluated.is_empty(),
        "no stored results match the labeled strategies ({:?})",
        label_paths.keys().collect::<Vec<_>>()
    );

    let labels = super::labels::read_label_map(&label_paths)?;
    let report = evaluate::<Scalar>(
        &labels,
        &evaluated,
        config.metrics.bootstrap_replications,
        config.metrics.confidence_level,
        config.sampling.bootstrap_seed,
    )?;

    println!(
        "strategy  n     precision (CI)           pseudo-recall (CI)      pool={}",
        report.pool_size
    );
    for row in &report.rows {
        println!(
            "{:<8}  {:<4}  {:>5.1}% ({:>5.1}% - {:>5.1}%)  {:>5.1}% ({:>5.1}% - {:>5.1}%)",
            row.strategy,
            row.sample_size,
            row.precision.point * 100.0,
            row.precision.lower * 100.0,
            row.precision.upper * 100.0,
            row.pseudo_recall.point * 100.0,
            row.pseudo_recall.lower * 100.0,
            row.pseudo_recall.upper * 100.0,
        );
    }
    crate::tables::write_evaluation(&out, &report)?;
    println!("evaluation written to {}", out.display());
    Ok(())
}
