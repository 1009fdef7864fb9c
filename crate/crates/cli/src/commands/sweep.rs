//! `sweep`: threshold sweep for the link-based strategies.

use std::path::PathBuf;
use std::str::FromStr;

use anyhow::Result;
use clap::Args;

use crossfield::corpus::{field_membership, resolve_field};
use crossfield::graph::build_citation_index;
use crossfield::strategies::{threshold_sweep, FieldView, RateBase, StrategyId, SweepGrid};
use crossfield::Tau;

use crate::config::RunConfig;
use crate::UsageError;

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// Run configuration document (for inputs and field definitions)
    #[arg(long)]
    pub config: PathBuf,
    /// Strategy to sweep: s3 or s4
    #[arg(long)]
    pub strategy: String,
    /// Comma-separated grid; defaults to the configured relative grid, or
    /// the configured absolute grid with --absolute
    #[arg(long)]
    pub grid: Option<String>,
    /// Sweep absolute cross-link counts instead of relative shares
    #[arg(long)]
    pub absolute: bool,
    /// Retrieval-rate denominator: a, b, union, or all
    #[arg(long)]
    pub base: Option<String>,
    /// Sweep table output (CSV)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(args: SweepArgs) -> Result<()> {
    let config = RunConfig::load(&args.config).map_err(|e| UsageError(e.to_string()))?;
    config.validate_paths().map_err(UsageError)?;

    let strategy = match args.strategy.to_ascii_lowercase().as_str() {
        "s3" => StrategyId::S3,
        "s4" => StrategyId::S4,
        other => {
            return Err(UsageError(format!("sweep supports s3 or s4, got {other}")).into());
        }
    };
    let base = match &args.base {
        Some(raw) => RateBase::from_str(raw).map_err(|e| UsageError(e.to_string()))?,
        None => config.strategies.sweep_base,
    };
    let grid = build_grid(&args, &config)?;

    let (store, _) = super::load_store(&config.paths.records, &config.paths.journals, None)?;
    let (resolved_a, _) = resolve_field(&config.fields.a, &store.journals)?;
    let (resolved_b, _) = resolve_field(&config.fields.b, &store.journals)?;
    let members_a = field_membership(&store, &resolved_a)?;
    let members_b = field_membership(&store, &resolved_b)?;
    let index = build_citation_index(&store);

    let points = threshold_sweep(
        &store,
        FieldView::new(&resolved_a.field_name, &members_a),
        FieldView::new(&resolved_b.field_name, &members_b),
        &index,
        strategy,
        &grid,
        base,
    )?;

    println!("threshold  retrieved  rate");
    for point in &points {
        println!(
            "{:<9}  {:<9}  {:.4}",
            point.threshold, point.retrieved_count, point.retrieval_rate
        );
    }
    let default_tau = match strategy {
        StrategyId::S3 => config.strategies.tau_s3,
        _ => config.strategies.tau_s4,
    };
    println!(
        "note: configured default threshold for {strategy} is {default_tau}; pick thresholds where the strategies' retrieval rates align"
    );
    if let Some(path) = &args.out {
        crate::tables::write_sweep(path, &points)?;
        println!("sweep written to {}", path.display());
    }
    Ok(())
}

fn build_grid(args: &SweepArgs, config: &RunConfig) -> Result<SweepGrid> {
    match (&args.grid, args.absolute) {
        (None, false) => Ok(SweepGrid::Relative(config.strategies.sweep_grid.clone())),
        (None, true) => Ok(SweepGrid::Absolute(config.strategies.absolute_grid.clone())),
        (Some(raw), false) => {
            let taus: Result<Vec<Tau>, _> = raw
                .split(',')
                .map(|s| Tau::from_decimal_str(s.trim()))
                .collect();
            Ok(SweepGrid::Relative(
                taus.map_err(|e| UsageError(format!("bad grid: {e}")))?,
            ))
        }
        (Some(raw), true) => {
            let ks: Result<Vec<u32>, _> = raw.split(',').map(|s| s.trim().parse()).collect();
            Ok(SweepGrid::Absolute(
                ks.map_err(|e| UsageError(format!("bad grid: {e}")))?,
            ))
        }
    }
}
