//! `run`: the full pipeline, ingest through report bundle.
//!
//! Outputs are a fixed file set under the configured output directory and
//! are byte-reproducible for fixed inputs, seeds, and config, regardless
//! of thread count.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::Args;
use serde::Serialize;

use crossfield::corpus::{field_membership, resolve_field, CorpusStore};
use crossfield::graph::build_citation_index;
use crossfield::lexicon::Lexicon;
use crossfield::metrics::{count_report, evaluate};
use crossfield::strategies::{
    run_s1, run_s2, run_s3, run_s4, threshold_sweep, FieldView, RetrievalResult, StrategyId,
    StrategyParams, SweepGrid,
};
use crossfield::Scalar;

use crate::config::RunConfig;
use crate::tables;
use crate::UsageError;

#[derive(Args, Debug)]
pub struct RunArgs {
    /// Run configuration document (JSON)
    #[arg(long)]
    pub config: PathBuf,
    /// Override the configured output directory
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
struct Manifest<'a> {
    version: &'a str,
    config_fingerprint: String,
    store_fingerprint: String,
    field_fingerprints: BTreeMap<String, String>,
    lexicon_fingerprints: BTreeMap<String, String>,
    seeds: Seeds,
    outputs: Vec<String>,
    config: &'a RunConfig,
}

#[derive(Serialize)]
struct Seeds {
    sample_seed: u64,
    bootstrap_seed: u64,
}

pub fn run(args: RunArgs, threads_flag: Option<usize>) -> Result<()> {
    let mut config = RunConfig::load(&args.config).map_err(|e| UsageError(e.to_string()))?;
    if let Some(out) = args.out {
        config.paths.output_dir = out;
    }
    config.validate_paths().map_err(UsageError)?;
    if threads_flag.is_none() {
        if let Some(n) = config.threads {
            crate::set_threads(n);
        }
    }
    // a complete bundle ends with manifest.json; a failed run leaves an
    // INCOMPLETE marker naming the failed stage instead
    match execute(&config) {
        Ok(()) => Ok(()),
        Err(err) => {
            let marker = config.paths.output_dir.join("INCOMPLETE");
            let _ = std::fs::write(&marker, format!("{err:#}\n"));
            Err(err)
        }
    }
}

/// Load a configured lexicon, or the bundled list matching the field's
/// position (A: neuroscience, B: computer science) when no path is set.
pub fn load_lexicon_side(config: &RunConfig, side_a: bool) -> Result<Lexicon> {
    let (path, field_name, cap) = if side_a {
        (
            &config.paths.lexicon_a,
            &config.fields.a.field_name,
            config.metrics.lexicon_cap_a,
        )
    } else {
        (
            &config.paths.lexicon_b,
            &config.fields.b.field_name,
            config.metrics.lexicon_cap_b,
        )
    };
    match path {
        Some(path) => Lexicon::load(path, field_name, cap)
            .with_context(|| format!("cannot load lexicon {}", path.display())),
        None if side_a => Ok(Lexicon::bundled_neuroscience()),
        None => Ok(Lexicon::bundled_computer_science()),
    }
}

pub struct PipelineData {
    pub store: CorpusStore,
    pub results: Vec<RetrievalResult>,
}

pub fn execute(config: &RunConfig) -> Result<()> {
    let out = config.paths.output_dir.clone();
    std::fs::create_dir_all(&out)?;

    // ingest
    let (mut store, ingest_report) =
        super::load_store(&config.paths.records, &config.paths.journals, None)?;
    tables::write_json(&out.join("ingest_report.json"), &ingest_report)?;

    // resolve fields and cache memberships
    let (resolved_a, report_a) = resolve_field(&config.fields.a, &store.journals)?;
    let (resolved_b, report_b) = resolve_field(&config.fields.b, &store.journals)?;
    let members_a = field_membership(&store, &resolved_a)?;
    let members_b = field_membership(&store, &resolved_b)?;
    store.cache_membership(&resolved_a.field_name, members_a.clone())?;
    store.cache_membership(&resolved_b.field_name, members_b.clone())?;
    let dual = members_a.intersection(&members_b).count();
    tables::write_json(
        &out.join("fields.json"),
        &super::fields::FieldsOutcome {
            a: super::fields::ResolvedField {
                definition: resolved_a.clone(),
                report: report_a,
                membership_size: members_a.len(),
            },
            b: super::fields::ResolvedField {
                definition: resolved_b.clone(),
                report: report_b,
                membership_size: members_b.len(),
            },
            dual_membership: dual,
        },
    )?;

    // lexicons
    let lex_a = load_lexicon_side(config, true)?;
    let lex_b = load_lexicon_side(config, false)?;

    // citation index
    let index = build_citation_index(&store);

    // strategies
    let view_a = FieldView::new(&resolved_a.field_name, &members_a);
    let view_b = FieldView::new(&resolved_b.field_name, &members_b);
    let results = vec![
        run_s1(&store, &lex_a, &lex_b)?,
        run_s2(&store, view_a, view_b, &lex_a, &lex_b)?,
        run_s3(
            &store,
            view_a,
            view_b,
            &index,
            StrategyParams::s3(config.strategies.tau_s3),
        )?,
        run_s4(
            &store,
            view_a,
            view_b,
            &index,
            StrategyParams::s4(config.strategies.tau_s4),
        )?,
    ];
    let results_dir = out.join("results");
    std::fs::create_dir_all(&results_dir)?;
    for result in &results {
        let name = format!("{}.json", result.strategy_label().to_lowercase());
        let file = std::fs::File::create(results_dir.join(name))?;
        result.write_json(std::io::BufWriter::new(file))?;
    }

    // threshold sweeps
    let grid = SweepGrid::Relative(config.strategies.sweep_grid.clone());
    for (strategy, name) in [
        (StrategyId::S3, "sweep_s3.csv"),
        (StrategyId::S4, "sweep_s4.csv"),
    ] {
        let points = threshold_sweep(
            &store,
            view_a,
            view_b,
            &index,
            strategy,
            &grid,
            config.strategies.sweep_base,
        )?;
        tables::write_sweep(&out.join("tables").join(name), &points)?;
    }

    // metric tables + evaluation
    let refs: Vec<&RetrievalResult> = results.iter().collect();
    write_all_tables(config, &store, &refs, &out.join("tables"))?;
    tables::write_texts(&out.join("texts.csv"), &refs, &store)?;

    // manifest last, listing everything the run produced
    let mut outputs = collect_outputs(&out)?;
    outputs.push("manifest.json".to_string());
    outputs.sort();
    let manifest = Manifest {
        version: env!("CARGO_PKG_VERSION"),
        config_fingerprint: config.fingerprint(),
        store_fingerprint: store.fingerprint(),
        field_fingerprints: BTreeMap::from([
            (resolved_a.field_name.clone(), resolved_a.fingerprint()),
            (resolved_b.field_name.clone(), resolved_b.fingerprint()),
        ]),
        lexicon_fingerprints: BTreeMap::from([
            (lex_a.field_name.clone(), lex_a.fingerprint()),
            (lex_b.field_name.clone(), lex_b.fingerprint()),
        ]),
        seeds: Seeds {
            sample_seed: config.sampling.sample_seed,
            bootstrap_seed: config.sampling.bootstrap_seed,
        },
        outputs,
        config,
    };
    tables::write_json(&out.join("manifest.json"), &manifest)?;

    for result in &results {
        println!("{}: {} papers", result.strategy_label(), result.len());
    }
    println!("report bundle written to {}", out.display());
    Ok(())
}

/// Write the metric tables shared by `run` and `report`.
pub fn write_all_tables(
    config: &RunConfig,
    store: &CorpusStore,
    results: &[&RetrievalResult],
    tables_dir: &Path,
) -> Result<()> {
    tables::write_counts(&tables_dir.join("counts.csv"), &count_report(results))?;
    tables::write_overlap(&tables_dir.join("overlap.csv"), results)?;
    tables::write_yearly(
        &tables_dir.join("yearly.csv"),
        results,
        store,
        config.metrics.lowess_frac,
        config.metrics.lowess_iters,
    )?;
    let taxonomy = match &config.paths.taxonomy {
        Some(path) => tables::read_taxonomy(path)?,
        None => tables::taxonomy_from_specialties(store),
    };
    tables::write_disciplines(
        &tables_dir.join("disciplines.csv"),
        results,
        store,
        &taxonomy,
        config.metrics.others_min_share as Scalar,
    )?;
    tables::write_journals(
        &tables_dir.join("journals.csv"),
        results,
        store,
        config.metrics.top_journals,
    )?;

    if !config.paths.labels.is_empty() {
        let labels = super::labels::read_label_map(&config.paths.labels)?;
        let report = evaluate::<Scalar>(
            &labels,
            results,
            config.metrics.bootstrap_replications,
            config.metrics.confidence_level,
            config.sampling.bootstrap_seed,
        )?;
        tables::write_evaluation(&tables_dir.join("evaluation.csv"), &report)?;
    }
    Ok(())
}

/// Relative paths of every file under the output directory.
fn collect_outputs(out: &Path) -> Result<Vec<String>> {
    fn walk(dir: &Path, base: &Path, acc: &mut Vec<String>) -> Result<()> {
        let mut entries: Vec<_> = std::fs::read_dir(dir)?.collect::<std::io::Result<_>>()?;
        entries.sort_by_key(|e| e.file_name());
        for entry in entries {
            let path = entry.path();
            if path.is_dir() {
                walk(&path, base, acc)?;
            } else {
                acc.push(
                    path.strip_prefix(base)
                        .expect("under base")
                        .to_string_lossy()
                        .replace('\\', "/"),
                );
            }
        }
        Ok(())
    }
    let mut acc = Vec::new();
    walk(out, out, &mut acc)?;
    Ok(acc)
}
