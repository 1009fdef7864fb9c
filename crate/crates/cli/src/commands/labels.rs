//! `labels merge`: consolidate label files from independent annotators.

use std::collections::BTreeMap;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, Subcommand};

use crossfield::validation::{merge_labels, read_labels, write_labels, LabelRecord};

#[derive(Subcommand, Debug)]
pub enum LabelsCmd {
    /// Merge label files; conflicting include/exclude decisions fail
    Merge(MergeArgs),
}

#[derive(Args, Debug)]
pub struct MergeArgs {
    /// Consolidated label table output
    #[arg(long)]
    pub out: PathBuf,
    /// Label files to merge
    #[arg(required = true)]
    pub files: Vec<PathBuf>,
}

pub fn read_label_file(path: &Path) -> Result<Vec<LabelRecord>> {
    let file = std::fs::File::open(path)
        .with_context(|| format!("cannot open labels {}", path.display()))?;
    read_labels(BufReader::new(file))
        .with_context(|| format!("cannot parse labels {}", path.display()))
}

/// Read per-strategy label files as configured under `paths.labels`.
pub fn read_label_map(
    map: &BTreeMap<String, PathBuf>,
) -> Result<BTreeMap<String, Vec<LabelRecord>>> {
    let mut out = BTreeMap::new();
    for (strategy, path) in map {
        out.insert(strategy.clone(), read_label_file(path)?);
    }
    Ok(out)
}

pub fn run(cmd: LabelsCmd) -> Result<()> {
    match cmd {
        LabelsCmd::Merge(args) => {
            let sets: Vec<Vec<LabelRecord>> = args
                .files
                .iter()
                .map(|p| read_label_file(p))
                .collect::<Result<_>>()?;
            let merged = merge_labels(&sets)?;
            if let Some(parent) = args.out.parent() {
                std::fs::create_dir_all(parent)?;
            }
            let file = std::fs::File::create(&args.out)?;
            write_labels(std::io::BufWriter::new(file), &merged.records)?;
            println!(
                "{} papers consolidated, {} in the positive pool, {} doubtful",
                merged.records.len(),
                merged.positive_pool.len(),
                merged.doubtful.len()
            );
            if !merged.doubtful.is_empty() {
                println!(
                    "doubtful papers blocked from the pool: {}",
                    merged
                        .doubtful
                        .iter()
                        .map(|p| p.to_string())
                        .collect::<Vec<_>>()
                        .join(", ")
                );
            }
            println!("consolidated labels written to {}", args.out.display());
            Ok(())
        }
    }
}
