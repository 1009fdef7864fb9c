//! `ingest`: validate record streams and emit the ingestion report.

use std::path::PathBuf;

use anyhow::Result;
use clap::Args;

use crossfield::corpus::{export_journals, export_records};

use crate::tables::write_json;

#[derive(Args, Debug)]
pub struct IngestArgs {
    /// Line-delimited paper records (one JSON object per line)
    #[arg(long)]
    pub records: PathBuf,
    /// Line-delimited journal records
    #[arg(long)]
    pub journals: PathBuf,
    /// Schema mapping document (source field name -> record field)
    #[arg(long)]
    pub schema: Option<PathBuf>,
    /// Write the ingestion report here (JSON)
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Re-export the canonical record stream (sorted, normalized)
    #[arg(long)]
    pub export_records: Option<PathBuf>,
    /// Re-export the canonical journal stream
    #[arg(long)]
    pub export_journals: Option<PathBuf>,
}

pub fn run(args: IngestArgs) -> Result<()> {
    let (store, report) = super::load_store(&args.records, &args.journals, args.schema.as_deref())?;
    println!(
        "{} ingested, {} skipped, {} duplicates dropped, {} journals, {} dangling references",
        report.papers_ingested,
        report.papers_skipped,
        report.duplicate_papers_dropped,
        report.journals_ingested,
        report.dangling_references
    );
    println!("store fingerprint {}", store.fingerprint());
    if let Some(path) = &args.report {
        write_json(path, &report)?;
        println!("report written to {}", path.display());
    }
    if let Some(path) = &args.export_records {
        let file = std::fs::File::create(path)?;
        export_records(&store, std::io::BufWriter::new(file))?;
    }
    if let Some(path) = &args.export_journals {
        let file = std::fs::File::create(path)?;
        export_journals(&store, std::io::BufWriter::new(file))?;
    }
    Ok(())
}
