//! `annotate`: interactive terminal labeling session over a sample draw.

use std::io::BufReader;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Args;

use crossfield::validation::session::{annotate_session, SessionOptions};
use crossfield::validation::{SampleDraw, DEFAULT_GUIDELINE};

#[derive(Args, Debug)]
pub struct AnnotateArgs {
    #[arg(long)]
    pub records: PathBuf,
    #[arg(long)]
    pub journals: PathBuf,
    #[arg(long)]
    pub schema: Option<PathBuf>,
    /// Sample draw produced by `sample`
    #[arg(long)]
    pub sample: PathBuf,
    /// Retrieval result for evidence display (optional)
    #[arg(long)]
    pub result: Option<PathBuf>,
    /// Guideline document; bundled checklist when unset
    #[arg(long)]
    pub guideline: Option<PathBuf>,
    /// Label file (created or resumed)
    #[arg(long)]
    pub labels: PathBuf,
    #[arg(long)]
    pub annotator: String,
}

pub fn run(args: AnnotateArgs) -> Result<()> {
    let (store, _) = super::load_store(&args.records, &args.journals, args.schema.as_deref())?;
    let sample_file = std::fs::File::open(&args.sample)
        .with_context(|| format!("cannot open sample {}", args.sample.display()))?;
    let sample = SampleDraw::read_json(BufReader::new(sample_file))
        .with_context(|| format!("cannot parse sample {}", args.sample.display()))?;
    let result = match &args.result {
        Some(path) => Some(super::load_result(path)?),
        None => None,
    };
    let guideline = match &args.guideline {
        Some(path) => std::fs::read_to_string(path)
            .with_context(|| format!("cannot read guideline {}", path.display()))?,
        None => DEFAULT_GUIDELINE.to_string(),
    };
    if let Some(parent) = args.labels.parent() {
        std::fs::create_dir_all(parent)?;
    }

    let stdin = std::io::stdin();
    let stdout = std::io::stdout();
    let outcome = annotate_session(
        &sample,
        &store,
        result.as_ref(),
        &guideline,
        &args.labels,
        &SessionOptions {
            annotator: args.annotator.clone(),
            timestamp: None,
        },
        stdin.lock(),
        stdout.lock(),
    )?;
    log::info!(
        "session wrote {} labels to {}",
        outcome.labels.len(),
        args.labels.display()
    );
    Ok(())
}
