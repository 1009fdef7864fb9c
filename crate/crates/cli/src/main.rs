use clap::{Parser, Subcommand};

use crossfield_cli::commands::{
    annotate, evaluate, fields, index, ingest, labels, lexicon, overlap, report, run, sample,
    sweep, synth,
};
use crossfield_cli::{set_threads, UsageError};

/// Delineate and evaluate a corpus at the intersection of two scientific
/// fields: keyword- and citation-based retrieval, threshold sweeps,
/// overlap and trend metrics, and manual-validation tooling.
#[derive(Parser, Debug)]
#[command(name = "crossfield", version, max_term_width = 100)]
struct Cli {
    /// Cap worker threads (results do not depend on this)
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Ingest record streams and report counts and issues
    Ingest(ingest::IngestArgs),
    /// Resolve field definitions against the journal table
    Fields(fields::FieldsArgs),
    /// Extract keyword rankings and curate lexicons
    #[command(subcommand)]
    Lexicon(lexicon::LexiconCmd),
    /// Build the citation index
    Index(index::IndexArgs),
    /// Run the full pipeline and write the report bundle
    Run(run::RunArgs),
    /// Sweep retrieval thresholds for S3/S4
    Sweep(sweep::SweepArgs),
    /// Pairwise Jaccard overlap of stored results
    Overlap(overlap::OverlapArgs),
    /// Regenerate metric tables from stored results
    Report(report::ReportArgs),
    /// Draw a reproducible sample from a result
    Sample(sample::SampleArgs),
    /// Label a sample in a resumable terminal session
    Annotate(annotate::AnnotateArgs),
    /// Work with label files
    #[command(subcommand)]
    Labels(labels::LabelsCmd),
    /// Compute the precision / pseudo-recall table
    Evaluate(evaluate::EvaluateArgs),
    /// Generate a synthetic corpus with planted ground truth
    Synth(synth::SynthArgs),
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        set_threads(n);
    }
    let threads_flag = cli.threads;

    let outcome = match cli.command {
        Command::Ingest(args) => ingest::run(args),
        Command::Fields(args) => fields::run(args),
        Command::Lexicon(cmd) => lexicon::run(cmd),
        Command::Index(args) => index::run(args),
        Command::Run(args) => run::run(args, threads_flag),
        Command::Sweep(args) => sweep::run(args),
        Command::Overlap(args) => overlap::run(args),
        Command::Report(args) => report::run(args),
        Command::Sample(args) => sample::run(args),
        Command::Annotate(args) => annotate::run(args),
        Command::Labels(cmd) => labels::run(cmd),
        Command::Evaluate(args) => evaluate::run(args),
        Command::Synth(args) => synth::run(args),
    };

    if let Err(err) = outcome {
        if err.downcast_ref::<UsageError>().is_some() {
            eprintln!("usage error: {err}");
            std::process::exit(2);
        }
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}
