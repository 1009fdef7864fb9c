//! `synth`: generate a synthetic corpus bundle with planted ground truth.
//!
//! Emits the same record file format the ingester consumes, plus the
//! truth table, matching lexicons, and field definitions, so a generated
//! bundle can drive the full pipeline directly.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::Args;

use crossfield::corpus::{export_journals, export_records};
use crossfield::synth::{field_definitions, generate_corpus, write_truth, GenConfig};

use crate::config::FieldPair;
use crate::tables::write_json;

#[derive(Args, Debug)]
pub struct SynthArgs {
    /// Generator configuration (JSON); built-in defaults when unset
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Override the configured seed
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory for the bundle
    #[arg(long)]
    pub out_dir: PathBuf,
}

pub fn run(args: SynthArgs) -> Result<()> {
    let mut config = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("cannot read generator config {}", path.display()))?;
            serde_json::from_str::<GenConfig>(&text)
                .with_context(|| format!("cannot parse generator config {}", path.display()))?
        }
        None => GenConfig::default(),
    };
    if let Some(seed) = args.seed {
        config.seed = seed;
    }

    let (store, truth) = generate_corpus(&config)?;
    let out = &args.out_dir;
    std::fs::create_dir_all(out)?;

    write_file(&out.join("records.jsonl"), |w| export_records(&store, w))?;
    write_file(&out.join("journals.jsonl"), |w| export_journals(&store, w))?;
    {
        let file = std::fs::File::create(out.join("truth.csv"))?;
        write_truth(std::io::BufWriter::new(file), &truth)?;
    }
    {
        let file = std::fs::File::create(out.join("lexicon_a.txt"))?;
        crossfield::synth::lexicon_a(&config).write(std::io::BufWriter::new(file))?;
    }
    {
        let file = std::fs::File::create(out.join("lexicon_b.txt"))?;
        crossfield::synth::lexicon_b(&config).write(std::io::BufWriter::new(file))?;
    }
    let (def_a, def_b) = field_definitions();
    write_json(&out.join("fields.json"), &FieldPair { a: def_a, b: def_b })?;
    write_json(&out.join("gen_config.json"), &config)?;

    println!(
        "{} papers ({} planted), {} journals -> {}",
        truth.log.total_papers,
        truth.log.planted_count,
        store.journals.len(),
        out.display()
    );
    Ok(())
}

fn write_file<F>(path: &Path, write: F) -> Result<()>
where
    F: FnOnce(std::io::BufWriter<std::fs::File>) -> std::io::Result<()>,
{
    let file =
        std::fs::File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    write(std::io::BufWriter::new(file))?;
    Ok(())
}
