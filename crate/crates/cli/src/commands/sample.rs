//! `sample`: reproducible random sample from a retrieval result.

use std::path::PathBuf;

use anyhow::Result;
use clap::Args;

use crossfield::validation::draw_sample;

#[derive(Args, Debug)]
pub struct SampleArgs {
    /// Retrieval result file
    #[arg(long)]
    pub result: PathBuf,
    /// Sample size
    #[arg(short = 'n', long, default_value_t = crossfield::defaults::SAMPLE_SIZE)]
    pub size: usize,
    #[arg(long)]
    pub seed: u64,
    /// Sample draw output (JSON)
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run(args: SampleArgs) -> Result<()> {
    let result = super::load_result(&args.result)?;
    let draw = draw_sample(&result, args.size, args.seed)?;
    if let Some(parent) = args.out.parent() {
        std::fs::create_dir_all(parent)?;
    }
    let file = std::fs::File::create(&args.out)?;
    draw.write_json(std::io::BufWriter::new(file))?;
    println!(
        "{} papers sampled from {} ({} retrieved) with seed {} -> {}",
        draw.sample.len(),
        draw.strategy,
        result.len(),
        args.seed,
        args.out.display()
    );
    Ok(())
}
