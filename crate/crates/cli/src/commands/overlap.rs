//! `overlap`: pairwise Jaccard matrix over stored retrieval results.

use std::path::PathBuf;

use anyhow::Result;
use clap::Args;

use crossfield::metrics::overlap_matrix;
use crossfield::strategies::RetrievalResult;
use crossfield::Scalar;

#[derive(Args, Debug)]
pub struct OverlapArgs {
    /// Retrieval result files (results/s1.json ...)
    #[arg(required = true)]
    pub results: Vec<PathBuf>,
    /// Overlap matrix output (CSV)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(args: OverlapArgs) -> Result<()> {
    let results: Vec<RetrievalResult> = args
        .results
        .iter()
        .map(|p| super::load_result(p))
        .collect::<Result<_>>()?;
    let refs: Vec<&RetrievalResult> = results.iter().collect();
    let matrix = overlap_matrix::<Scalar>(&refs);

    print!("{:<10}", "");
    for name in &matrix.strategies {
        print!("{name:>8}");
    }
    println!();
    for (name, row) in matrix.strategies.iter().zip(&matrix.values) {
        print!("{name:<10}");
        for value in row {
            print!("{value:>8.3}");
        }
        println!();
    }

    if let Some(path) = &args.out {
        crate::tables::write_overlap(path, &refs)?;
        println!("overlap matrix written to {}", path.display());
    }
    Ok(())
}
