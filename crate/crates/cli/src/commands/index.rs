//! `index`: build the citation index and optionally export the edge list.

use std::path::PathBuf;

use anyhow::Result;
use clap::Args;

use crossfield::graph::{build_citation_index, export_edge_list};

#[derive(Args, Debug)]
pub struct IndexArgs {
    #[arg(long)]
    pub records: PathBuf,
    #[arg(long)]
    pub journals: PathBuf,
    #[arg(long)]
    pub schema: Option<PathBuf>,
    /// Edge-list export: one `citing<TAB>cited` per line
    #[arg(long)]
    pub export_edges: Option<PathBuf>,
}

pub fn run(args: IndexArgs) -> Result<()> {
    let (store, report) = super::load_store(&args.records, &args.journals, args.schema.as_deref())?;
    let index = build_citation_index(&store);
    println!(
        "{} papers, {} in-universe citation edges, {} dangling references dropped",
        store.len(),
        index.edge_count(),
        index.dangling_references
    );
    debug_assert_eq!(index.dangling_references, report.dangling_references);
    if let Some(path) = &args.export_edges {
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent)?;
        }
        let file = std::fs::File::create(path)?;
        export_edge_list(&index, std::io::BufWriter::new(file))?;
        println!("edge list written to {}", path.display());
    }
    Ok(())
}
