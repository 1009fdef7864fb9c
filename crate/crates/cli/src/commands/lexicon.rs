//! `lexicon`: extract keyword frequency rankings and curate lexicons.

use std::collections::BTreeSet;
use std::io::BufReader;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, Subcommand};

use crossfield::corpus::resolve_field;
use crossfield::lexicon::{
    curate_lexicon, extract_top_keywords, load_exclusions, KeywordRanking, RankEntry,
};

#[derive(Subcommand, Debug)]
pub enum LexiconCmd {
    /// Count keywords over a field's corpus and rank them by frequency
    Extract(ExtractArgs),
    /// Apply an exclusion list and cap to a ranking, producing a lexicon
    Curate(CurateArgs),
}

#[derive(Args, Debug)]
pub struct ExtractArgs {
    #[arg(long)]
    pub records: PathBuf,
    #[arg(long)]
    pub journals: PathBuf,
    /// Field definitions document ({"a": {...}, "b": {...}})
    #[arg(long)]
    pub fields: PathBuf,
    /// Which field to extract for: a or b
    #[arg(long)]
    pub which: String,
    /// Ranking size
    #[arg(short = 'k', long, default_value_t = 1000)]
    pub top: usize,
    #[arg(long)]
    pub schema: Option<PathBuf>,
    /// Ranking table output (CSV: keyword,frequency)
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct CurateArgs {
    /// Ranking table produced by `lexicon extract`
    #[arg(long)]
    pub ranking: PathBuf,
    /// Exclusion list (one keyword per line, # comments)
    #[arg(long)]
    pub exclusions: Option<PathBuf>,
    #[arg(long, default_value_t = crossfield::defaults::LEXICON_CAP)]
    pub cap: usize,
    #[arg(long)]
    pub field_name: String,
    /// Lexicon output (one keyword per line)
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run(cmd: LexiconCmd) -> Result<()> {
    match cmd {
        LexiconCmd::Extract(args) => extract(args),
        LexiconCmd::Curate(args) => curate(args),
    }
}

fn extract(args: ExtractArgs) -> Result<()> {
    if !matches!(args.which.as_str(), "a" | "b") {
        return Err(
            crate::UsageError(format!("--which must be a or b, got {}", args.which)).into(),
        );
    }
    let pair = super::fields::load_field_pair(&args.fields)?;
    let def = if args.which == "a" { pair.a } else { pair.b };
    let (store, _) = super::load_store(&args.records, &args.journals, args.schema.as_deref())?;
    let (resolved, _) = resolve_field(&def, &store.journals)?;
    let ranking = extract_top_keywords(&store, &resolved, args.top)?;

    let mut w = crate::tables::create(&args.out)?;
    w.write_record(["keyword", "frequency"])?;
    for entry in &ranking.entries {
        w.write_record([entry.keyword.clone(), entry.frequency.to_string()])?;
    }
    w.flush()?;
    println!(
        "{} keywords ranked for field {} -> {}",
        ranking.entries.len(),
        ranking.field_name,
        args.out.display()
    );
    Ok(())
}

fn read_ranking(path: &std::path::Path, field_name: &str) -> Result<KeywordRanking> {
    let file = std::fs::File::open(path)
        .with_context(|| format!("cannot open ranking {}", path.display()))?;
    let mut reader = csv::Reader::from_reader(BufReader::new(file));
    let mut entries = Vec::new();
    for row in reader.records() {
        let row = row?;
        entries.push(RankEntry {
            keyword: row.get(0).unwrap_or("").to_string(),
            frequency: row.get(1).unwrap_or("0").parse().unwrap_or(0),
        });
    }
    Ok(KeywordRanking {
        field_name: field_name.to_string(),
        entries,
    })
}

fn curate(args: CurateArgs) -> Result<()> {
    let ranking = read_ranking(&args.ranking, &args.field_name)?;
    let exclusions = match &args.exclusions {
        Some(path) => {
            let file = std::fs::File::open(path)
                .with_context(|| format!("cannot open exclusions {}", path.display()))?;
            load_exclusions(BufReader::new(file))?
        }
        None => BTreeSet::new(),
    };
    let lexicon = curate_lexicon(&ranking, &exclusions, args.cap)?;
    if let Some(parent) = args.out.parent() {
        std::fs::create_dir_all(parent)?;
    }
    let file = std::fs::File::create(&args.out)?;
    lexicon.write(std::io::BufWriter::new(file))?;
    println!(
        "lexicon {}: {} keywords ({} excluded, cap {}){} -> {}",
        lexicon.field_name,
        lexicon.len(),
        lexicon.provenance.exclusions_applied,
        lexicon.provenance.cap,
        if lexicon.provenance.shortfall {
            " [below cap]"
        } else {
            ""
        },
        args.out.display()
    );
    Ok(())
}
