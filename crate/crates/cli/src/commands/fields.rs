//! `fields`: resolve field definitions against the journal table and
//! report journal and membership counts.

use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Args;
use serde::Serialize;

use crossfield::corpus::{field_membership, resolve_field, FieldDefinition, ResolveReport};

use crate::config::FieldPair;
use crate::tables::write_json;

#[derive(Args, Debug)]
pub struct FieldsArgs {
    /// Line-delimited paper records
    #[arg(long)]
    pub records: PathBuf,
    /// Line-delimited journal records
    #[arg(long)]
    pub journals: PathBuf,
    /// Field definitions document ({"a": {...}, "b": {...}})
    #[arg(long)]
    pub fields: PathBuf,
    /// Schema mapping document
    #[arg(long)]
    pub schema: Option<PathBuf>,
    /// Write resolved definitions and reports here (JSON)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
pub struct FieldsOutcome {
    pub a: ResolvedField,
    pub b: ResolvedField,
    pub dual_membership: usize,
}

#[derive(Serialize)]
pub struct ResolvedField {
    pub definition: FieldDefinition,
    pub report: ResolveReport,
    pub membership_size: usize,
}

pub fn load_field_pair(path: &std::path::Path) -> Result<FieldPair> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read field definitions {}", path.display()))?;
    serde_json::from_str(&text)
        .with_context(|| format!("cannot parse field definitions {}", path.display()))
}

pub fn run(args: FieldsArgs) -> Result<()> {
    let pair = load_field_pair(&args.fields)?;
    let (store, _) = super::load_store(&args.records, &args.journals, args.schema.as_deref())?;

    let (resolved_a, report_a) = resolve_field(&pair.a, &store.journals)?;
    let (resolved_b, report_b) = resolve_field(&pair.b, &store.journals)?;
    let members_a = field_membership(&store, &resolved_a)?;
    let members_b = field_membership(&store, &resolved_b)?;
    let dual = members_a.intersection(&members_b).count();

    for (report, members) in [(&report_a, &members_a), (&report_b, &members_b)] {
        println!(
            "field {}: {} journals matched ({} wildcard, {} specialty), {} after exclusions, {} papers",
            report.field_name,
            report.before_exclusion,
            report.wildcard_matches,
            report.specialty_matches,
            report.after_exclusion,
            members.len()
        );
    }
    println!("papers in both fields: {dual}");

    if let Some(path) = &args.out {
        let outcome = FieldsOutcome {
            a: ResolvedField {
                definition: resolved_a,
                report: report_a,
                membership_size: members_a.len(),
            },
            b: ResolvedField {
                definition: resolved_b,
                report: report_b,
                membership_size: members_b.len(),
            },
            dual_membership: dual,
        };
        write_json(path, &outcome)?;
        println!("resolution written to {}", path.display());
    }
    Ok(())
}
