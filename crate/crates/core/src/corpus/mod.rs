//! Bibliographic record store and disciplinary field resolution.
//!
//! A [`CorpusStore`] is immutable once ingestion and membership caching are
//! done and can be shared freely across parallel readers. Disciplinary
//! fields are declarative [`FieldDefinition`]s (journal-title wildcards,
//! specialty labels, explicit exclusions) resolved against the journal
//! table.

mod ingest;

pub use ingest::{
    export_journals, export_records, ingest_records, IngestReport, PaperSchema, RecordIssue,
    SchemaConfig,
};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fingerprint::Fingerprinter;

/// Opaque paper identifier (unique within a store).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PaperId(pub String);

impl PaperId {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for PaperId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for PaperId {
    fn from(s: &str) -> Self {
        PaperId(s.to_string())
    }
}

impl From<String> for PaperId {
    fn from(s: String) -> Self {
        PaperId(s)
    }
}

/// Opaque journal identifier.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct JournalId(pub String);

impl JournalId {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for JournalId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for JournalId {
    fn from(s: &str) -> Self {
        JournalId(s.to_string())
    }
}

impl From<String> for JournalId {
    fn from(s: String) -> Self {
        JournalId(s)
    }
}

/// One bibliographic record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PaperRecord {
    pub paper_id: PaperId,
    #[serde(default)]
    pub title: String,
    /// May be empty.
    #[serde(rename = "abstract", default)]
    pub abstract_text: String,
    /// Positive calendar year when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub year: Option<i32>,
    pub journal_id: JournalId,
    /// Raw keyword strings as supplied by the source; normalization happens
    /// at match time.
    #[serde(default)]
    pub keywords: Vec<String>,
    /// Outgoing references; may point outside the ingested universe.
    #[serde(default)]
    pub references: Vec<PaperId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub specialty: Option<String>,
}

/// One journal table entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JournalRecord {
    pub journal_id: JournalId,
    #[serde(default)]
    pub title: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub specialty: Option<String>,
}

/// Declarative rule set resolving to a set of journals, hence a
/// disciplinary corpus.
///
/// `resolved_journals` = (wildcard matches ∪ specialty matches) \ exclusions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDefinition {
    pub field_name: String,
    /// Case-insensitive token patterns with trailing-star semantics:
    /// `brain*` matches any journal title containing a token that starts
    /// with "brain". A pattern without a star requires an exact token.
    #[serde(default)]
    pub title_wildcards: Vec<String>,
    /// Exact journal specialty labels.
    #[serde(default)]
    pub specialty_labels: Vec<String>,
    #[serde(default)]
    pub excluded_journal_ids: Vec<JournalId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolved_journals: Option<BTreeSet<JournalId>>,
}

impl FieldDefinition {
    pub fn new(field_name: impl Into<String>) -> Self {
        FieldDefinition {
            field_name: field_name.into(),
            title_wildcards: Vec::new(),
            specialty_labels: Vec::new(),
            excluded_journal_ids: Vec::new(),
            resolved_journals: None,
        }
    }

    pub fn with_wildcards(mut self, patterns: &[&str]) -> Self {
        self.title_wildcards = patterns.iter().map(|s| s.to_string()).collect();
        self
    }

    pub fn with_specialties(mut self, labels: &[&str]) -> Self {
        self.specialty_labels = labels.iter().map(|s| s.to_string()).collect();
        self
    }

    pub fn with_exclusions(mut self, ids: &[&str]) -> Self {
        self.excluded_journal_ids = ids.iter().map(|s| JournalId::from(*s)).collect();
        self
    }

    pub fn is_resolved(&self) -> bool {
        self.resolved_journals.is_some()
    }

    /// Fingerprint of the rule set plus resolution, for run metadata.
    pub fn fingerprint(&self) -> String {
        let mut fp = Fingerprinter::new();
        fp.push_str(&self.field_name);
        for w in &self.title_wildcards {
            fp.push_str(w);
        }
        for s in &self.specialty_labels {
            fp.push_str(s);
        }
        for e in &self.excluded_journal_ids {
            fp.push_str(e.as_str());
        }
        if let Some(resolved) = &self.resolved_journals {
            for j in resolved {
                fp.push_str(j.as_str());
            }
        }
        fp.finish()
    }
}

/// Counts logged by [`resolve_field`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolveReport {
    pub field_name: String,
    pub wildcard_matches: usize,
    pub specialty_matches: usize,
    pub before_exclusion: usize,
    pub after_exclusion: usize,
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("field definition selects nothing: {0} has no wildcards and no specialty labels")]
    EmptyRuleSet(String),
    #[error("invalid wildcard pattern {pattern:?}: {reason}")]
    InvalidPattern { pattern: String, reason: String },
    #[error("field {0} has not been resolved against a journal table")]
    UnresolvedField(String),
    #[error("membership for field {field} names unknown paper {paper}")]
    UnknownPaper { field: String, paper: PaperId },
}

/// Immutable record universe plus cached field memberships.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusStore {
    pub papers: BTreeMap<PaperId, PaperRecord>,
    pub journals: BTreeMap<JournalId, JournalRecord>,
    pub field_memberships: BTreeMap<String, BTreeSet<PaperId>>,
}

impl CorpusStore {
    pub fn len(&self) -> usize {
        self.papers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.papers.is_empty()
    }

    pub fn paper(&self, id: &PaperId) -> Option<&PaperRecord> {
        self.papers.get(id)
    }

    pub fn journal(&self, id: &JournalId) -> Option<&JournalRecord> {
        self.journals.get(id)
    }

    /// Inclusive year span over papers that carry a year.
    pub fn year_range(&self) -> Option<(i32, i32)> {
        let mut range: Option<(i32, i32)> = None;
        for rec in self.papers.values() {
            if let Some(y) = rec.year {
                range = Some(match range {
                    None => (y, y),
                    Some((lo, hi)) => (lo.min(y), hi.max(y)),
                });
            }
        }
        range
    }

    /// Cached membership for a field, if present.
    pub fn membership(&self, field_name: &str) -> Option<&BTreeSet<PaperId>> {
        self.field_memberships.get(field_name)
    }

    /// Cache a membership set, checking every id exists in the store.
    pub fn cache_membership(
        &mut self,
        field_name: &str,
        members: BTreeSet<PaperId>,
    ) -> Result<(), CorpusError> {
        if let Some(p) = members.iter().find(|p| !self.papers.contains_key(*p)) {
            return Err(CorpusError::UnknownPaper {
                field: field_name.to_string(),
                paper: p.clone(),
            });
        }
        self.field_memberships
            .insert(field_name.to_string(), members);
        Ok(())
    }

    /// Content fingerprint over the canonical record export.
    pub fn fingerprint(&self) -> String {
        let mut records = Vec::new();
        export_records(self, &mut records).expect("in-memory export");
        let mut journals = Vec::new();
        export_journals(self, &mut journals).expect("in-memory export");
        let mut fp = Fingerprinter::new();
        fp.push(&records).push(&journals);
        fp.finish()
    }
}

/// A parsed title pattern: lowercase stem plus prefix/exact mode.
struct TitlePattern {
    stem: String,
    prefix: bool,
}

fn parse_pattern(pattern: &str) -> Result<TitlePattern, CorpusError> {
    let (stem, prefix) = match pattern.strip_suffix('*') {
        Some(stem) => (stem, true),
        None => (pattern, false),
    };
    if stem.is_empty() {
        return Err(CorpusError::InvalidPattern {
            pattern: pattern.to_string(),
            reason: "empty stem".to_string(),
        });
    }
    if stem.contains('*') {
        return Err(CorpusError::InvalidPattern {
            pattern: pattern.to_string(),
            reason: "star is only allowed at the end".to_string(),
        });
    }
    Ok(TitlePattern {
        stem: stem.to_lowercase(),
        prefix,
    })
}

/// Title tokens: maximal alphanumeric runs, lowercased.
fn title_tokens(title: &str) -> impl Iterator<Item = String> + '_ {
    title
        .split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(|t| t.to_lowercase())
}

fn pattern_matches_title(pattern: &TitlePattern, title: &str) -> bool {
    title_tokens(title).any(|tok| {
        if pattern.prefix {
            tok.starts_with(&pattern.stem)
        } else {
            tok == pattern.stem
        }
    })
}

/// Resolve a field definition against a journal table.
///
/// Returns the definition with `resolved_journals` filled, plus the
/// before/after-exclusion counts.
pub fn resolve_field(
    def: &FieldDefinition,
    journals: &BTreeMap<JournalId, JournalRecord>,
) -> Result<(FieldDefinition, ResolveReport), CorpusError> {
    if def.title_wildcards.is_empty() && def.specialty_labels.is_empty() {
        return Err(CorpusError::EmptyRuleSet(def.field_name.clone()));
    }
    let patterns = def
        .title_wildcards
        .iter()
        .map(|p| parse_pattern(p))
        .collect::<Result<Vec<_>, _>>()?;

    let mut wildcard_hits: BTreeSet<JournalId> = BTreeSet::new();
    let mut specialty_hits: BTreeSet<JournalId> = BTreeSet::new();
    for journal in journals.values() {
        if patterns
            .iter()
            .any(|p| pattern_matches_title(p, &journal.title))
        {
            wildcard_hits.insert(journal.journal_id.clone());
        }
        if let Some(spec) = &journal.specialty {
            if def.specialty_labels.iter().any(|l| l == spec) {
                specialty_hits.insert(journal.journal_id.clone());
            }
        }
    }

    let mut resolved: BTreeSet<JournalId> = wildcard_hits.union(&specialty_hits).cloned().collect();
    let before = resolved.len();
    for excluded in &def.excluded_journal_ids {
        resolved.remove(excluded);
    }
    let report = ResolveReport {
        field_name: def.field_name.clone(),
        wildcard_matches: wildcard_hits.len(),
        specialty_matches: specialty_hits.len(),
        before_exclusion: before,
        after_exclusion: resolved.len(),
    };
    log::info!(
        "field {}: {} journals before exclusion, {} after",
        report.field_name,
        report.before_exclusion,
        report.after_exclusion
    );
    let mut out = def.clone();
    out.resolved_journals = Some(resolved);
    Ok((out, report))
}

/// Papers whose journal belongs to the field's resolved journal set.
///
/// An empty result is legal; two fields may overlap.
pub fn field_membership(
    store: &CorpusStore,
    def: &FieldDefinition,
) -> Result<BTreeSet<PaperId>, CorpusError> {
    let resolved = def
        .resolved_journals
        .as_ref()
        .ok_or_else(|| CorpusError::UnresolvedField(def.field_name.clone()))?;
    Ok(store
        .papers
        .values()
        .filter(|p| resolved.contains(&p.journal_id))
        .map(|p| p.paper_id.clone())
        .collect())
}
