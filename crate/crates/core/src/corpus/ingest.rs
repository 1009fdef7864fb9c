//! Line-delimited record ingestion with schema mapping, plus the canonical
//! export used for fingerprints and round-trip checks.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use super::{CorpusStore, JournalId, JournalRecord, PaperId, PaperRecord};

/// Maps source field names onto [`PaperRecord`] fields.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct PaperSchema {
    pub paper_id: String,
    pub title: String,
    pub abstract_text: String,
    pub year: String,
    pub journal_id: String,
    pub keywords: String,
    pub references: String,
    pub specialty: String,
}

impl Default for PaperSchema {
    fn default() -> Self {
        PaperSchema {
            paper_id: "paper_id".into(),
            title: "title".into(),
            abstract_text: "abstract".into(),
            year: "year".into(),
            journal_id: "journal_id".into(),
            keywords: "keywords".into(),
            references: "references".into(),
            specialty: "specialty".into(),
        }
    }
}

/// Maps source field names onto [`JournalRecord`] fields.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct JournalSchema {
    pub journal_id: String,
    pub title: String,
    pub specialty: String,
}

impl Default for JournalSchema {
    fn default() -> Self {
        JournalSchema {
            journal_id: "journal_id".into(),
            title: "title".into(),
            specialty: "specialty".into(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct SchemaConfig {
    pub paper: PaperSchema,
    pub journal: JournalSchema,
}

/// One skipped-record diagnostic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordIssue {
    pub stream: String,
    pub line: usize,
    pub message: String,
}

/// Ingestion outcome counts plus per-record diagnostics.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestReport {
    pub papers_ingested: usize,
    pub papers_skipped: usize,
    pub duplicate_papers_dropped: usize,
    pub journals_ingested: usize,
    pub journals_skipped: usize,
    pub duplicate_journals_dropped: usize,
    /// References whose target is outside the ingested universe. They stay
    /// on the record but the citation index ignores them.
    pub dangling_references: usize,
    pub issues: Vec<RecordIssue>,
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(
        "duplicate {stream} id {id} with conflicting content (lines {first_line} and {second_line})"
    )]
    ConflictingDuplicate {
        stream: &'static str,
        id: String,
        first_line: usize,
        second_line: usize,
    },
}

fn get_str(obj: &Value, key: &str) -> Option<String> {
    obj.get(key).and_then(Value::as_str).map(str::to_string)
}

fn get_string_array(obj: &Value, key: &str) -> Result<Vec<String>, String> {
    match obj.get(key) {
        None | Some(Value::Null) => Ok(Vec::new()),
        Some(Value::Array(items)) => items
            .iter()
            .map(|v| {
                v.as_str()
                    .map(str::to_string)
                    .ok_or_else(|| format!("field {key} contains a non-string element"))
            })
            .collect(),
        Some(_) => Err(format!("field {key} is not an array")),
    }
}

fn parse_paper(obj: &Value, schema: &PaperSchema) -> Result<PaperRecord, String> {
    let paper_id = get_str(obj, &schema.paper_id)
        .filter(|s| !s.is_empty())
        .ok_or_else(|| format!("missing {}", schema.paper_id))?;
    let journal_id = get_str(obj, &schema.journal_id)
        .filter(|s| !s.is_empty())
        .ok_or_else(|| format!("missing {}", schema.journal_id))?;
    let year = match obj.get(&schema.year) {
        None | Some(Value::Null) => None,
        Some(v) => {
            let y = v
                .as_i64()
                .ok_or_else(|| format!("field {} is not an integer", schema.year))?;
            if y <= 0 || y > i32::MAX as i64 {
                return Err(format!(
                    "field {} must be a positive year, got {y}",
                    schema.year
                ));
            }
            Some(y as i32)
        }
    };
    let keywords = get_string_array(obj, &schema.keywords)?;
    let raw_references = get_string_array(obj, &schema.references)?;

    // normalization: de-duplicate preserving first occurrence, drop self-references
    let mut references: Vec<PaperId> = Vec::with_capacity(raw_references.len());
    for r in raw_references {
        if r == paper_id {
            continue;
        }
        let id = PaperId(r);
        if !references.contains(&id) {
            references.push(id);
        }
    }

    Ok(PaperRecord {
        paper_id: PaperId(paper_id),
        title: get_str(obj, &schema.title).unwrap_or_default(),
        abstract_text: get_str(obj, &schema.abstract_text).unwrap_or_default(),
        year,
        journal_id: JournalId(journal_id),
        keywords,
        references,
        specialty: get_str(obj, &schema.specialty),
    })
}

fn parse_journal(obj: &Value, schema: &JournalSchema) -> Result<JournalRecord, String> {
    let journal_id = get_str(obj, &schema.journal_id)
        .filter(|s| !s.is_empty())
        .ok_or_else(|| format!("missing {}", schema.journal_id))?;
    Ok(JournalRecord {
        journal_id: JournalId(journal_id),
        title: get_str(obj, &schema.title).unwrap_or_default(),
        specialty: get_str(obj, &schema.specialty),
    })
}

/// Ingest line-delimited paper and journal streams into a store.
///
/// Records that cannot be parsed (bad JSON, missing id fields, invalid
/// year) are skipped and reported; an exact duplicate of an earlier record
/// is dropped and counted; a duplicate id with *different* content is a
/// hard error naming both source lines.
pub fn ingest_records<R: BufRead, J: BufRead>(
    records: R,
    journals: J,
    schema: &SchemaConfig,
) -> Result<(CorpusStore, IngestReport), IngestError> {
    let mut report = IngestReport::default();
    let mut store = CorpusStore::default();

    let mut journal_lines: BTreeMap<JournalId, usize> = BTreeMap::new();
    for (idx, line) in journals.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let parsed = serde_json::from_str::<Value>(&line)
            .map_err(|e| e.to_string())
            .and_then(|v| parse_journal(&v, &schema.journal));
        match parsed {
            Ok(journal) => {
                let id = journal.journal_id.clone();
                match store.journals.entry(id.clone()) {
                    Entry::Vacant(slot) => {
                        slot.insert(journal);
                        journal_lines.insert(id, line_no);
                        report.journals_ingested += 1;
                    }
                    Entry::Occupied(existing) => {
                        if existing.get() == &journal {
                            report.duplicate_journals_dropped += 1;
                        } else {
                            return Err(IngestError::ConflictingDuplicate {
                                stream: "journal",
                                first_line: journal_lines[&id],
                                id: id.0,
                                second_line: line_no,
                            });
                        }
                    }
                }
            }
            Err(message) => {
                report.journals_skipped += 1;
                report.issues.push(RecordIssue {
                    stream: "journals".into(),
                    line: line_no,
                    message,
                });
            }
        }
    }

    let mut paper_lines: BTreeMap<PaperId, usize> = BTreeMap::new();
    for (idx, line) in records.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let parsed = serde_json::from_str::<Value>(&line)
            .map_err(|e| e.to_string())
            .and_then(|v| parse_paper(&v, &schema.paper));
        match parsed {
            Ok(record) => {
                let id = record.paper_id.clone();
                match store.papers.entry(id.clone()) {
                    Entry::Vacant(slot) => {
                        slot.insert(record);
                        paper_lines.insert(id, line_no);
                        report.papers_ingested += 1;
                    }
                    Entry::Occupied(existing) => {
                        if existing.get() == &record {
                            report.duplicate_papers_dropped += 1;
                        } else {
                            return Err(IngestError::ConflictingDuplicate {
                                stream: "paper",
                                first_line: paper_lines[&id],
                                id: id.0,
                                second_line: line_no,
                            });
                        }
                    }
                }
            }
            Err(message) => {
                report.papers_skipped += 1;
                report.issues.push(RecordIssue {
                    stream: "papers".into(),
                    line: line_no,
                    message,
                });
            }
        }
    }

    report.dangling_references = store
        .papers
        .values()
        .flat_map(|p| p.references.iter())
        .filter(|r| !store.papers.contains_key(*r))
        .count();

    Ok((store, report))
}

/// Canonical record export: one JSON object per line, sorted by paper id.
pub fn export_records<W: Write>(store: &CorpusStore, mut out: W) -> std::io::Result<()> {
    for record in store.papers.values() {
        serde_json::to_writer(&mut out, record)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// Canonical journal export: one JSON object per line, sorted by journal id.
pub fn export_journals<W: Write>(store: &CorpusStore, mut out: W) -> std::io::Result<()> {
    for journal in store.journals.values() {
        serde_json::to_writer(&mut out, journal)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ingest(records: &str, journals: &str) -> (CorpusStore, IngestReport) {
        ingest_records(
            records.as_bytes(),
            journals.as_bytes(),
            &SchemaConfig::default(),
        )
        .unwrap()
    }

    #[test]
    fn basic_ingestion_counts() {
        let records = r#"{"paper_id":"a","title":"A","journal_id":"j1"}
{"paper_id":"b","title":"B","journal_id":"j1"}
{"paper_id":"c","title":"C","journal_id":"j2"}
"#;
        let (store, report) = ingest(records, "");
        assert_eq!(store.len(), 3);
        assert_eq!(report.papers_ingested, 3);
        assert_eq!(report.papers_skipped, 0);
        assert_eq!(report.journals_ingested, 0);
    }

    #[test]
    fn references_are_deduplicated_and_self_dropped() {
        let records = r#"{"paper_id":"p","journal_id":"j","references":["x","x","p"]}"#;
        let (store, _) = ingest(records, "");
        let refs = &store.paper(&PaperId::from("p")).unwrap().references;
        assert_eq!(refs, &vec![PaperId::from("x")]);
    }

    #[test]
    fn malformed_records_are_skipped_with_issue() {
        let records = r#"{"title":"no id","journal_id":"j"}
{"paper_id":"ok","journal_id":"j"}
not json at all
{"paper_id":"bad-year","journal_id":"j","year":-3}
"#;
        let (store, report) = ingest(records, "");
        assert_eq!(store.len(), 1);
        assert_eq!(report.papers_ingested, 1);
        assert_eq!(report.papers_skipped, 3);
        assert_eq!(report.issues.len(), 3);
        assert_eq!(report.issues[0].line, 1);
        assert!(report.issues[0].message.contains("paper_id"));
    }

    #[test]
    fn exact_duplicates_are_dropped() {
        let records = r#"{"paper_id":"a","journal_id":"j"}
{"paper_id":"a","journal_id":"j"}
"#;
        let (store, report) = ingest(records, "");
        assert_eq!(store.len(), 1);
        assert_eq!(report.duplicate_papers_dropped, 1);
    }

    #[test]
    fn conflicting_duplicates_are_a_hard_error_naming_lines() {
        let records = r#"{"paper_id":"a","journal_id":"j","title":"one"}
{"paper_id":"a","journal_id":"j","title":"two"}
"#;
        let err = ingest_records(records.as_bytes(), "".as_bytes(), &SchemaConfig::default())
            .unwrap_err();
        match err {
            IngestError::ConflictingDuplicate {
                id,
                first_line,
                second_line,
                ..
            } => {
                assert_eq!(id, "a");
                assert_eq!((first_line, second_line), (1, 2));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn dangling_references_are_counted_but_kept() {
        let records = r#"{"paper_id":"a","journal_id":"j","references":["b","zzz"]}
{"paper_id":"b","journal_id":"j"}
"#;
        let (store, report) = ingest(records, "");
        assert_eq!(report.dangling_references, 1);
        assert_eq!(
            store.paper(&PaperId::from("a")).unwrap().references.len(),
            2
        );
    }

    #[test]
    fn schema_mapping_renames_fields() {
        let mut schema = SchemaConfig::default();
        schema.paper.paper_id = "UT".into();
        schema.paper.journal_id = "SO".into();
        schema.paper.keywords = "DE".into();
        let records = r#"{"UT":"w1","SO":"j9","DE":["Deep Learning"]}"#;
        let (store, report) = ingest_records(records.as_bytes(), "".as_bytes(), &schema).unwrap();
        assert_eq!(report.papers_ingested, 1);
        let rec = store.paper(&PaperId::from("w1")).unwrap();
        assert_eq!(rec.journal_id, JournalId::from("j9"));
        assert_eq!(rec.keywords, vec!["Deep Learning"]);
    }

    #[test]
    fn ingestion_is_deterministic() {
        let records = r#"{"paper_id":"b","journal_id":"j","year":2001}
{"paper_id":"a","journal_id":"j","keywords":["k1","k2"]}
"#;
        let journals = r#"{"journal_id":"j","title":"J","specialty":"Computers"}"#;
        let (s1, r1) = ingest(records, journals);
        let (s2, r2) = ingest(records, journals);
        assert_eq!(s1, s2);
        assert_eq!(r1, r2);
        assert_eq!(s1.fingerprint(), s2.fingerprint());
    }

    #[test]
    fn export_round_trips_byte_identically() {
        let records = r#"{"paper_id":"a","title":"T","abstract":"","journal_id":"j","keywords":["x"],"references":["b"]}
{"paper_id":"b","title":"U","abstract":"hi","year":1999,"journal_id":"j","keywords":[],"references":[]}
"#;
        let journals = r#"{"journal_id":"j","title":"J"}"#;
        let (store, _) = ingest(records, journals);
        let mut first = Vec::new();
        export_records(&store, &mut first).unwrap();
        let (store2, _) = ingest_records(
            first.as_slice(),
            journals.as_bytes(),
            &SchemaConfig::default(),
        )
        .unwrap();
        let mut second = Vec::new();
        export_records(&store2, &mut second).unwrap();
        assert_eq!(first, second);
    }
}
