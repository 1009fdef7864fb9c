//! Resumable terminal annotation session.
//!
//! The session walks a sample draw item by item, shows title, abstract,
//! year, journal, and retrieval evidence, then takes a single-key label
//! decision. Every decision is persisted immediately, so quitting and
//! rerunning resumes at the first unlabeled item. `u` undoes the last
//! decision, `g` reprints the guideline.
//!
//! I/O goes through generic `BufRead`/`Write` handles; the command-line
//! front end passes stdin/stdout and tests pass scripted buffers.

use std::collections::BTreeSet;
use std::io::{BufRead, Write};
use std::path::Path;

use crate::corpus::{CorpusStore, PaperId};
use crate::strategies::{Evidence, RetrievalResult};

use super::{
    read_labels, write_labels, Label, LabelRecord, RelationType, SampleDraw, ValidationError,
};

pub struct SessionOptions {
    pub annotator: String,
    /// Fixed timestamp for every record; `None` stamps wall-clock epoch
    /// seconds.
    pub timestamp: Option<String>,
}

/// What a session produced (possibly partially).
#[derive(Debug)]
pub struct SessionOutcome {
    pub labels: Vec<LabelRecord>,
    /// True when every sample item is labeled.
    pub completed: bool,
    /// Review queue: items labeled doubtful, awaiting a collective
    /// decision.
    pub doubtful_queue: Vec<PaperId>,
}

enum Action {
    Assign(Label),
    Undo,
    Quit,
}

/// Run (or resume) an annotation session over `sample`, persisting labels
/// to `labels_path` after every decision.
#[allow(clippy::too_many_arguments)]
pub fn annotate_session<I: BufRead, O: Write>(
    sample: &SampleDraw,
    store: &CorpusStore,
    result: Option<&RetrievalResult>,
    guideline: &str,
    labels_path: &Path,
    options: &SessionOptions,
    mut input: I,
    mut output: O,
) -> Result<SessionOutcome, ValidationError> {
    if !sample.store_fingerprint.is_empty() {
        let actual = store.fingerprint();
        if sample.store_fingerprint != actual {
            return Err(ValidationError::StoreMismatch {
                expected: sample.store_fingerprint.clone(),
                actual,
            });
        }
    }

    let sample_set: BTreeSet<&PaperId> = sample.sample.iter().collect();
    let mut labels: Vec<LabelRecord> = if labels_path.exists() {
        let file = std::fs::File::open(labels_path)?;
        read_labels(std::io::BufReader::new(file))?
    } else {
        Vec::new()
    };
    for rec in &labels {
        if !sample_set.contains(&rec.paper_id) {
            return Err(ValidationError::ForeignLabel(rec.paper_id.clone()));
        }
    }

    writeln!(
        &mut output,
        "annotation session: strategy {} / {} items / {} already labeled",
        sample.strategy,
        sample.sample.len(),
        labels.len()
    )?;
    writeln!(
        &mut output,
        "keys: [i]nclude [e]xclude [d]oubtful [u]ndo [g]uideline [q]uit"
    )?;

    'session: loop {
        let labeled: BTreeSet<&PaperId> = labels.iter().map(|l| &l.paper_id).collect();
        let Some(pos) = sample.sample.iter().position(|id| !labeled.contains(id)) else {
            break;
        };
        let paper_id = &sample.sample[pos];
        render_item(&mut output, store, result, sample, pos, paper_id)?;

        let action = loop {
            write!(&mut output, "label [i/e/d/u/g/q]> ")?;
            output.flush()?;
            let Some(line) = read_line(&mut input)? else {
                break Action::Quit;
            };
            match line.trim().chars().next() {
                Some('i') => break Action::Assign(Label::Include),
                Some('e') => break Action::Assign(Label::Exclude),
                Some('d') => break Action::Assign(Label::Doubtful),
                Some('u') => break Action::Undo,
                Some('g') => writeln!(&mut output, "{guideline}")?,
                Some('q') => break Action::Quit,
                _ => writeln!(&mut output, "unrecognized key")?,
            }
        };

        match action {
            Action::Quit => break 'session,
            Action::Undo => {
                if let Some(last) = labels.pop() {
                    writeln!(&mut output, "undid label for {}", last.paper_id)?;
                    persist(labels_path, &labels)?;
                } else {
                    writeln!(&mut output, "nothing to undo")?;
                }
            }
            Action::Assign(label) => {
                let relation_type = if label == Label::Include {
                    match prompt_relation(&mut input, &mut output)? {
                        Some(relation) => Some(relation),
                        // input ended mid-prompt: abandon the pending label
                        None => break 'session,
                    }
                } else {
                    None
                };
                write!(&mut output, "note (optional)> ")?;
                output.flush()?;
                let note = read_line(&mut input)?
                    .unwrap_or_default()
                    .trim()
                    .to_string();
                labels.push(LabelRecord {
                    paper_id: paper_id.clone(),
                    label,
                    relation_type,
                    annotator: options.annotator.clone(),
                    note,
                    timestamp: options.timestamp.clone().unwrap_or_else(now_epoch),
                });
                persist(labels_path, &labels)?;
            }
        }
    }

    let labeled: BTreeSet<&PaperId> = labels.iter().map(|l| &l.paper_id).collect();
    let completed = sample.sample.iter().all(|id| labeled.contains(id));

    let doubtful_queue: Vec<PaperId> = labels
        .iter()
        .filter(|l| l.label == Label::Doubtful)
        .map(|l| l.paper_id.clone())
        .collect();
    if completed {
        writeln!(&mut output, "session complete: {} labels", labels.len())?;
    } else {
        writeln!(
            &mut output,
            "session paused: {}/{} labeled; rerun to resume",
            labels.len(),
            sample.sample.len()
        )?;
    }
    if !doubtful_queue.is_empty() {
        writeln!(
            &mut output,
            "doubtful review queue ({}): {}",
            doubtful_queue.len(),
            doubtful_queue
                .iter()
                .map(|p| p.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        )?;
    }

    Ok(SessionOutcome {
        labels,
        completed,
        doubtful_queue,
    })
}

fn persist(path: &Path, labels: &[LabelRecord]) -> Result<(), ValidationError> {
    let file = std::fs::File::create(path)?;
    write_labels(std::io::BufWriter::new(file), labels)
}

fn now_epoch() -> String {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs().to_string())
        .unwrap_or_default()
}

fn read_line<I: BufRead>(input: &mut I) -> std::io::Result<Option<String>> {
    let mut line = String::new();
    let n = input.read_line(&mut line)?;
    Ok((n > 0).then_some(line))
}

fn prompt_relation<I: BufRead, O: Write>(
    input: &mut I,
    output: &mut O,
) -> Result<Option<RelationType>, ValidationError> {
    loop {
        write!(
            output,
            "relation [1] first field using the second's tools  [2] second field drawing on the first  [3] close interaction> "
        )?;
        output.flush()?;
        let Some(line) = read_line(input)? else {
            return Ok(None);
        };
        match line.trim() {
            "1" => return Ok(Some(RelationType::NeuroWithComputational)),
            "2" => return Ok(Some(RelationType::CsWithNeuro)),
            "3" => return Ok(Some(RelationType::CloseInteraction)),
            _ => writeln!(output, "enter 1, 2, or 3")?,
        }
    }
}

fn render_item<O: Write>(
    output: &mut O,
    store: &CorpusStore,
    result: Option<&RetrievalResult>,
    sample: &SampleDraw,
    pos: usize,
    paper_id: &PaperId,
) -> std::io::Result<()> {
    writeln!(output)?;
    writeln!(
        output,
        "--- item {} of {} [{}] ---",
        pos + 1,
        sample.sample.len(),
        paper_id
    )?;
    match store.paper(paper_id) {
        Some(paper) => {
            let journal = store
                .journal(&paper.journal_id)
                .map(|j| j.title.clone())
                .unwrap_or_else(|| paper.journal_id.to_string());
            let year = paper
                .year
                .map(|y| y.to_string())
                .unwrap_or_else(|| "?".into());
            writeln!(output, "title:    {}", paper.title)?;
            writeln!(output, "journal:  {journal} ({year})")?;
            writeln!(output, "abstract: {}", paper.abstract_text)?;
        }
        None => writeln!(output, "(paper not found in store)")?,
    }
    if let Some(result) = result {
        if let Some(evidence) = result.evidence.get(paper_id) {
            writeln!(output, "evidence: {}", render_evidence(evidence))?;
        }
    }
    // two-stage checklist walk: screen first, then judge integration depth
    writeln!(
        output,
        "check 1 - screening: does the title/abstract suggest both fields at all?"
    )?;
    writeln!(
        output,
        "check 2 - integration: does the core objective rest on a substantial combination of both? if yes, identify the relation type."
    )?;
    Ok(())
}

fn render_evidence(evidence: &Evidence) -> String {
    match evidence {
        Evidence::SharedKeywords {
            matched_a,
            matched_b,
        } => {
            format!(
                "shared keywords: [{}] and [{}]",
                matched_a.iter().cloned().collect::<Vec<_>>().join(", "),
                matched_b.iter().cloned().collect::<Vec<_>>().join(", ")
            )
        }
        Evidence::CrossKeywords { clauses } => clauses
            .iter()
            .map(|c| {
                format!(
                    "in {}: matched [{}]",
                    c.member_of,
                    c.matched.iter().cloned().collect::<Vec<_>>().join(", ")
                )
            })
            .collect::<Vec<_>>()
            .join("; "),
        Evidence::CrossLinks { clauses } => clauses
            .iter()
            .map(|c| {
                format!(
                    "in {}: {}/{} links to {}",
                    c.member_of, c.ratio.numerator, c.ratio.denominator, c.other_field
                )
            })
            .collect::<Vec<_>>()
            .join("; "),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{JournalId, PaperRecord};
    use std::io::Cursor;

    fn store_with(ids: &[&str]) -> CorpusStore {
        let mut store = CorpusStore::default();
        for id in ids {
            let rec = PaperRecord {
                paper_id: PaperId::from(*id),
                title: format!("Title of {id}"),
                abstract_text: format!("Abstract of {id}."),
                year: Some(2015),
                journal_id: JournalId::from("j"),
                keywords: Vec::new(),
                references: Vec::new(),
                specialty: None,
            };
            store.papers.insert(rec.paper_id.clone(), rec);
        }
        store
    }

    fn sample_of(ids: &[&str]) -> SampleDraw {
        SampleDraw {
            strategy: "S1".into(),
            n_requested: ids.len(),
            seed: 0,
            result_fingerprint: String::new(),
            store_fingerprint: String::new(),
            sample: ids.iter().map(|i| PaperId::from(*i)).collect(),
        }
    }

    fn opts() -> SessionOptions {
        SessionOptions {
            annotator: "tester".into(),
            timestamp: Some("111".into()),
        }
    }

    #[test]
    fn full_session_labels_everything() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("labels.csv");
        let store = store_with(&["p1", "p2", "p3"]);
        let sample = sample_of(&["p1", "p2", "p3"]);
        // include(relation 1, note), exclude(note empty), doubtful(note)
        let script = "i\n1\nuses both fields\ne\n\nd\nunclear\n";
        let mut out = Vec::new();
        let outcome = annotate_session(
            &sample,
            &store,
            None,
            "GUIDELINE",
            &path,
            &opts(),
            Cursor::new(script),
            &mut out,
        )
        .unwrap();
        assert!(outcome.completed);
        assert_eq!(outcome.labels.len(), 3);
        assert_eq!(outcome.labels[0].label, Label::Include);
        assert_eq!(
            outcome.labels[0].relation_type,
            Some(RelationType::NeuroWithComputational)
        );
        assert_eq!(outcome.labels[0].note, "uses both fields");
        assert_eq!(outcome.doubtful_queue, vec![PaperId::from("p3")]);
        // persisted file matches the outcome
        let reread = read_labels(std::fs::File::open(&path).unwrap()).unwrap();
        assert_eq!(reread, outcome.labels);
        let shown = String::from_utf8(out).unwrap();
        assert!(shown.contains("Title of p1"));
        assert!(shown.contains("doubtful review queue"));
    }

    #[test]
    fn quitting_and_resuming_continues_at_next_item() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("labels.csv");
        let store = store_with(&["p1", "p2", "p3"]);
        let sample = sample_of(&["p1", "p2", "p3"]);

        let first = annotate_session(
            &sample,
            &store,
            None,
            "G",
            &path,
            &opts(),
            Cursor::new("e\n\nq\n"),
            Vec::new(),
        )
        .unwrap();
        assert!(!first.completed);
        assert_eq!(first.labels.len(), 1);

        let mut out = Vec::new();
        let second = annotate_session(
            &sample,
            &store,
            None,
            "G",
            &path,
            &opts(),
            Cursor::new("e\n\ne\n\n"),
            &mut out,
        )
        .unwrap();
        assert!(second.completed);
        assert_eq!(second.labels.len(), 3);
        // prior label intact, resume starts at item 2
        assert_eq!(second.labels[0].paper_id, PaperId::from("p1"));
        let shown = String::from_utf8(out).unwrap();
        assert!(shown.contains("1 already labeled"));
        assert!(shown.contains("item 2 of 3"));
    }

    #[test]
    fn undo_revisits_the_previous_item() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("labels.csv");
        let store = store_with(&["p1", "p2"]);
        let sample = sample_of(&["p1", "p2"]);
        // label p1 exclude, undo it, then include it, then exclude p2
        let script = "e\n\nu\ni\n3\n\ne\n\n";
        let outcome = annotate_session(
            &sample,
            &store,
            None,
            "G",
            &path,
            &opts(),
            Cursor::new(script),
            Vec::new(),
        )
        .unwrap();
        assert!(outcome.completed);
        assert_eq!(outcome.labels[0].label, Label::Include);
        assert_eq!(outcome.labels[0].paper_id, PaperId::from("p1"));
    }

    #[test]
    fn foreign_labels_are_rejected_on_resume() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("labels.csv");
        let store = store_with(&["p1"]);
        let sample = sample_of(&["p1"]);
        let stray = vec![LabelRecord {
            paper_id: PaperId::from("not-in-sample"),
            label: Label::Exclude,
            relation_type: None,
            annotator: "x".into(),
            note: String::new(),
            timestamp: "1".into(),
        }];
        write_labels(std::fs::File::create(&path).unwrap(), &stray).unwrap();
        let err = annotate_session(
            &sample,
            &store,
            None,
            "G",
            &path,
            &opts(),
            Cursor::new(""),
            Vec::new(),
        )
        .unwrap_err();
        assert!(matches!(err, ValidationError::ForeignLabel(_)));
    }

    #[test]
    fn store_fingerprint_mismatch_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("labels.csv");
        let store = store_with(&["p1"]);
        let mut sample = sample_of(&["p1"]);
        sample.store_fingerprint = "deadbeef".into();
        let err = annotate_session(
            &sample,
            &store,
            None,
            "G",
            &path,
            &opts(),
            Cursor::new(""),
            Vec::new(),
        )
        .unwrap_err();
        assert!(matches!(err, ValidationError::StoreMismatch { .. }));
    }

    #[test]
    fn guideline_is_rendered_verbatim_on_request() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("labels.csv");
        let store = store_with(&["p1"]);
        let sample = sample_of(&["p1"]);
        let mut out = Vec::new();
        let _ = annotate_session(
            &sample,
            &store,
            None,
            "THE GUIDELINE TEXT",
            &path,
            &opts(),
            Cursor::new("g\nq\n"),
            &mut out,
        )
        .unwrap();
        let shown = String::from_utf8(out).unwrap();
        assert!(shown.contains("THE GUIDELINE TEXT"));
    }
}
