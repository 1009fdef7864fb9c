//! Naive reference implementations of the retrieval strategies.
//!
//! Per-paper linear scans with no citation index and no keyword set
//! structures: citations are found by scanning every other paper's
//! reference list, keyword matching walks plain word lists. Used only by
//! equivalence tests; the only shared primitive is keyword normalization.

use std::collections::BTreeSet;

use crate::corpus::{CorpusStore, PaperId, PaperRecord};
use crate::lexicon::normalize_keyword;
use crate::strategies::{StrategyId, Threshold};

/// Inputs for one oracle run. Lexicons are raw word lists; field sets are
/// taken as given.
pub struct OracleSpec<'a> {
    pub strategy: StrategyId,
    pub lex_a: &'a [String],
    pub lex_b: &'a [String],
    pub field_a: &'a BTreeSet<PaperId>,
    pub field_b: &'a BTreeSet<PaperId>,
    pub threshold: Option<Threshold>,
}

/// Evaluate a strategy the slow, obvious way.
pub fn oracle_retrieval(store: &CorpusStore, spec: &OracleSpec<'_>) -> BTreeSet<PaperId> {
    match spec.strategy {
        StrategyId::S1 => oracle_s1(store, spec.lex_a, spec.lex_b),
        StrategyId::S2 => oracle_s2(store, spec),
        StrategyId::S3 => oracle_links(store, spec, LinkDirection::CitationsReceived),
        StrategyId::S4 => oracle_links(store, spec, LinkDirection::ReferencesGiven),
    }
}

fn matches_any(paper: &PaperRecord, words: &[String]) -> bool {
    paper.keywords.iter().any(|raw| {
        let canon = normalize_keyword(raw);
        if canon.is_empty() {
            return false;
        }
        words.iter().any(|w| normalize_keyword(w) == canon)
    })
}

fn oracle_s1(store: &CorpusStore, lex_a: &[String], lex_b: &[String]) -> BTreeSet<PaperId> {
    let mut out = BTreeSet::new();
    for (id, paper) in &store.papers {
        if matches_any(paper, lex_a) && matches_any(paper, lex_b) {
            out.insert(id.clone());
        }
    }
    out
}

fn oracle_s2(store: &CorpusStore, spec: &OracleSpec<'_>) -> BTreeSet<PaperId> {
    let mut out = BTreeSet::new();
    for (members, other_words) in [(spec.field_a, spec.lex_b), (spec.field_b, spec.lex_a)] {
        for id in members {
            if let Some(paper) = store.paper(id) {
                if matches_any(paper, other_words) {
                    out.insert(id.clone());
                }
            }
        }
    }
    out
}

enum LinkDirection {
    CitationsReceived,
    ReferencesGiven,
}

fn oracle_links(
    store: &CorpusStore,
    spec: &OracleSpec<'_>,
    direction: LinkDirection,
) -> BTreeSet<PaperId> {
    let threshold = spec.threshold.expect("link strategies need a threshold");
    let mut out = BTreeSet::new();
    for (members, other) in [(spec.field_a, spec.field_b), (spec.field_b, spec.field_a)] {
        for id in members {
            if store.paper(id).is_none() {
                continue;
            }
            let (numerator, denominator) = match direction {
                LinkDirection::CitationsReceived => {
                    // scan every paper's reference list for citations of id
                    let mut num = 0usize;
                    let mut den = 0usize;
                    for (citer, record) in &store.papers {
                        if citer == id {
                            continue;
                        }
                        if record.references.contains(id) {
                            den += 1;
                            if other.contains(citer) {
                                num += 1;
                            }
                        }
                    }
                    (num, den)
                }
                LinkDirection::ReferencesGiven => {
                    let record = store.paper(id).expect("checked above");
                    let mut num = 0usize;
                    let mut den = 0usize;
                    for target in &record.references {
                        if target == id || store.paper(target).is_none() {
                            continue;
                        }
                        den += 1;
                        if other.contains(target) {
                            num += 1;
                        }
                    }
                    (num, den)
                }
            };
            let qualifies = match threshold {
                Threshold::Relative(tau) => {
                    denominator > 0
                        && numerator as u128 * tau.denominator() as u128
                            >= tau.numerator() as u128 * denominator as u128
                }
                Threshold::Absolute(k) => denominator > 0 && numerator >= k as usize,
            };
            if qualifies {
                out.insert(id.clone());
            }
        }
    }
    out
}
