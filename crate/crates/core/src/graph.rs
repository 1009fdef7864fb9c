//! Citation index over the ingested universe and per-paper cross-field
//! link ratios.
//!
//! The index restricts reference lists to ingested ids and inverts them
//! into citation lists. Ratio denominators are counted over the ingested
//! universe only, which shifts ratios upward versus database-wide totals;
//! reports surface this scope.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::corpus::{CorpusStore, PaperId};
use crate::numeric::Tau;
use crate::Fraction;

static EMPTY: BTreeSet<PaperId> = BTreeSet::new();

/// Forward (references) and inverted (citations) adjacency, restricted to
/// the ingested universe. `q ∈ forward[p] ⇔ p ∈ inverted[q]`; no self-loops.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CitationIndex {
    pub forward: BTreeMap<PaperId, BTreeSet<PaperId>>,
    pub inverted: BTreeMap<PaperId, BTreeSet<PaperId>>,
    /// References whose target was not ingested, dropped from the index.
    pub dangling_references: usize,
}

impl CitationIndex {
    /// In-universe references of `p` (empty if unknown).
    pub fn references_of(&self, p: &PaperId) -> &BTreeSet<PaperId> {
        self.forward.get(p).unwrap_or(&EMPTY)
    }

    /// In-universe citers of `p` (empty if unknown).
    pub fn citations_of(&self, p: &PaperId) -> &BTreeSet<PaperId> {
        self.inverted.get(p).unwrap_or(&EMPTY)
    }

    pub fn edge_count(&self) -> usize {
        self.forward.values().map(BTreeSet::len).sum()
    }
}

/// Build the citation index: filter reference lists to ingested ids and
/// compute the exact transpose.
pub fn build_citation_index(store: &CorpusStore) -> CitationIndex {
    let mut forward: BTreeMap<PaperId, BTreeSet<PaperId>> = BTreeMap::new();
    let mut inverted: BTreeMap<PaperId, BTreeSet<PaperId>> = BTreeMap::new();
    let mut dangling = 0usize;
    for id in store.papers.keys() {
        forward.insert(id.clone(), BTreeSet::new());
        inverted.insert(id.clone(), BTreeSet::new());
    }
    for (id, record) in &store.papers {
        for target in &record.references {
            if target == id {
                continue;
            }
            if store.papers.contains_key(target) {
                forward.get_mut(id).unwrap().insert(target.clone());
                inverted.get_mut(target).unwrap().insert(id.clone());
            } else {
                dangling += 1;
            }
        }
    }
    CitationIndex {
        forward,
        inverted,
        dangling_references: dangling,
    }
}

/// Cross-field link share of one paper: `numerator` cross-field links out
/// of `denominator` total links in one direction. The ratio is undefined
/// when the denominator is zero, and an undefined ratio never satisfies a
/// threshold.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossRatio {
    pub paper_id: PaperId,
    pub numerator: usize,
    pub denominator: usize,
}

impl CrossRatio {
    pub fn is_defined(&self) -> bool {
        self.denominator > 0
    }

    pub fn value(&self) -> Option<Fraction> {
        self.is_defined()
            .then(|| Fraction::new(self.numerator as u64, self.denominator as u64))
    }

    pub fn value_f64(&self) -> Option<f64> {
        self.is_defined()
            .then(|| self.numerator as f64 / self.denominator as f64)
    }

    /// Exact inclusive comparison against a relative threshold.
    pub fn at_least(&self, tau: Tau) -> bool {
        self.is_defined()
            && self.numerator as u128 * tau.denominator() as u128
                >= tau.numerator() as u128 * self.denominator as u128
    }

    /// Inclusive comparison against an absolute cross-link count.
    pub fn at_least_count(&self, k: u32) -> bool {
        self.numerator >= k as usize
    }
}

/// Share of `p`'s citations that come from the other field.
pub fn cross_citation_ratio(
    p: &PaperId,
    other_field: &BTreeSet<PaperId>,
    index: &CitationIndex,
) -> CrossRatio {
    let citers = index.citations_of(p);
    CrossRatio {
        paper_id: p.clone(),
        numerator: citers.iter().filter(|c| other_field.contains(*c)).count(),
        denominator: citers.len(),
    }
}

/// Share of `p`'s in-universe references that go to the other field.
pub fn cross_reference_ratio(
    p: &PaperId,
    other_field: &BTreeSet<PaperId>,
    index: &CitationIndex,
) -> CrossRatio {
    let refs = index.references_of(p);
    CrossRatio {
        paper_id: p.clone(),
        numerator: refs.iter().filter(|r| other_field.contains(*r)).count(),
        denominator: refs.len(),
    }
}

/// Edge-list export for external graph tools: one
/// `citing_id<TAB>cited_id` per line, sorted.
pub fn export_edge_list<W: Write>(index: &CitationIndex, mut out: W) -> std::io::Result<()> {
    for (citing, cited_set) in &index.forward {
        for cited in cited_set {
            writeln!(out, "{citing}\t{cited}")?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{JournalId, PaperRecord};

    fn store_with_refs(entries: &[(&str, &[&str])]) -> CorpusStore {
        let mut store = CorpusStore::default();
        for (id, refs) in entries {
            let rec = PaperRecord {
                paper_id: PaperId::from(*id),
                title: String::new(),
                abstract_text: String::new(),
                year: Some(2000),
                journal_id: JournalId::from("j"),
                keywords: Vec::new(),
                references: refs.iter().map(|r| PaperId::from(*r)).collect(),
                specialty: None,
            };
            store.papers.insert(rec.paper_id.clone(), rec);
        }
        store
    }

    fn ids(xs: &[&str]) -> BTreeSet<PaperId> {
        xs.iter().map(|x| PaperId::from(*x)).collect()
    }

    #[test]
    fn inversion_is_exact_transpose() {
        let store = store_with_refs(&[("A", &["B"]), ("B", &[])]);
        let index = build_citation_index(&store);
        assert_eq!(index.citations_of(&PaperId::from("B")), &ids(&["A"]));
        assert!(index.citations_of(&PaperId::from("A")).is_empty());
    }

    #[test]
    fn unknown_targets_are_dropped_and_counted() {
        let store = store_with_refs(&[("A", &["Z", "B"]), ("B", &[])]);
        let index = build_citation_index(&store);
        assert_eq!(index.dangling_references, 1);
        assert_eq!(index.references_of(&PaperId::from("A")), &ids(&["B"]));
        assert!(!index.forward.contains_key(&PaperId::from("Z")));
    }

    #[test]
    fn handshake_identity() {
        let store = store_with_refs(&[
            ("A", &["B", "C"]),
            ("B", &["C"]),
            ("C", &[]),
            ("D", &["A", "B", "C"]),
        ]);
        let index = build_citation_index(&store);
        let fwd: usize = index.forward.values().map(BTreeSet::len).sum();
        let inv: usize = index.inverted.values().map(BTreeSet::len).sum();
        assert_eq!(fwd, inv);
        assert_eq!(fwd, 6);
    }

    #[test]
    fn citation_ratio_arithmetic() {
        let store = store_with_refs(&[
            ("P", &[]),
            ("c1", &["P"]),
            ("c2", &["P"]),
            ("c3", &["P"]),
            ("c4", &["P"]),
        ]);
        let index = build_citation_index(&store);
        let ratio = cross_citation_ratio(&PaperId::from("P"), &ids(&["c1"]), &index);
        assert_eq!((ratio.numerator, ratio.denominator), (1, 4));
        assert_eq!(ratio.value_f64(), Some(0.25));
        assert!(ratio.at_least(Tau::new(1, 4).unwrap()));
        assert!(!ratio.at_least(Tau::new(26, 100).unwrap()));

        let all =
            cross_citation_ratio(&PaperId::from("P"), &ids(&["c1", "c2", "c3", "c4"]), &index);
        assert_eq!(all.value_f64(), Some(1.0));
    }

    #[test]
    fn uncited_paper_has_undefined_ratio() {
        let store = store_with_refs(&[("P", &[]), ("Q", &[])]);
        let index = build_citation_index(&store);
        let ratio = cross_citation_ratio(&PaperId::from("P"), &ids(&["Q"]), &index);
        assert!(!ratio.is_defined());
        assert_eq!(ratio.value(), None);
        // undefined means excluded at every threshold
        assert!(!ratio.at_least(Tau::new(1, 100).unwrap()));
    }

    #[test]
    fn reference_ratio_arithmetic() {
        let refs: Vec<String> = (0..10).map(|i| format!("r{i}")).collect();
        let ref_strs: Vec<&str> = refs.iter().map(String::as_str).collect();
        let mut entries: Vec<(&str, &[&str])> = vec![("P", &ref_strs)];
        for r in &ref_strs {
            entries.push((r, &[]));
        }
        let store = store_with_refs(&entries);
        let index = build_citation_index(&store);
        let ratio = cross_reference_ratio(&PaperId::from("P"), &ids(&["r0", "r1"]), &index);
        assert_eq!((ratio.numerator, ratio.denominator), (2, 10));
        assert_eq!(ratio.value_f64(), Some(0.2));

        let none = cross_reference_ratio(&PaperId::from("r0"), &ids(&["P"]), &index);
        assert!(!none.is_defined());
    }

    #[test]
    fn transpose_matches_naive_double_loop() {
        // deterministic pseudo-random reference structure
        let n = 200usize;
        let names: Vec<String> = (0..n).map(|i| format!("p{i:03}")).collect();
        let mut entries: Vec<(String, Vec<String>)> = Vec::new();
        for i in 0..n {
            let mut refs = Vec::new();
            let mut x = (i * 2654435761) % 4294967296;
            for _ in 0..(i % 7) {
                x = (x * 1103515245 + 12345) % 4294967296;
                let t = x % n;
                if t != i {
                    refs.push(names[t].clone());
                }
            }
            entries.push((names[i].clone(), refs));
        }
        let borrowed: Vec<(&str, Vec<&str>)> = entries
            .iter()
            .map(|(id, refs)| (id.as_str(), refs.iter().map(String::as_str).collect()))
            .collect();
        let slices: Vec<(&str, &[&str])> = borrowed
            .iter()
            .map(|(id, refs)| (*id, refs.as_slice()))
            .collect();
        let store = store_with_refs(&slices);
        let index = build_citation_index(&store);

        // naive O(n^2) inversion
        for cited in store.papers.keys() {
            let naive: BTreeSet<PaperId> = store
                .papers
                .values()
                .filter(|q| q.paper_id != *cited && q.references.contains(cited))
                .map(|q| q.paper_id.clone())
                .collect();
            assert_eq!(index.citations_of(cited), &naive, "paper {cited}");
        }
    }

    #[test]
    fn ratios_are_scale_free_under_corpus_duplication() {
        let store = store_with_refs(&[("A", &["B", "C"]), ("B", &["C"]), ("C", &[])]);
        let mut doubled = store.clone();
        for rec in store.papers.values() {
            let mut copy = rec.clone();
            copy.paper_id = PaperId(format!("{}__copy", rec.paper_id));
            copy.references = rec
                .references
                .iter()
                .map(|r| PaperId(format!("{r}__copy")))
                .collect();
            doubled.papers.insert(copy.paper_id.clone(), copy);
        }
        let index = build_citation_index(&store);
        let doubled_index = build_citation_index(&doubled);
        let other = ids(&["B", "C"]);
        for id in store.papers.keys() {
            let before = cross_reference_ratio(id, &other, &index);
            let after = cross_reference_ratio(id, &other, &doubled_index);
            assert_eq!(before.value(), after.value());
        }
    }

    #[test]
    fn removing_a_paper_clears_it_from_every_adjacency_on_rebuild() {
        let mut store = store_with_refs(&[("A", &["B", "C"]), ("B", &["C"]), ("C", &["A"])]);
        store.papers.remove(&PaperId::from("C"));
        let index = build_citation_index(&store);
        let gone = PaperId::from("C");
        assert!(!index.forward.contains_key(&gone));
        assert!(!index.inverted.contains_key(&gone));
        for targets in index.forward.values().chain(index.inverted.values()) {
            assert!(!targets.contains(&gone));
        }
        // C's former outgoing references now count as dangling from nobody;
        // references *to* C are dangling
        assert_eq!(index.dangling_references, 2);
    }

    #[test]
    fn edge_list_export_format() {
        let store = store_with_refs(&[("A", &["B"]), ("B", &["A"])]);
        let index = build_citation_index(&store);
        let mut buf = Vec::new();
        export_edge_list(&index, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "A\tB\nB\tA\n");
    }
}
