//! Keyword lexicons: normalization, frequency rankings, curation, and
//! exact matching against paper records.
//!
//! Matching is exact string equality after normalization. No stemming, no
//! substring matching: looser rules would silently inflate keyword-based
//! retrieval and break comparability between strategies.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;
use unicode_normalization::UnicodeNormalization;

use crate::corpus::{field_membership, CorpusError, CorpusStore, FieldDefinition, PaperRecord};
use crate::fingerprint::Fingerprinter;

const BUNDLED_CS: &str = include_str!("../data/lexicon_cs.txt");
const BUNDLED_NEURO: &str = include_str!("../data/lexicon_neuro.txt");

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("no papers in field {0}")]
    EmptyCorpus(String),
    #[error("ranking size must be at least 1")]
    ZeroRank,
    #[error("lexicon cap must be at least 1")]
    ZeroCap,
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
}

/// Canonical keyword form: Unicode NFC, lowercased, surrounding whitespace
/// stripped, internal whitespace runs collapsed to single spaces. Hyphens,
/// parentheses, and digits are preserved.
///
/// An empty result signals an empty or whitespace-only input; callers skip
/// such keywords.
pub fn normalize_keyword(raw: &str) -> String {
    let composed: String = raw.nfc().collect();
    let lowered = composed.to_lowercase();
    lowered.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// One ranking row: canonical keyword plus distinct-paper frequency.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankEntry {
    pub keyword: String,
    pub frequency: usize,
}

/// Per-field keyword frequency ranking, descending by frequency with
/// lexicographic tie-break.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeywordRanking {
    pub field_name: String,
    pub entries: Vec<RankEntry>,
}

/// Count the canonical keywords of papers in a field's corpus and return
/// the top `k`. Frequency is the number of distinct papers carrying the
/// keyword, not token occurrences.
pub fn extract_top_keywords(
    store: &CorpusStore,
    field: &FieldDefinition,
    k: usize,
) -> Result<KeywordRanking, LexiconError> {
    if k == 0 {
        return Err(LexiconError::ZeroRank);
    }
    let members = match store.membership(&field.field_name) {
        Some(cached) => cached.clone(),
        None => field_membership(store, field)?,
    };
    if members.is_empty() {
        return Err(LexiconError::EmptyCorpus(field.field_name.clone()));
    }
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for id in &members {
        let paper = &store.papers[id];
        let canon: BTreeSet<String> = paper
            .keywords
            .iter()
            .map(|s| normalize_keyword(s))
            .filter(|s| !s.is_empty())
            .collect();
        for kw in canon {
            *counts.entry(kw).or_default() += 1;
        }
    }
    let mut entries: Vec<RankEntry> = counts
        .into_iter()
        .map(|(keyword, frequency)| RankEntry { keyword, frequency })
        .collect();
    entries.sort_by(|a, b| {
        b.frequency
            .cmp(&a.frequency)
            .then_with(|| a.keyword.cmp(&b.keyword))
    });
    entries.truncate(k);
    Ok(KeywordRanking {
        field_name: field.field_name.clone(),
        entries,
    })
}

/// How a lexicon came to be.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LexiconProvenance {
    pub source: String,
    pub exclusions_applied: usize,
    pub cap: usize,
    /// True when fewer than `cap` keywords survived curation.
    pub shortfall: bool,
}

/// Curated, normalized keyword list representing one field's vocabulary.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lexicon {
    pub field_name: String,
    pub keywords: BTreeSet<String>,
    pub provenance: LexiconProvenance,
}

impl Lexicon {
    pub fn len(&self) -> usize {
        self.keywords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keywords.is_empty()
    }

    pub fn contains(&self, canonical: &str) -> bool {
        self.keywords.contains(canonical)
    }

    pub fn fingerprint(&self) -> String {
        let mut fp = Fingerprinter::new();
        fp.push_str(&self.field_name);
        for k in &self.keywords {
            fp.push_str(k);
        }
        fp.finish()
    }

    /// Parse a lexicon file: one keyword per line, `#` starts a comment,
    /// blank lines ignored, keywords normalized on load.
    pub fn parse<R: BufRead>(
        reader: R,
        field_name: &str,
        source: &str,
        cap: usize,
    ) -> Result<Self, LexiconError> {
        if cap == 0 {
            return Err(LexiconError::ZeroCap);
        }
        let mut keywords = BTreeSet::new();
        for line in reader.lines() {
            let line = line?;
            let body = line.trim();
            if body.is_empty() || body.starts_with('#') {
                continue;
            }
            let canon = normalize_keyword(body);
            if !canon.is_empty() {
                keywords.insert(canon);
            }
        }
        let shortfall = keywords.len() < cap;
        if shortfall {
            log::warn!(
                "lexicon {field_name}: {} keywords, below the cap of {cap}",
                keywords.len()
            );
        }
        Ok(Lexicon {
            field_name: field_name.to_string(),
            keywords,
            provenance: LexiconProvenance {
                source: source.to_string(),
                exclusions_applied: 0,
                cap,
                shortfall,
            },
        })
    }

    pub fn load(path: &Path, field_name: &str, cap: usize) -> Result<Self, LexiconError> {
        let file = std::fs::File::open(path)?;
        Lexicon::parse(
            std::io::BufReader::new(file),
            field_name,
            &path.display().to_string(),
            cap,
        )
    }

    /// Write one keyword per line in canonical order.
    pub fn write<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for k in &self.keywords {
            writeln!(out, "{k}")?;
        }
        Ok(())
    }

    /// The bundled, pre-curated computer-science lexicon.
    pub fn bundled_computer_science() -> Self {
        Lexicon::parse(
            BUNDLED_CS.as_bytes(),
            "computer_science",
            "bundled:lexicon_cs.txt",
            crate::defaults::LEXICON_CAP,
        )
        .expect("bundled lexicon parses")
    }

    /// The bundled, pre-curated neuroscience lexicon.
    pub fn bundled_neuroscience() -> Self {
        Lexicon::parse(
            BUNDLED_NEURO.as_bytes(),
            "neuroscience",
            "bundled:lexicon_neuro.txt",
            crate::defaults::LEXICON_CAP,
        )
        .expect("bundled lexicon parses")
    }
}

/// Keep the top ranking entries that survive the exclusion list, truncated
/// to `cap`. Fewer than `cap` survivors is a warning, not an error.
pub fn curate_lexicon(
    ranking: &KeywordRanking,
    exclusions: &BTreeSet<String>,
    cap: usize,
) -> Result<Lexicon, LexiconError> {
    if cap == 0 {
        return Err(LexiconError::ZeroCap);
    }
    let mut keywords = BTreeSet::new();
    let mut excluded = 0usize;
    for entry in &ranking.entries {
        if keywords.len() == cap {
            break;
        }
        if exclusions.contains(&entry.keyword) {
            excluded += 1;
            continue;
        }
        keywords.insert(entry.keyword.clone());
    }
    let shortfall = keywords.len() < cap;
    if shortfall {
        log::warn!(
            "lexicon {}: only {} of {cap} requested keywords survived curation",
            ranking.field_name,
            keywords.len()
        );
    }
    Ok(Lexicon {
        field_name: ranking.field_name.clone(),
        keywords,
        provenance: LexiconProvenance {
            source: format!("ranking:{}", ranking.field_name),
            exclusions_applied: excluded,
            cap,
            shortfall,
        },
    })
}

/// Load an exclusion list (same file format as a lexicon), normalized.
pub fn load_exclusions<R: BufRead>(reader: R) -> Result<BTreeSet<String>, LexiconError> {
    let mut out = BTreeSet::new();
    for line in reader.lines() {
        let line = line?;
        let body = line.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let canon = normalize_keyword(body);
        if !canon.is_empty() {
            out.insert(canon);
        }
    }
    Ok(out)
}

/// Canonical paper keywords that appear in the lexicon. Exact equality
/// after normalization; `"machine learning algorithms"` does not match a
/// lexicon entry `"machine learning"`.
pub fn match_keywords(paper: &PaperRecord, lexicon: &Lexicon) -> BTreeSet<String> {
    paper
        .keywords
        .iter()
        .map(|k| normalize_keyword(k))
        .filter(|k| !k.is_empty() && lexicon.contains(k))
        .collect()
}
