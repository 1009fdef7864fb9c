//! Declarative run configuration.
//!
//! Every knob has a default; a run config file only overrides what it
//! names, and command-line flags win over the file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crossfield::corpus::FieldDefinition;
use crossfield::strategies::RateBase;
use crossfield::{defaults, Tau};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Paths {
    pub records: PathBuf,
    pub journals: PathBuf,
    /// Keyword lexicon for field A; bundled list when unset.
    pub lexicon_a: Option<PathBuf>,
    /// Keyword lexicon for field B; bundled list when unset.
    pub lexicon_b: Option<PathBuf>,
    /// Label files per strategy id ("S1".."S4") for the evaluation table.
    pub labels: BTreeMap<String, PathBuf>,
    /// Optional journal->discipline table (CSV: journal_id,discipline);
    /// journal specialties serve as the taxonomy when unset.
    pub taxonomy: Option<PathBuf>,
    pub output_dir: PathBuf,
}

impl Default for Paths {
    fn default() -> Self {
        Paths {
            records: PathBuf::new(),
            journals: PathBuf::new(),
            lexicon_a: None,
            lexicon_b: None,
            labels: BTreeMap::new(),
            taxonomy: None,
            output_dir: PathBuf::from("out"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FieldPair {
    pub a: FieldDefinition,
    pub b: FieldDefinition,
}

impl Default for FieldPair {
    fn default() -> Self {
        FieldPair {
            a: FieldDefinition::new("neuroscience")
                .with_wildcards(&["brain*", "neuro*"])
                .with_specialties(&["Neurology & Neurosurgery"]),
            b: FieldDefinition::new("computer_science").with_specialties(&["Computers"]),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct StrategySettings {
    pub tau_s3: Tau,
    pub tau_s4: Tau,
    pub sweep_grid: Vec<Tau>,
    pub absolute_grid: Vec<u32>,
    pub sweep_base: RateBase,
}

impl Default for StrategySettings {
    fn default() -> Self {
        StrategySettings {
            tau_s3: defaults::tau_s3(),
            tau_s4: defaults::tau_s4(),
            sweep_grid: defaults::relative_grid(),
            absolute_grid: defaults::absolute_grid(),
            sweep_base: RateBase::Union,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MetricSettings {
    pub lowess_frac: f64,
    pub lowess_iters: usize,
    pub others_min_share: f64,
    pub bootstrap_replications: usize,
    pub confidence_level: f64,
    pub top_journals: usize,
    pub lexicon_cap_a: usize,
    pub lexicon_cap_b: usize,
}

impl Default for MetricSettings {
    fn default() -> Self {
        MetricSettings {
            lowess_frac: defaults::LOWESS_FRAC,
            lowess_iters: defaults::LOWESS_ITERS,
            others_min_share: defaults::OTHERS_MIN_SHARE,
            bootstrap_replications: defaults::BOOTSTRAP_REPLICATIONS,
            confidence_level: defaults::CONFIDENCE_LEVEL,
            top_journals: 20,
            lexicon_cap_a: defaults::LEXICON_CAP,
            lexicon_cap_b: defaults::LEXICON_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SamplingSettings {
    pub sample_size: usize,
    pub sample_seed: u64,
    pub bootstrap_seed: u64,
}

impl Default for SamplingSettings {
    fn default() -> Self {
        SamplingSettings {
            sample_size: defaults::SAMPLE_SIZE,
            sample_seed: 42,
            bootstrap_seed: 43,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub paths: Paths,
    pub fields: FieldPair,
    pub strategies: StrategySettings,
    pub metrics: MetricSettings,
    pub sampling: SamplingSettings,
    pub threads: Option<usize>,
}

impl RunConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| anyhow::anyhow!("cannot read config {}: {e}", path.display()))?;
        let config: RunConfig = serde_json::from_str(&text)
            .map_err(|e| anyhow::anyhow!("cannot parse config {}: {e}", path.display()))?;
        Ok(config)
    }

    /// Check that every referenced input exists. Violations are usage
    /// errors (exit code 2).
    pub fn validate_paths(&self) -> Result<(), String> {
        if self.paths.records.as_os_str().is_empty() {
            return Err("config is missing paths.records".into());
        }
        if !self.paths.records.exists() {
            return Err(format!(
                "records file {} does not exist",
                self.paths.records.display()
            ));
        }
        if self.paths.journals.as_os_str().is_empty() {
            return Err("config is missing paths.journals".into());
        }
        if !self.paths.journals.exists() {
            return Err(format!(
                "journals file {} does not exist",
                self.paths.journals.display()
            ));
        }
        for (name, path) in [
            ("lexicon_a", &self.paths.lexicon_a),
            ("lexicon_b", &self.paths.lexicon_b),
            ("taxonomy", &self.paths.taxonomy),
        ] {
            if let Some(path) = path {
                if !path.exists() {
                    return Err(format!("{name} file {} does not exist", path.display()));
                }
            }
        }
        for (strategy, path) in &self.paths.labels {
            if !path.exists() {
                return Err(format!(
                    "label file for {strategy} ({}) does not exist",
                    path.display()
                ));
            }
        }
        Ok(())
    }

    /// Fingerprint of the canonical JSON form; recorded in every output.
    pub fn fingerprint(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        crossfield::fingerprint::fingerprint_bytes(json.as_bytes())
    }
}
