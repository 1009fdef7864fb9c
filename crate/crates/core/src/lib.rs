//! Build and evaluate corpora at the intersection of two scientific fields.
//!
//! The crate ingests line-delimited bibliographic records, resolves two
//! disciplinary corpora from journal rules, and retrieves candidate
//! interdisciplinary papers with four strategies: shared keywords (S1),
//! cross-keywords (S2), cross-citations (S3), and cross-references (S4).
//! Retrieval results feed a metrics layer (absolute and fractional counts,
//! Jaccard overlap, yearly trends with Lowess smoothing, discipline and
//! journal profiles, precision / pseudo-recall with bootstrap confidence
//! intervals) and a manual-validation workflow with reproducible sampling
//! and a resumable terminal annotation session. A synthetic corpus
//! generator with planted ground truth backs the test suites.
//!
//! Numeric kernels are generic over the scalar type via [`numeric::Real`];
//! quantities that must stay exact (cross-link ratios, thresholds,
//! fractional counting) use rational arithmetic.

pub mod corpus;
pub mod fingerprint;
pub mod graph;
pub mod lexicon;
pub mod metrics;
pub mod numeric;
pub mod rng;
pub mod strategies;
pub mod synth;
pub mod validation;

pub use numeric::{Real, Tau};

/// Default floating-point scalar for the shipped pipeline.
pub type Scalar = f64;

/// Exact machine-word fraction (cross-link ratios, thresholds).
pub type Fraction = num_rational::Ratio<u64>;

/// Arbitrary-precision fraction (fractional-counting sums).
pub type BigFraction = num_rational::BigRational;

/// Pipeline defaults shared by the library and the command-line front end.
pub mod defaults {
    use crate::numeric::Tau;

    /// Curation cap per field lexicon.
    pub const LEXICON_CAP: usize = 100;
    /// Validation sample size per strategy.
    pub const SAMPLE_SIZE: usize = 522;
    /// Bootstrap replications for confidence intervals.
    pub const BOOTSTRAP_REPLICATIONS: usize = 10_000;
    /// Confidence level for bootstrap intervals.
    pub const CONFIDENCE_LEVEL: f64 = 0.95;
    /// Lowess neighborhood fraction for yearly series smoothing.
    pub const LOWESS_FRAC: f64 = 0.3;
    /// Lowess robustifying iterations.
    pub const LOWESS_ITERS: usize = 2;
    /// Disciplines below this share merge into "Others".
    pub const OTHERS_MIN_SHARE: f64 = 0.03;

    /// Default relative threshold for the cross-citation strategy (S3).
    pub fn tau_s3() -> Tau {
        Tau::new(1, 4).expect("static threshold")
    }

    /// Default relative threshold for the cross-reference strategy (S4).
    pub fn tau_s4() -> Tau {
        Tau::new(3, 20).expect("static threshold")
    }

    /// Default relative sweep grid: 5% steps from 5% to 25%.
    pub fn relative_grid() -> Vec<Tau> {
        (1..=5)
            .map(|k| Tau::new(k, 20).expect("static threshold"))
            .collect()
    }

    /// Default absolute sweep grid: 1 to 5 cross-field links.
    pub fn absolute_grid() -> Vec<u32> {
        (1..=5).collect()
    }
}
