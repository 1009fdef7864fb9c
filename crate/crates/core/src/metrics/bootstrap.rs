//! Percentile bootstrap confidence intervals for binary-outcome samples.
//!
//! Each replication resamples n-of-n with replacement from its own seeded
//! stream (see [`crate::rng::stream_rng`]), so the interval is identical
//! whether replications run on one thread or many.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::numeric::{real_from_usize, Real};
use crate::rng::stream_rng;

use super::MetricsError;

/// Statistic resampled by the bootstrap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Statistic {
    Mean,
}

/// Percentile bootstrap interval: empirical quantiles of the replicated
/// statistic around the plain sample estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BootstrapInterval<R> {
    pub lower: R,
    pub point: R,
    pub upper: R,
    pub replications: usize,
    pub level: f64,
    pub seed: u64,
}

/// Resample a binary sample and return the percentile interval at the
/// given confidence level. Deterministic given the seed.
pub fn bootstrap_ci<R: Real>(
    sample: &[bool],
    statistic: Statistic,
    replications: usize,
    level: f64,
    seed: u64,
) -> Result<BootstrapInterval<R>, MetricsError> {
    let Statistic::Mean = statistic;
    let n = sample.len();
    if n == 0 {
        return Err(MetricsError::EmptySample);
    }
    if replications == 0 {
        return Err(MetricsError::ZeroReplications);
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(MetricsError::InvalidLevel(level));
    }

    let successes = sample.iter().filter(|b| **b).count();
    let point = real_from_usize::<R>(successes) / real_from_usize::<R>(n);

    let mut means: Vec<R> = (0..replications)
        .into_par_iter()
        .map(|rep| {
            let mut rng = stream_rng(seed, rep as u64);
            let mut hits = 0usize;
            for _ in 0..n {
                if sample[rng.random_range(0..n)] {
                    hits += 1;
                }
            }
            real_from_usize::<R>(hits) / real_from_usize::<R>(n)
        })
        .collect();
    means.sort_by(|a, b| a.partial_cmp(b).expect("means are finite"));

    let alpha = 1.0 - level;
    Ok(BootstrapInterval {
        lower: quantile(&means, alpha / 2.0),
        point,
        upper: quantile(&means, 1.0 - alpha / 2.0),
        replications,
        level,
        seed,
    })
}

/// Linear-interpolation quantile over a sorted slice.
fn quantile<R: Real>(sorted: &[R], q: f64) -> R {
    let m = sorted.len();
    if m == 1 {
        return sorted[0];
    }
    let pos = q * (m - 1) as f64;
    let lo = pos.floor() as usize;
    let frac = pos - lo as f64;
    if lo + 1 >= m {
        return sorted[m - 1];
    }
    let f = R::from_f64(frac).expect("fraction fits scalar");
    sorted[lo] * (R::one() - f) + sorted[lo + 1] * f
}
