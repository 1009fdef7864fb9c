//! Command-line front end for the crossfield engine.

pub mod commands;
pub mod config;
pub mod tables;

use std::fmt;

/// An error in how the tool was invoked (bad flags, missing inputs).
/// Mapped to exit code 2, runtime failures to exit code 1.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

/// Bound the rayon worker pool. Results never depend on the pool size;
/// this only caps parallelism.
pub fn set_threads(n: usize) {
    if n == 0 {
        return;
    }
    if let Err(err) = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
    {
        log::warn!("thread pool already initialized: {err}");
    }
}
