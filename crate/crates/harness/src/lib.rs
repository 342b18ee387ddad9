//! Configured, seeded experiment runs over the bounds in `qfibounds-core`,
//! with CSV/JSON reports and a checksummed manifest.

pub mod config;
pub mod error;
pub mod experiments;
pub mod output;

pub use config::{Experiment, ExperimentConfig, Format};
pub use error::{HarnessError, Result};
pub use experiments::{execute, ExperimentOutput, Table};
pub use output::{run, sha256_hex, RunManifest, MANIFEST_FILE};

pub const THREADS_ENV: &str = "QFIBOUNDS_THREADS";

/// Runs `f` on a pool capped by `QFIBOUNDS_THREADS` when that is set to a
/// positive integer, and on the global pool otherwise.
pub fn with_thread_cap<T: Send>(f: impl FnOnce() -> T + Send) -> Result<T> {
    let cap = std::env::var(THREADS_ENV).ok().map(|v| v.trim().parse::<usize>());
    match cap {
        None => Ok(f()),
        Some(Ok(n)) if n > 0 => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| HarnessError::InvalidConfig(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
        Some(_) => Err(HarnessError::InvalidConfig(format!("{THREADS_ENV} must be a positive integer"))),
    }
}
