//! Parameter scans, oracle comparisons and self-tests on top of
//! `floquet_complexity`, written as CSV tables.

pub mod analysis;
pub mod average;
pub mod cli;
pub mod config;
pub mod error;
pub mod evolve;
pub mod oracle;
pub mod output;
pub mod phase;
pub mod selftest;

pub use error::{Result, ScanError};

/// Run `f` on a dedicated pool of `workers` threads.
pub fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| ScanError::Usage(format!("cannot start {workers} workers: {e}")))?;
    Ok(pool.install(f))
}
