//! Command-line driver: configuration, task dispatch and JSON reports.

pub mod config;
pub mod report;
pub mod tasks;

pub use config::{RawConfig, RunConfig, Task};
pub use report::Report;
pub use tasks::run;

/// Caps the global worker pool at `WHITTAKER_LAB_THREADS` when set.
pub fn init_thread_pool() {
    if let Some(threads) = std::env::var("WHITTAKER_LAB_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&t| t > 0)
    {
        // a second call (or a pool built elsewhere) is harmless
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
}
