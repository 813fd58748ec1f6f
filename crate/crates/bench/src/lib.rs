//! Benchmark harness: HHL and QSVM experiment suites, metrics, and report emission.

pub mod config;
pub mod error;
pub mod hhl_suite;
pub mod metrics;
pub mod qsvm_suite;
pub mod report;
pub mod verify;

use config::ExperimentConfig;
use error::{BenchError, Result};
use report::BenchReport;

/// Runs `f` on a rayon pool sized by the config (or `QLINBENCH_THREADS`).
pub fn with_pool<T: Send>(cfg: &ExperimentConfig, f: impl FnOnce() -> T + Send) -> Result<T> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cfg.thread_count() {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| BenchError::Config(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

/// Runs every configured suite and assembles the report.
pub fn run(cfg: &ExperimentConfig) -> Result<BenchReport> {
    cfg.validate()?;
    let mut report = BenchReport::new(cfg.clone());
    with_pool(cfg, || -> Result<()> {
        if cfg.has_hhl() {
            let (rows, timings) = hhl_suite::run_hhl_suite(cfg);
            report.hhl_summary = hhl_suite::summarize_hhl(&rows);
            report.hhl_rows = rows;
            report.timings.extend(timings);
        }
        if cfg.has_qsvm() {
            let (rows, timings) = qsvm_suite::run_qsvm_suite(cfg)?;
            if cfg.suites.contains(&config::Suite::QsvmFinal) {
                report.qsvm_final = qsvm_suite::final_comparison(&rows);
            }
            report.qsvm_rows = rows;
            report.timings.extend(timings);
        }
        Ok(())
    })??;
    Ok(report)
}
