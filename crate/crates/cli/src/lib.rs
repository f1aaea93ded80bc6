//! Reproduces condition-number tables and figure data for cardinal B-spline
//! collocation matrices, and audits the minimal-eigenvalue conjecture for
//! their periodizations.

pub mod commands;
pub mod config;
pub mod error;
pub mod report;

use std::io::Write;

use config::{OutputFormat, RunConfig};
use error::{CliError, Result, EXIT_CERTIFICATION, EXIT_COUNTEREXAMPLE, EXIT_OK};
use report::Report;

/// Runs the configured command on a worker pool of `config.jobs` threads.
pub fn execute(config: &RunConfig) -> Result<Report> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| CliError::Config(format!("cannot start worker pool: {e}")))?;
    pool.install(|| commands::run(config))
}

/// Renders the report in the configured format.
pub fn render<W: Write>(config: &RunConfig, report: &Report, out: W) -> std::io::Result<()> {
    match config.output_format {
        OutputFormat::Csv => report.write_csv(out),
        OutputFormat::Json => report.write_json(config, out),
        OutputFormat::Text => report.write_text(out),
    }
}

/// Exit status implied by a completed report.
pub fn exit_status(report: &Report) -> i32 {
    if report.counterexamples > 0 {
        EXIT_COUNTEREXAMPLE
    } else if report.cross_check_failures > 0 || report.uncertified_cells() > 0 {
        EXIT_CERTIFICATION
    } else {
        EXIT_OK
    }
}
