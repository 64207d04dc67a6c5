//! Batch driver behind the `bose1d` binary: one JSON config in, a JSON
//! report plus CSV tables out.
//!
//! Exit status is 0 when every invariant the run asserts holds, 2 for an
//! unusable config, 3 when a solver fails to converge and 4 when an
//! invariant is violated.

mod args;
mod commands;
mod config;
mod report;

use std::time::Instant;

pub use args::{Cli, Subcommand};
pub use config::{Command, EOfGammaSpec, Gp3dSpec, OracleSpec, RunConfig, SolverOverrides, SweepKind, SweepSpec};
pub use report::{Invariant, Report, RunMetadata, METADATA_FILE, REPORT_FILE, REPORT_SCHEMA};

use crate::error::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;
pub const EXIT_INVARIANT: i32 = 4;

/// Exit status for a run that stopped with `err`.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::InvalidInput(_) | Error::Precondition(_) | Error::Json(_) | Error::InvalidTable(_) | Error::Io(_) => {
            EXIT_CONFIG
        }
        Error::NonConvergence { .. }
        | Error::DomainTooSmall { .. }
        | Error::UnderResolved(_)
        | Error::Bracket(_)
        | Error::MemoryBudget { .. } => EXIT_SOLVER,
    }
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub report: Report,
    pub exit_code: i32,
}

/// Validates `config`, runs its command and writes `report.json` and
/// `metadata.json` into the output directory.
pub fn run(config: &RunConfig) -> Result<RunOutcome> {
    let started = RunMetadata::now_unix();
    let clock = Instant::now();
    config.validate()?;
    let mut report = Report::new(config);
    commands::dispatch(config, &mut report)?;
    report.write(&config.out_dir)?;
    RunMetadata {
        started_unix_seconds: started,
        elapsed_seconds: clock.elapsed().as_secs_f64(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        threads: config.threads.unwrap_or_else(rayon::current_num_threads),
    }
    .write(&config.out_dir)?;
    let exit_code = if report.passed() { EXIT_OK } else { EXIT_INVARIANT };
    Ok(RunOutcome { report, exit_code })
}
