//! Command-line front end for `bwbary`: builds the constructions, runs the
//! solver, certificate, recurrence and Monte-Carlo experiments, and writes
//! matrices as JSON, reports as JSON or text, and series as CSV.
//!
//! Exit codes: 0 success, 1 tolerance failure, 2 invalid input or IO error,
//! 3 numerical failure.

pub mod args;
pub mod commands;
pub mod error;
pub mod matrix_file;
pub mod report;

use std::time::Instant;

pub use args::{Cli, Command, ReportFormat};
pub use error::{CliError, CliResult};
pub use matrix_file::{MatrixFile, MatrixKind};
pub use report::RunReport;

/// Runs one subcommand; `argv` (without the program name) is echoed into the report.
pub fn run(cli: &Cli, argv: Vec<String>) -> CliResult<RunReport> {
    let start = Instant::now();
    let mut report = RunReport::new(argv);
    match &cli.command {
        Command::Construct(a) => commands::construct(a, cli.rank_tol, &mut report)?,
        Command::Verify(a) => commands::verify(a, &mut report)?,
        Command::Barycentre(a) => commands::barycentre(a, &mut report)?,
        Command::Recurrence(a) => commands::recurrence(a, &mut report)?,
        Command::Mc(a) => commands::mc(a, &mut report)?,
        Command::Sweep(a) => commands::sweep(a, cli.rank_tol, &mut report)?,
    }
    report.timing.wall_clock_seconds = start.elapsed().as_secs_f64();
    Ok(report)
}
