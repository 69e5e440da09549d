//! Library side of the `sobolev` command: argument types, the four
//! commands and CSV/JSON rendering. `main.rs` only parses and writes.

pub mod args;
pub mod commands;
pub mod output;
pub mod validate;

use args::{Cli, Command, OutputArgs};
use output::Table;
use serde_json::Value;
use sobolev_core::ball_solver::SolverError;
use sobolev_core::eiglin::EigError;
use sobolev_core::mortar_sem::MortarError;
use sobolev_core::specfun::SpecfunError;
use std::io::Write;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("bad argument: {0}")]
    BadArgument(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("{0} validation check(s) failed")]
    ValidationFailed(usize),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::BadArgument(_) | CliError::Io(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::ValidationFailed(_) => 4,
        }
    }
}

impl From<SolverError> for CliError {
    fn from(e: SolverError) -> Self {
        match e {
            SolverError::InvalidArgument(s) => CliError::BadArgument(s),
            SolverError::Special(e) => e.into(),
            other => CliError::Numerical(other.to_string()),
        }
    }
}

impl From<SpecfunError> for CliError {
    fn from(e: SpecfunError) -> Self {
        match e {
            SpecfunError::Bracketing { .. } => CliError::Numerical(e.to_string()),
            other => CliError::BadArgument(other.to_string()),
        }
    }
}

impl From<EigError> for CliError {
    fn from(e: EigError) -> Self {
        match e {
            EigError::TooMany { .. } | EigError::InvalidTolerance(_) => CliError::BadArgument(e.to_string()),
            other => CliError::Numerical(other.to_string()),
        }
    }
}

impl From<MortarError> for CliError {
    fn from(e: MortarError) -> Self {
        match e {
            MortarError::InvalidArgument(s) => CliError::BadArgument(s),
            MortarError::Solver(e) => e.into(),
            MortarError::Eig(e) => e.into(),
            other => CliError::Numerical(other.to_string()),
        }
    }
}

/// Result of one command: the table plus a `meta` record for JSON output.
#[derive(Debug, Clone)]
pub struct Report {
    pub table: Table,
    pub meta: Value,
    /// Failed validation checks (always 0 for the other commands).
    pub failures: usize,
}

pub fn run(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::Reference(a) => commands::cmd_reference(a),
        Command::Solve(a) => commands::cmd_solve(a),
        Command::Convergence(a) => commands::cmd_convergence(a),
        Command::Validate(a) => validate::cmd_validate(a),
    }
}

pub fn output_args(cli: &Cli) -> &OutputArgs {
    match &cli.command {
        Command::Reference(a) | Command::Solve(a) | Command::Convergence(a) => &a.output,
        Command::Validate(a) => &a.output,
    }
}

/// Renders the report and writes it to `--out` or stdout.
pub fn emit(report: &Report, out: &OutputArgs) -> Result<(), CliError> {
    let text = output::render(&report.table, &report.meta, out.format);
    match &out.out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}
