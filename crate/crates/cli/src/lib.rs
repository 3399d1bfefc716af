//! Command-line front end: argument grammar, table encodings and plots.

pub mod args;
pub mod commands;
pub mod output;
pub mod svg;

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};

use thiserror::Error;

pub use args::{Cli, Format};
pub use output::{Report, RunManifest, Table, Value};

/// Worker-count override; unset means all available cores.
pub const THREADS_VAR: &str = "XYCHAIN_THREADS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("oracle mismatch: {0}")]
    OracleMismatch(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 1,
            CliError::Invariant(_) => 2,
            CliError::OracleMismatch(_) => 3,
        }
    }
}

pub fn configure_threads(value: Option<&str>) -> Result<(), CliError> {
    let Some(value) = value else { return Ok(()) };
    let threads = value
        .trim()
        .parse::<usize>()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::Usage(format!("{THREADS_VAR} must be a positive integer, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Usage(format!("cannot start {threads} workers: {e}")))
}

/// Runs one command. The table is written even when the run ends in a
/// mismatch or invariant failure, which is then returned as the error.
pub fn run(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    let outcome = commands::execute(&cli.command)?;
    for w in &outcome.warnings {
        writeln!(stderr, "warning: {w}")?;
    }
    if let Some((path, svg)) = &outcome.svg {
        fs::write(path, svg)?;
    }
    let emit = |out: &mut dyn Write| match cli.format {
        Format::Csv => outcome.report.write_csv(out),
        Format::Json => outcome.report.write_json(out),
    };
    match &cli.output {
        Some(path) => {
            let mut file = BufWriter::new(File::create(path)?);
            emit(&mut file)?;
            file.flush()?;
        }
        None => emit(stdout)?,
    }
    outcome.status.map_or(Ok(()), Err)
}
