//! Experiment runner for the `listcolour` crate. Every subcommand produces a
//! [`Report`] with its configuration, seed, crate versions and a pass/fail
//! line per assertion; [`exit_code`] maps the outcome to the process status.

pub mod args;
pub mod commands;
pub mod io;
pub mod report;
pub mod suite;

use std::path::PathBuf;

use thiserror::Error;

pub use args::Cli;
pub use commands::{run, Output};
pub use report::{Assertion, Report, Table};

pub const EXIT_PASS: u8 = 0;
pub const EXIT_ASSERTION: u8 = 1;
pub const EXIT_INPUT: u8 = 2;

/// Input and configuration problems. All map to exit status 2.
#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{0}")]
    Config(String),
    #[error("cannot read {}: {source}", path.display())]
    Read { path: PathBuf, source: std::io::Error },
    #[error("malformed JSON in {}: {message}", path.display())]
    Json { path: PathBuf, message: String },
    #[error("cannot write output: {0}")]
    Write(#[from] std::io::Error),
    #[error("CSV export failed: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Core(#[from] listcolour::Error),
}

pub fn exit_code(outcome: &Result<Output, HarnessError>) -> u8 {
    match outcome {
        Ok(Output::Report(r)) if !r.passed => EXIT_ASSERTION,
        Ok(_) => EXIT_PASS,
        Err(_) => EXIT_INPUT,
    }
}

/// The bytes a run writes, in the requested format.
pub fn render(output: &Output, format: args::Format) -> Result<String, HarnessError> {
    match (output, format) {
        (Output::Report(r), args::Format::Json) => Ok(r.to_json()),
        (Output::Report(r), args::Format::Csv) => r.to_csv(),
        (Output::Artifact(text), args::Format::Json) => Ok(text.clone()),
        (Output::Artifact(_), args::Format::Csv) => Err(HarnessError::Config("generated instances are JSON only".into())),
    }
}
