//! Command-line front end for `masspart`: sampling campaigns,
//! representation-equivalence tests, excursion-law checks and the full
//! statistical certification suite.
//!
//! Every replica draws from a stream derived from `(master seed, label,
//! replica index)`, so results do not depend on the worker count.

pub mod args;
pub mod commands;
pub mod config;
pub mod fuzzing;
pub mod report;
pub mod representation;
pub mod runner;
pub mod suite;

use std::path::PathBuf;

/// Library version written into every output header.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("invalid parameters: {0}")]
    Core(#[from] masspart::Error),
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Core(_) => 2,
            CliError::Io { .. } => 3,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }
}

/// What a successful command run decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    StatFail,
}

impl Outcome {
    pub fn from_passed(passed: bool) -> Self {
        if passed {
            Outcome::Pass
        } else {
            Outcome::StatFail
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Pass => 0,
            Outcome::StatFail => 1,
        }
    }
}

pub use commands::run;
pub use config::RunConfig;
