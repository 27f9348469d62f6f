use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::CliError;

/// Seed used when neither `--seed` nor `MASSPART_SEED` is given.
pub const DEFAULT_SEED: u64 = 0xC0FFEE;
pub const SEED_ENV: &str = "MASSPART_SEED";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub master_seed: u64,
    pub replicas: usize,
    pub workers: usize,
    /// Overrides every built-in significance gate when set.
    pub significance: Option<f64>,
    pub output_format: OutputFormat,
    pub output_path: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(master_seed: u64, replicas: usize, workers: usize) -> Self {
        Self {
            master_seed,
            replicas,
            workers,
            significance: None,
            output_format: OutputFormat::Json,
            output_path: None,
        }
    }

    /// The gate to use where `default` is the built-in one.
    pub fn gate(&self, default: f64) -> f64 {
        self.significance.unwrap_or(default)
    }
}

/// Parses a seed written in decimal or as `0x`-prefixed hexadecimal.
pub fn parse_seed(text: &str) -> Result<u64, CliError> {
    let t = text.trim();
    let parsed = match t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => t.parse::<u64>(),
    };
    parsed.map_err(|e| CliError::Usage(format!("invalid seed `{text}`: {e}")))
}

/// Seed precedence: explicit flag, then the environment, then the default.
pub fn resolve_seed(flag: Option<&str>, env: Option<&str>) -> Result<u64, CliError> {
    match (flag, env) {
        (Some(f), _) => parse_seed(f),
        (None, Some(e)) if !e.trim().is_empty() => parse_seed(e),
        _ => Ok(DEFAULT_SEED),
    }
}

pub fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seed_precedence() {
        assert_eq!(resolve_seed(None, None).unwrap(), DEFAULT_SEED);
        assert_eq!(resolve_seed(None, Some("7")).unwrap(), 7);
        assert_eq!(resolve_seed(Some("0x10"), Some("7")).unwrap(), 16);
        assert_eq!(resolve_seed(None, Some(" ")).unwrap(), DEFAULT_SEED);
        assert!(resolve_seed(Some("seed"), None).is_err());
        assert!(parse_seed("18446744073709551616").is_err());
    }
}
