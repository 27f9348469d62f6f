use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::{resolve_seed, OutputFormat, RunConfig, SEED_ENV};
use crate::representation::{ParamSet, Representation};
use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "masspart", version, about = "Random mass-partitions: sampling and statistical certification")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Draw replicas of a partition and write the first k atoms and the rest.
    Sample(SampleArgs),
    /// Two-sample KS test between two representations on one component.
    Equiv(EquivArgs),
    /// Constructive versus closed-form excursion tuples.
    Excursion(LawArgs),
    /// Arcsine laws: thinned-process age fraction and occupation time.
    Arcsine(LawArgs),
    /// Summability diagnostics for stick-breaking parameter sequences.
    CheckAssumption(CheckArgs),
    /// Run the full certification suite.
    Suite(SuiteArgs),
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Master seed, decimal or 0x-hex. Falls back to MASSPART_SEED, then 0xC0FFEE.
    #[arg(long)]
    pub seed: Option<String>,
    /// Number of replicas.
    #[arg(short = 'n', long = "replicas")]
    pub replicas: Option<usize>,
    /// Worker threads (defaults to the available parallelism).
    #[arg(long)]
    pub workers: Option<usize>,
    /// Significance level replacing every built-in gate.
    #[arg(long)]
    pub significance: Option<f64>,
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl Common {
    pub fn to_config(&self, default_replicas: usize, default_format: OutputFormat) -> Result<RunConfig, CliError> {
        let env = std::env::var(SEED_ENV).ok();
        let seed = resolve_seed(self.seed.as_deref(), env.as_deref())?;
        let replicas = self.replicas.unwrap_or(default_replicas);
        if replicas == 0 {
            return Err(CliError::Usage("-n must be at least 1".into()));
        }
        let workers = self.workers.unwrap_or_else(crate::config::default_workers);
        if workers == 0 {
            return Err(CliError::Usage("--workers must be at least 1".into()));
        }
        if let Some(s) = self.significance {
            if !(s > 0.0 && s < 1.0) {
                return Err(CliError::Usage(format!("--significance must lie in (0, 1), got {s}")));
            }
        }
        Ok(RunConfig {
            master_seed: seed,
            replicas,
            workers,
            significance: self.significance,
            output_format: self.format.unwrap_or(default_format),
            output_path: self.out.clone(),
        })
    }
}

#[derive(Debug, Clone, Copy, Args)]
pub struct ParamArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub a1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub c: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub theta: Option<f64>,
}

impl From<ParamArgs> for ParamSet {
    fn from(p: ParamArgs) -> Self {
        ParamSet { alpha: p.alpha, a1: p.a1, c: p.c, theta: p.theta }
    }
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(value_enum)]
    pub representation: Representation,
    #[command(flatten)]
    pub params: ParamArgs,
    /// Atoms written per replica.
    #[arg(short = 'k', default_value_t = 5)]
    pub k: usize,
    /// Truncation depth of the point-process samplers.
    #[arg(long, default_value_t = 1000)]
    pub points: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Component {
    Atom1,
    Atom2,
    /// Sum of the first two atoms.
    Total,
}

#[derive(Debug, Args)]
pub struct EquivArgs {
    #[arg(value_enum)]
    pub rep_a: Representation,
    #[arg(value_enum)]
    pub rep_b: Representation,
    #[command(flatten)]
    pub params: ParamArgs,
    /// Overrides of the parameters for the second representation.
    #[arg(long, allow_negative_numbers = true)]
    pub alpha_b: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub a1_b: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub c_b: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub theta_b: Option<f64>,
    #[arg(long, value_enum, default_value = "atom1")]
    pub component: Component,
    #[arg(long, default_value_t = 1000)]
    pub points: usize,
    #[command(flatten)]
    pub common: Common,
}

impl EquivArgs {
    pub fn params_b(&self) -> ParamSet {
        let p = self.params;
        ParamSet {
            alpha: self.alpha_b.or(p.alpha),
            a1: self.a1_b.or(p.a1),
            c: self.c_b.or(p.c),
            theta: self.theta_b.or(p.theta),
        }
    }
}

#[derive(Debug, Args)]
pub struct LawArgs {
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1000)]
    pub points: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Length of the generated parameter sequences.
    #[arg(short = 'k', default_value_t = 10_000)]
    pub k: usize,
    /// CSV with columns `a,b` instead of RAM parameters.
    #[arg(long, conflicts_with_all = ["alpha", "a1", "c", "theta"])]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SuiteArgs {
    #[command(flatten)]
    pub common: Common,
}
