use std::fmt;
use std::str::FromStr;

use masspart::excursion::sample_eta_prime;
use masspart::partition::size_biased_prefix;
use masspart::repr::*;
use masspart::{MassPartition, PdParams, RamParams, RngStream};
use serde::Serialize;

use crate::CliError;

/// Every sampler the CLI can drive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, clap::ValueEnum)]
pub enum Representation {
    RamStick,
    RamPerpetuity,
    PdStable,
    PdThetaBiased,
    Pd0Exp,
    Ram0BiasedExp,
    Dickman,
    PdMixed,
    XiThinned,
    EtaPrime,
}

impl Representation {
    pub const ALL: [Representation; 10] = [
        Representation::RamStick,
        Representation::RamPerpetuity,
        Representation::PdStable,
        Representation::PdThetaBiased,
        Representation::Pd0Exp,
        Representation::Ram0BiasedExp,
        Representation::Dickman,
        Representation::PdMixed,
        Representation::XiThinned,
        Representation::EtaPrime,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Representation::RamStick => "ram-stick",
            Representation::RamPerpetuity => "ram-perpetuity",
            Representation::PdStable => "pd-stable",
            Representation::PdThetaBiased => "pd-theta-biased",
            Representation::Pd0Exp => "pd0-exp",
            Representation::Ram0BiasedExp => "ram0-biased-exp",
            Representation::Dickman => "dickman",
            Representation::PdMixed => "pd-mixed",
            Representation::XiThinned => "xi-thinned",
            Representation::EtaPrime => "eta-prime",
        }
    }
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Representation {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Representation::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| CliError::Usage(format!("unknown representation `{s}`")))
    }
}

/// Raw numeric flags; which ones a representation needs is decided in [`resolve`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct ParamSet {
    pub alpha: Option<f64>,
    pub a1: Option<f64>,
    pub c: Option<f64>,
    pub theta: Option<f64>,
}

/// A representation with validated parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "representation", rename_all = "kebab-case")]
pub enum Sampler {
    RamStick { params: RamParams },
    RamPerpetuity { params: RamParams },
    PdStable { alpha: f64 },
    PdThetaBiased { params: PdParams },
    Pd0Exp { theta: f64 },
    Ram0BiasedExp { a: f64, c: f64 },
    Dickman { a: f64 },
    PdMixed { params: PdParams },
    XiThinned { alpha: f64 },
    EtaPrime { alpha: f64 },
}

fn need(value: Option<f64>, flag: &str, rep: Representation) -> Result<f64, CliError> {
    value.ok_or_else(|| CliError::Usage(format!("{rep} needs --{flag}")))
}

fn stable_alpha(value: Option<f64>, rep: Representation) -> Result<f64, CliError> {
    let alpha = need(value, "alpha", rep)?;
    if alpha > 0.0 && alpha < 1.0 {
        Ok(alpha)
    } else {
        Err(CliError::Usage(format!(
            "{rep} needs 0 < alpha < 1 (got alpha = {alpha})"
        )))
    }
}

fn no_alpha(p: &ParamSet, rep: Representation) -> Result<(), CliError> {
    match p.alpha {
        Some(a) if a != 0.0 => Err(CliError::Usage(format!("{rep} is an alpha = 0 law; drop --alpha"))),
        _ => Ok(()),
    }
}

fn ram_params(p: &ParamSet, rep: Representation) -> Result<RamParams, CliError> {
    let alpha = p.alpha.unwrap_or(0.0);
    if p.a1.is_some() || p.c.is_some() {
        Ok(RamParams::new(alpha, need(p.a1, "a1", rep)?, need(p.c, "c", rep)?)?)
    } else {
        Ok(PdParams::new(alpha, p.theta.unwrap_or(0.0))?.to_ram())
    }
}

/// Chooses and validates parameters for `rep`.
///
/// RAM samplers take `--alpha --a1 --c`, or `--alpha --theta` for the
/// Poisson-Dirichlet case (missing values default to 0). The Dickman and
/// biased-exponential samplers read their scale from `--theta` or `--a1`.
pub fn resolve(rep: Representation, p: &ParamSet) -> Result<Sampler, CliError> {
    use Representation as R;
    Ok(match rep {
        R::RamStick => Sampler::RamStick { params: ram_params(p, rep)? },
        R::RamPerpetuity => Sampler::RamPerpetuity { params: ram_params(p, rep)? },
        R::PdStable => Sampler::PdStable { alpha: stable_alpha(p.alpha, rep)? },
        R::PdThetaBiased => {
            let alpha = stable_alpha(p.alpha, rep)?;
            Sampler::PdThetaBiased { params: PdParams::new(alpha, p.theta.unwrap_or(0.0))? }
        }
        R::Pd0Exp => {
            no_alpha(p, rep)?;
            Sampler::Pd0Exp { theta: positive(need(p.theta, "theta", rep)?, "theta")? }
        }
        R::Ram0BiasedExp => {
            no_alpha(p, rep)?;
            let a = positive(need(p.a1.or(p.theta), "a1", rep)?, "a1")?;
            Sampler::Ram0BiasedExp { a, c: positive(p.c.unwrap_or(1.0), "c")? }
        }
        R::Dickman => {
            no_alpha(p, rep)?;
            Sampler::Dickman { a: positive(need(p.theta.or(p.a1), "theta", rep)?, "theta")? }
        }
        R::PdMixed => {
            let alpha = stable_alpha(p.alpha, rep)?;
            let theta = need(p.theta, "theta", rep)?;
            if theta <= 0.0 {
                return Err(CliError::Usage(format!("{rep} needs theta > 0 (got {theta})")));
            }
            Sampler::PdMixed { params: PdParams::new(alpha, theta)? }
        }
        R::XiThinned => Sampler::XiThinned { alpha: stable_alpha(p.alpha, rep)? },
        R::EtaPrime => Sampler::EtaPrime { alpha: stable_alpha(p.alpha, rep)? },
    })
}

fn positive(v: f64, name: &str) -> Result<f64, CliError> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(CliError::Usage(format!("--{name} must be positive (got {v})")))
    }
}

impl Sampler {
    /// Whether the first `k` atoms have the exact target law.
    pub fn is_exact(&self) -> bool {
        !matches!(
            self,
            Sampler::PdStable { .. } | Sampler::PdMixed { .. } | Sampler::XiThinned { .. }
        )
    }

    /// Whether stored atoms follow the size-biased law in storage order.
    /// Dickman intervals are in construction order but share that law.
    pub fn size_biased_in_order(&self) -> bool {
        self.is_exact()
    }

    /// Draws a partition with at least `k` stored atoms. `points` is the
    /// truncation depth of the point-process samplers.
    pub fn draw(&self, k: usize, points: usize, stream: &mut RngStream) -> Result<MassPartition, CliError> {
        let depth = points.max(k).max(2);
        Ok(match *self {
            Sampler::RamStick { params } => sample_ram_stick(params, k, stream)?,
            Sampler::RamPerpetuity { params } => sample_ram_perpetuity(params, k, stream, true)?,
            Sampler::PdStable { alpha } => sample_pd_stable_points(alpha, depth, stream)?,
            Sampler::PdThetaBiased { params } => sample_pd_theta_biased(params, k, stream)?,
            Sampler::Pd0Exp { theta } => sample_pd0_exp_weights(theta, k, stream)?,
            Sampler::Ram0BiasedExp { a, c } => sample_ram0_biased_exp(a, c, k, stream)?,
            Sampler::Dickman { a } => sample_dickman_partition(a, k, stream)?,
            Sampler::PdMixed { params } => sample_pd_theta_mixed_poisson(params, depth, stream)?,
            Sampler::XiThinned { alpha } => sample_xi_thinned(alpha, depth, stream)?.partition,
            Sampler::EtaPrime { alpha } => sample_eta_prime(alpha, k, stream)?,
        })
    }

    /// The first `m` atoms in size-biased law. Samplers stored in another
    /// order are size-biased by successive picks; a pick landing in the
    /// estimated residual is reported as 0.
    pub fn size_biased_atoms(&self, m: usize, points: usize, stream: &mut RngStream) -> Result<Vec<f64>, CliError> {
        let p = self.draw(m, points, stream)?;
        let picked = if self.size_biased_in_order() {
            p
        } else {
            size_biased_prefix(&p, m, stream)
        };
        Ok((0..m).map(|i| picked.atom(i).unwrap_or(0.0)).collect())
    }
}
