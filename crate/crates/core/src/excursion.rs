//! Laws of the excursion straddling an exponential (or fixed) time for the
//! excursions of a Bessel process of dimension `2(1 - alpha)`, whose inverse
//! local time is an alpha-stable subordinator.

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::partition::{Closure, MassPartition, Order};
use crate::randkit::{beta_unchecked, gamma_fn, gamma_unit, reg_inc_gamma, sample_exp1, RngStream};
use crate::repr::{require_k, require_stable_alpha, sample_mvee, sample_ram_stick, RamParams, StickBreaker};

/// `(e, L, B, A, g, d, Delta)`: the exponential time, the local time at it,
/// the overshoot and age of the straddling excursion, its left and right
/// end points and its length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExcursionSeptuple {
    pub e: f64,
    /// Local time; only the constructive sampler produces it.
    pub l: Option<f64>,
    pub b: f64,
    pub a: f64,
    pub g: f64,
    pub d: f64,
    pub delta: f64,
}

/// The five length fields divided by the time they straddle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExcursionRatios {
    pub a: f64,
    pub b: f64,
    pub g: f64,
    pub d: f64,
    pub delta: f64,
}

impl ExcursionRatios {
    pub const FIELDS: [&'static str; 5] = ["a", "b", "g", "d", "delta"];

    pub fn as_array(&self) -> [f64; 5] {
        [self.a, self.b, self.g, self.d, self.delta]
    }
}

impl ExcursionSeptuple {
    pub fn normalized(&self) -> ExcursionRatios {
        ExcursionRatios {
            a: self.a / self.e,
            b: self.b / self.e,
            g: self.g / self.e,
            d: self.d / self.e,
            delta: self.delta / self.e,
        }
    }
}

/// Septuple from the thinned point process: `T ~ Exp(1)`, `G_1 ~ gamma(1-alpha)`,
/// `U` uniform, and `G_0` the sum of the first `n_points` points of `M_T`
/// plus their tail mean.
pub fn sample_septuple_constructive(alpha: f64, n_points: usize, stream: &mut RngStream) -> Result<ExcursionSeptuple> {
    require_stable_alpha(alpha)?;
    require_k(n_points)?;
    let local_time = sample_exp1(stream);
    let g1 = gamma_unit(stream, 1.0 - alpha);
    let stretch = (-stream.uniform().ln() / alpha).exp();
    let completed = sample_mvee(alpha, local_time, n_points, stream)?;
    let g0 = completed.size_sum() + completed.tail_mean();
    let delta = g1 * stretch;
    Ok(ExcursionSeptuple {
        e: g0 + g1,
        l: Some(local_time),
        b: g1 * (stretch - 1.0),
        a: g1,
        g: g0,
        d: g0 + delta,
        delta,
    })
}

/// Closed form of the normalized tuple with the partition of the completed
/// excursions: `Q ~ beta(alpha, 1-alpha)`, `U` uniform, `eta' ~ PD(alpha, alpha)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosedSextuple {
    pub ratios: ExcursionRatios,
    pub q: f64,
    /// Exact prefix of `eta'`; the completed excursions are `q * eta'`.
    pub eta_prime: MassPartition,
}

impl ClosedSextuple {
    /// Lengths of the completed excursions over `T`.
    pub fn completed_atoms(&self) -> Vec<f64> {
        self.eta_prime.atoms().iter().map(|x| self.q * x).collect()
    }

    /// Total length of completed excursions over `T`, tail included; equals `g / T`.
    pub fn completed_mass(&self) -> f64 {
        self.q * self.eta_prime.total_mass()
    }

    /// Unit-mass partition `{A/T, completed excursions}` with the
    /// straddling excursion's age first.
    pub fn partition(&self) -> MassPartition {
        let mut atoms = Vec::with_capacity(self.eta_prime.len() + 1);
        atoms.push(self.ratios.a);
        atoms.extend(self.completed_atoms());
        MassPartition::from_parts(
            atoms,
            self.q * self.eta_prime.residual(),
            Order::Construction,
            Closure::Exact,
        )
    }
}

pub fn sample_sextuple_closed(alpha: f64, k_atoms: usize, stream: &mut RngStream) -> Result<ClosedSextuple> {
    require_stable_alpha(alpha)?;
    require_k(k_atoms)?;
    let q = beta_unchecked(stream, alpha, 1.0 - alpha);
    let stretch = (-stream.uniform().ln() / alpha).exp();
    let eta_prime = sample_eta_prime(alpha, k_atoms, stream)?;
    let age = 1.0 - q;
    let ratios = ExcursionRatios {
        a: age,
        b: age * (stretch - 1.0),
        g: q,
        d: q + age * stretch,
        delta: age * stretch,
    };
    Ok(ClosedSextuple { ratios, q, eta_prime })
}

fn eta_prime_params(alpha: f64) -> RamParams {
    RamParams::new(alpha, 2.0 * alpha, 1.0 - alpha).expect("alpha was validated")
}

/// `PD(alpha, alpha)` prefix, i.e. `RAM(alpha, 2 alpha, 1 - alpha)` by stick-breaking.
pub fn sample_eta_prime(alpha: f64, k: usize, stream: &mut RngStream) -> Result<MassPartition> {
    require_stable_alpha(alpha)?;
    sample_ram_stick(eta_prime_params(alpha), k, stream)
}

/// Signed-mass functional `(1-Q) e_1 + Q sum_i eta'_i e_{i+1}` with fair
/// 0/1 signs `e_i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OccupationSample {
    pub value: f64,
    /// Unsigned mass left out of the sum; bounds the truncation error.
    pub residual: f64,
    pub atoms_used: usize,
}

/// Residual target of [`sample_occupation_fraction_adaptive`].
pub const OCCUPATION_RESIDUAL: f64 = 1e-4;

/// Relative residual target of [`sample_occupation_fraction_adaptive`]. The
/// law's density times the distance to the nearer end stays below `1/pi`
/// at `alpha = 1/2`, so the induced CDF error is under `4e-4`.
pub const OCCUPATION_RELATIVE: f64 = 1e-3;

struct SignSource {
    bits: u64,
    left: u32,
}

impl SignSource {
    fn new() -> Self {
        Self { bits: 0, left: 0 }
    }

    fn next(&mut self, stream: &mut RngStream) -> bool {
        if self.left == 0 {
            self.bits = stream.next_u64();
            self.left = 64;
        }
        let bit = self.bits & 1 == 1;
        self.bits >>= 1;
        self.left -= 1;
        bit
    }
}

/// Occupation fraction with `k` atoms of `eta'`.
pub fn sample_occupation_fraction(alpha: f64, k: usize, stream: &mut RngStream) -> Result<OccupationSample> {
    require_stable_alpha(alpha)?;
    require_k(k)?;
    Ok(occupation(alpha, stream, |p| p.drawn < k))
}

/// Occupation fraction with `eta'` grown until the unsigned residual
/// `Q * (eta' residual)` is below `tol` and below [`OCCUPATION_RELATIVE`]
/// times the distance of the partial sum from 0 and from 1.
pub fn sample_occupation_fraction_adaptive(alpha: f64, tol: f64, stream: &mut RngStream) -> Result<OccupationSample> {
    sample_occupation_fraction_within(alpha, tol, OCCUPATION_RELATIVE, stream)
}

/// Adaptive occupation fraction with explicit absolute and relative bounds
/// on the unsigned residual.
///
/// The relative bound matters because the law has integrable density
/// singularities at both ends: an absolute cut alone piles mass exactly on
/// 0 and 1 whenever `Q` is small.
pub fn sample_occupation_fraction_within(
    alpha: f64,
    tol: f64,
    rel_tol: f64,
    stream: &mut RngStream,
) -> Result<OccupationSample> {
    require_stable_alpha(alpha)?;
    if !(tol > 0.0 && tol < 1.0) {
        return Err(invalid("tol", tol, "must lie in (0, 1)"));
    }
    if !(rel_tol > 0.0 && rel_tol < 1.0) {
        return Err(invalid("rel_tol", rel_tol, "must lie in (0, 1)"));
    }
    Ok(occupation(alpha, stream, |p| {
        let unsigned = p.q * p.rest;
        // Distances of the bracket [value, value + unsigned] from 0 and 1.
        let (lo, hi) = if p.first {
            ((1.0 - p.q) + p.q * p.positive, p.q * p.negative)
        } else {
            (p.q * p.positive, (1.0 - p.q) + p.q * p.negative)
        };
        !(unsigned < tol && unsigned <= rel_tol * lo.min(hi))
    }))
}

struct Progress {
    q: f64,
    first: bool,
    rest: f64,
    positive: f64,
    negative: f64,
    drawn: usize,
}

fn occupation(alpha: f64, stream: &mut RngStream, mut more: impl FnMut(&Progress) -> bool) -> OccupationSample {
    let q = beta_unchecked(stream, alpha, 1.0 - alpha);
    let mut signs = SignSource::new();
    let first = signs.next(stream);
    let mut stick = StickBreaker::new(eta_prime_params(alpha), stream);
    let mut p = Progress { q, first, rest: 1.0, positive: 0.0, negative: 0.0, drawn: 0 };
    while more(&p) {
        let atom = stick.next_atom();
        if signs.next(stick.stream_mut()) {
            p.positive += atom;
        } else {
            p.negative += atom;
        }
        p.rest = stick.residual();
        p.drawn = stick.drawn();
    }
    let value = if first { 1.0 - q } else { 0.0 } + q * p.positive;
    OccupationSample {
        value: value.clamp(0.0, 1.0),
        residual: q * p.rest,
        atoms_used: p.drawn,
    }
}

/// BFRY density `alpha / Gamma(1-alpha) x^(-1-alpha) (1 - exp(-x))`.
pub fn bfry_density(alpha: f64, x: f64) -> Result<f64> {
    require_stable_alpha(alpha)?;
    if !(x.is_finite() && x > 0.0) {
        return Err(invalid("x", x, "must be finite and > 0"));
    }
    let scale = alpha / gamma_fn(1.0 - alpha);
    Ok(scale * (-(1.0 + alpha) * x.ln()).exp() * -(-x).exp_m1())
}

/// BFRY distribution function.
///
/// Integrating the density by parts gives the survival function
/// `x^(-alpha) (1 - exp(-x)) / Gamma(1-alpha) + Q(1-alpha, x)`, with `Q` the
/// upper regularized incomplete gamma; the CDF is computed as
/// `P(1-alpha, x) - x^(-alpha) (1 - exp(-x)) / Gamma(1-alpha)`.
pub fn bfry_cdf(alpha: f64, x: f64) -> Result<f64> {
    require_stable_alpha(alpha)?;
    if x.is_nan() || x < 0.0 {
        return Err(invalid("x", x, "must be >= 0"));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x.is_infinite() {
        return Ok(1.0);
    }
    let boundary = (-alpha * x.ln()).exp() * -(-x).exp_m1() / gamma_fn(1.0 - alpha);
    Ok((reg_inc_gamma(1.0 - alpha, x)? - boundary).clamp(0.0, 1.0))
}

/// One BFRY draw as `G U^(-1/alpha)` with `G ~ gamma(1-alpha)`.
pub fn sample_bfry(alpha: f64, stream: &mut RngStream) -> Result<f64> {
    require_stable_alpha(alpha)?;
    let g = gamma_unit(stream, 1.0 - alpha);
    Ok(g * (-stream.uniform().ln() / alpha).exp())
}
