//! Goodness-of-fit machinery: Kolmogorov-Smirnov tests, moment and
//! correlation z-checks, and summability diagnostics for stick-breaking
//! parameter sequences.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::compensated_sum;
use crate::randkit::kolmogorov_sf;
use crate::repr::RamParams;

/// Default gate for samplers whose output has the exact target law.
pub const EXACT_SIGNIFICANCE: f64 = 1e-3;
/// Default gate for samplers that carry an estimated tail.
pub const APPROX_SIGNIFICANCE: f64 = 1e-2;
/// Smallest sample size for which the asymptotic Kolmogorov law is used.
pub const KS_MIN_SAMPLES: usize = 50;
/// Smallest sample size for moment and correlation checks.
pub const MOMENT_MIN_SAMPLES: usize = 100;
/// Largest |z| accepted by moment and correlation checks.
pub const Z_LIMIT: f64 = 5.0;
/// Asymptotic standard deviation of `sqrt(n) * D` under the null.
pub const KS_STATISTIC_SD: f64 = 0.260_332_4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KsReport {
    pub statistic: f64,
    pub n1: usize,
    pub n2: Option<usize>,
    pub p_value: f64,
    pub significance: f64,
    pub passed: bool,
    pub seed_record: Option<String>,
}

impl KsReport {
    fn new(statistic: f64, n1: usize, n2: Option<usize>, p_value: f64) -> Self {
        Self {
            statistic,
            n1,
            n2,
            p_value,
            significance: EXACT_SIGNIFICANCE,
            passed: p_value >= EXACT_SIGNIFICANCE,
            seed_record: None,
        }
    }

    /// Re-evaluates the decision at another significance level.
    pub fn gate(mut self, significance: f64) -> Self {
        self.significance = significance;
        self.passed = self.p_value >= significance;
        self
    }

    pub fn with_seed_record(mut self, record: impl Into<String>) -> Self {
        self.seed_record = Some(record.into());
        self
    }

    /// Effective sample size entering the asymptotic p-value.
    pub fn effective_n(&self) -> f64 {
        match self.n2 {
            None => self.n1 as f64,
            Some(n2) => {
                let (a, b) = (self.n1 as f64, n2 as f64);
                a * b / (a + b)
            }
        }
    }

    /// Null standard deviation of the statistic, used to compare statistics
    /// across runs.
    pub fn statistic_se(&self) -> f64 {
        KS_STATISTIC_SD / self.effective_n().sqrt()
    }
}

fn check_finite(xs: &[f64]) -> Result<()> {
    match xs.iter().position(|x| !x.is_finite()) {
        Some(i) => Err(Error::NonFiniteInput(i)),
        None => Ok(()),
    }
}

fn sorted(xs: &[f64]) -> Vec<f64> {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

/// One-sample KS test of `samples` against a continuous `cdf`.
///
/// The CDF is evaluated at each sorted sample; values outside [0, 1] or a
/// decrease along the sorted grid are reported as a non-monotone CDF.
pub fn ks_one_sample(samples: &[f64], cdf: impl Fn(f64) -> f64) -> Result<KsReport> {
    let n = samples.len();
    if n < KS_MIN_SAMPLES {
        return Err(Error::TooFewSamples { got: n, need: KS_MIN_SAMPLES });
    }
    check_finite(samples)?;
    let xs = sorted(samples);
    let nf = n as f64;
    let mut d = 0.0f64;
    let mut prev = 0.0f64;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x);
        if !(0.0..=1.0).contains(&f) || f < prev {
            return Err(Error::NonMonotoneCdf(x));
        }
        prev = f;
        let above = (i + 1) as f64 / nf - f;
        let below = f - i as f64 / nf;
        d = d.max(above).max(below);
    }
    let p = kolmogorov_sf(nf.sqrt() * d);
    Ok(KsReport::new(d, n, None, p))
}

/// Two-sample KS test with effective size `n1 n2 / (n1 + n2)`.
///
/// The statistic is computed from integer ECDF counts, so swapping the
/// inputs gives a bitwise identical report. Ties follow the
/// right-continuous ECDF: all copies of a value are absorbed before the
/// gap is measured.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<KsReport> {
    let (n1, n2) = (a.len(), b.len());
    for n in [n1, n2] {
        if n < KS_MIN_SAMPLES {
            return Err(Error::TooFewSamples { got: n, need: KS_MIN_SAMPLES });
        }
    }
    check_finite(a)?;
    check_finite(b)?;
    let (xs, ys) = (sorted(a), sorted(b));
    let (mut i, mut j) = (0usize, 0usize);
    let mut best: u128 = 0;
    while i < n1 && j < n2 {
        let v = if xs[i] <= ys[j] { xs[i] } else { ys[j] };
        while i < n1 && xs[i] == v {
            i += 1;
        }
        while j < n2 && ys[j] == v {
            j += 1;
        }
        let lhs = i as u128 * n2 as u128;
        let rhs = j as u128 * n1 as u128;
        best = best.max(lhs.abs_diff(rhs));
    }
    let (f1, f2) = (n1 as f64, n2 as f64);
    let d = best as f64 / (f1 * f2);
    let p = kolmogorov_sf((f1 * f2 / (f1 + f2)).sqrt() * d);
    Ok(KsReport::new(d, n1, Some(n2), p))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub mean: f64,
    pub expected_mean: f64,
    pub expected_sd: f64,
    pub n: usize,
    pub z: f64,
    pub passed: bool,
}

/// z-score of the sample mean against a known mean and standard deviation.
pub fn moment_check(samples: &[f64], expected_mean: f64, expected_sd: f64) -> Result<MomentReport> {
    let n = samples.len();
    if n < MOMENT_MIN_SAMPLES {
        return Err(Error::TooFewSamples { got: n, need: MOMENT_MIN_SAMPLES });
    }
    if !(expected_sd.is_finite() && expected_sd > 0.0) {
        return Err(crate::error::invalid("expected_sd", expected_sd, "must be positive"));
    }
    check_finite(samples)?;
    let mean = compensated_sum(samples.iter().copied()) / n as f64;
    let z = (mean - expected_mean) / (expected_sd / (n as f64).sqrt());
    Ok(MomentReport {
        mean,
        expected_mean,
        expected_sd,
        n,
        z,
        passed: z.abs() <= Z_LIMIT,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationReport {
    pub correlation: f64,
    pub n: usize,
    /// `correlation * sqrt(n)`: approximately standard normal under independence.
    pub z: f64,
    pub passed: bool,
}

/// Pearson correlation with a z-check against zero.
pub fn correlation_check(x: &[f64], y: &[f64]) -> Result<CorrelationReport> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    let n = x.len();
    if n < MOMENT_MIN_SAMPLES {
        return Err(Error::TooFewSamples { got: n, need: MOMENT_MIN_SAMPLES });
    }
    check_finite(x)?;
    check_finite(y)?;
    let nf = n as f64;
    let mx = compensated_sum(x.iter().copied()) / nf;
    let my = compensated_sum(y.iter().copied()) / nf;
    let sxy = compensated_sum(x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)));
    let sxx = compensated_sum(x.iter().map(|a| (a - mx) * (a - mx)));
    let syy = compensated_sum(y.iter().map(|b| (b - my) * (b - my)));
    if sxx <= 0.0 || syy <= 0.0 {
        return Err(Error::InvalidPartition("correlation of a constant sample".into()));
    }
    let r = sxy / (sxx * syy).sqrt();
    let z = r * nf.sqrt();
    Ok(CorrelationReport {
        correlation: r,
        n,
        z,
        passed: z.abs() <= Z_LIMIT,
    })
}

/// Least-squares line fit of `y` on `x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual of the fit.
    pub rms_residual: f64,
}

fn fit_line(x: &[f64], y: &[f64]) -> LineFit {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let ss: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - intercept - slope * a).powi(2))
        .sum();
    LineFit {
        slope,
        intercept,
        rms_residual: (ss / n).sqrt(),
    }
}

/// Finite-range diagnostics for the summability conditions a stick-breaking
/// scheme with `U_j ~ beta(a_j, b_j)` needs.
///
/// Condition (i), `a_j + b_j - a_{j+1} > 0`, is checked exactly. The other
/// two conditions are limits, so only partial sums and a fitted trend are
/// reported.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Assumption1Report {
    pub n_checked: usize,
    pub cond_i_ok: bool,
    /// First 1-based index where condition (i) fails.
    pub first_violation: Option<usize>,
    /// `sum_{j < n} pi_{j+1} (a_j + b_j - a_{j+1})` over the checked range.
    pub partial_sum_ii: f64,
    /// `(j, partial sum up to j)` at j = 10, 100, ... and the last index.
    pub partial_sum_ii_snapshots: Vec<(usize, f64)>,
    /// `(j, pi_j a_j)` at the same checkpoints.
    pub pi_a_iii: Vec<(usize, f64)>,
    /// Slope of `ln(pi_j a_j)` against `ln(j - 1)` over the upper range.
    pub trend_exponent: f64,
    pub trend_residual: f64,
    /// Slope of `ln(pi_j a_j)` against `j` over the same range.
    pub log_linear_rate: f64,
    pub log_linear_residual: f64,
    /// Set when the log-linear fit is tighter than the power-law fit,
    /// i.e. the decay looks geometric rather than polynomial.
    pub geometric_decay: bool,
    /// First index of the fitted range.
    pub fit_from: usize,
}

/// Lower end of the trend-fit range for `n` terms.
fn fit_start(n: usize) -> usize {
    (n / 10).max(2)
}

pub fn check_assumption1(a_seq: &[f64], b_seq: &[f64]) -> Result<Assumption1Report> {
    if a_seq.len() != b_seq.len() {
        return Err(Error::LengthMismatch(a_seq.len(), b_seq.len()));
    }
    let n = a_seq.len();
    if n < 10 {
        return Err(Error::TooFewSamples { got: n, need: 10 });
    }
    for (i, &v) in a_seq.iter().chain(b_seq).enumerate() {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::NonPositiveEntry(i % n));
        }
    }

    // ln pi_j for j = 1..=n, stored 0-based.
    let mut ln_pi = Vec::with_capacity(n);
    ln_pi.push(0.0);
    for j in 1..n {
        let (a, b) = (a_seq[j - 1], b_seq[j - 1]);
        ln_pi.push(ln_pi[j - 1] + (a / (a + b)).ln());
    }

    let checkpoint = |j: usize| j == n || (j >= 10 && is_power_of_ten(j));
    let mut first_violation = None;
    let mut partial = 0.0f64;
    let mut comp = 0.0f64;
    let mut partial_snaps = Vec::new();
    for j in 1..n {
        let gap = a_seq[j - 1] + b_seq[j - 1] - a_seq[j];
        if gap <= 0.0 && first_violation.is_none() {
            first_violation = Some(j);
        }
        let term = ln_pi[j].exp() * gap;
        let t = partial + term;
        comp += if partial.abs() >= term.abs() {
            (partial - t) + term
        } else {
            (term - t) + partial
        };
        partial = t;
        if checkpoint(j) || j == n - 1 {
            partial_snaps.push((j, partial + comp));
        }
    }
    let pi_a: Vec<(usize, f64)> = (1..=n)
        .filter(|&j| checkpoint(j))
        .map(|j| (j, (ln_pi[j - 1] + a_seq[j - 1].ln()).exp()))
        .collect();

    let from = fit_start(n);
    let js: Vec<usize> = (from..=n).collect();
    let y: Vec<f64> = js.iter().map(|&j| ln_pi[j - 1] + a_seq[j - 1].ln()).collect();
    let x_log: Vec<f64> = js.iter().map(|&j| ((j - 1) as f64).ln()).collect();
    let x_lin: Vec<f64> = js.iter().map(|&j| j as f64).collect();
    let power = fit_line(&x_log, &y);
    let linear = fit_line(&x_lin, &y);

    Ok(Assumption1Report {
        n_checked: n,
        cond_i_ok: first_violation.is_none(),
        first_violation,
        partial_sum_ii: partial + comp,
        partial_sum_ii_snapshots: partial_snaps,
        pi_a_iii: pi_a,
        trend_exponent: power.slope,
        trend_residual: power.rms_residual,
        log_linear_rate: linear.slope,
        log_linear_residual: linear.rms_residual,
        geometric_decay: linear.rms_residual < power.rms_residual,
        fit_from: from,
    })
}

fn is_power_of_ten(mut j: usize) -> bool {
    while j >= 10 && j.is_multiple_of(10) {
        j /= 10;
    }
    j == 1
}

/// The sequences `a_j = a1 + (j-1) alpha` and `b_j = alpha + c` of a RAM
/// model, `n` terms each.
pub fn ram_sequences(params: &RamParams, n: usize) -> (Vec<f64>, Vec<f64>) {
    let a = (1..=n).map(|j| params.a(j)).collect();
    let b = vec![params.b(); n];
    (a, b)
}

/// Asymptotic log-log slope of `pi_j a_j` for a RAM model with alpha > 0:
/// `pi_j` decays like `(j-1)^(-(alpha+c)/alpha)` and `a_j` grows linearly.
pub fn ram_theoretical_slope(params: &RamParams) -> Option<f64> {
    (params.alpha() > 0.0).then(|| 1.0 - (params.alpha() + params.c()) / params.alpha())
}
