use super::{require_k, PdParams, RamParams};
use crate::error::{invalid, require_positive, Result};
use crate::partition::{compensated_sum, Closure, MassPartition, Order};
use crate::randkit::{gamma_unit, gamma_fn, sample_exp1, RngStream};

/// Shape of the gamma variable closing a perpetuity after `k` stored terms.
///
/// With `Pi_n = U_1 ... U_{n-1}`, the unrealised tail `sum_{j>k} G_j Pi_j`
/// equals `Pi_k W_k` where `W_k = sum_{j>k} G_j U_k ... U_{j-1}` is
/// gamma(a_k) and independent of the stored terms. The shape index is `k`
/// itself: for `k = 1` the first atom is `G_1 / (G_1 + W_1) ~ beta(c, a_1)`.
pub fn closure_shape(params: &RamParams, k: usize) -> f64 {
    params.a(k)
}

/// Terms `G_n Pi_n`, n = 1..k, in units where `Pi_1 = 1`, plus the tail.
#[derive(Debug, Clone, PartialEq)]
pub struct Perpetuity {
    pub terms: Vec<f64>,
    /// `Pi_k W` when closed exactly, zero when the tail was dropped.
    pub tail: f64,
    pub closure: Closure,
}

impl Perpetuity {
    /// Normalizing total: the stored terms plus the tail.
    pub fn denominator(&self) -> f64 {
        compensated_sum(self.terms.iter().copied().chain([self.tail]))
    }

    pub fn to_partition(&self) -> MassPartition {
        let d = self.denominator();
        let atoms = self.terms.iter().map(|t| t / d).collect();
        MassPartition::from_parts(atoms, self.tail / d, Order::SizeBiased, self.closure)
    }
}

/// Assembles `G_n exp(ln_pi[n])` and the optional closure `exp(ln_pi[k]) W`.
fn assemble(gs: &[f64], ln_pi: &[f64], closure_w: Option<f64>) -> Perpetuity {
    let terms = gs.iter().zip(ln_pi).map(|(g, lp)| g * lp.exp()).collect();
    match closure_w {
        Some(w) => Perpetuity {
            terms,
            tail: w * ln_pi[ln_pi.len() - 1].exp(),
            closure: Closure::Exact,
        },
        None => Perpetuity {
            terms,
            tail: 0.0,
            closure: Closure::Truncated,
        },
    }
}

/// Draws `G_n ~ gamma(c)` and `U_n ~ beta(a_n, c + alpha)` and returns the
/// first `n_terms` perpetuity terms. With `tail_closure` the tail is drawn
/// exactly; without it the tail is dropped and normalizing the prefix
/// carries truncation bias.
pub fn draw_ram_perpetuity(
    params: RamParams,
    n_terms: usize,
    stream: &mut RngStream,
    tail_closure: bool,
) -> Result<Perpetuity> {
    require_k(n_terms)?;
    let b = params.b();
    let mut gs = Vec::with_capacity(n_terms);
    let mut ln_pi = Vec::with_capacity(n_terms);
    let mut lp = 0.0f64;
    for n in 1..=n_terms {
        gs.push(gamma_unit(stream, params.c()));
        ln_pi.push(lp);
        if n < n_terms {
            let ga = gamma_unit(stream, params.a(n));
            let gb = gamma_unit(stream, b);
            lp += ga.ln() - (ga + gb).ln();
        }
    }
    let w = tail_closure.then(|| gamma_unit(stream, closure_shape(&params, n_terms)));
    Ok(assemble(&gs, &ln_pi, w))
}

/// Normalized perpetuity representation of `RAM(alpha, a1, c)`; see
/// [`draw_ram_perpetuity`].
pub fn sample_ram_perpetuity(
    params: RamParams,
    n_terms: usize,
    stream: &mut RngStream,
    tail_closure: bool,
) -> Result<MassPartition> {
    Ok(draw_ram_perpetuity(params, n_terms, stream, tail_closure)?.to_partition())
}

/// `PD(alpha, theta)` with `alpha > 0` from gamma sums: `S_1 ~ gamma(theta/alpha + 1)`,
/// `S_n = S_{n-1} + E_n`, terms `G_n S_n^(-1/alpha)` with `G_n ~ gamma(1 - alpha)`.
///
/// The factors `U_n = (S_n / S_{n+1})^(1/alpha)` are independent
/// `beta(theta + n alpha, 1)`, so the tail is closed exactly like the
/// general perpetuity.
pub fn draw_pd_theta_biased(pd: PdParams, k: usize, stream: &mut RngStream) -> Result<Perpetuity> {
    require_k(k)?;
    let alpha = pd.alpha();
    if alpha <= 0.0 {
        return Err(invalid("alpha", alpha, "must be > 0; use the alpha = 0 sampler"));
    }
    let params = pd.to_ram();
    let inv_alpha = 1.0 / alpha;
    let mut s = gamma_unit(stream, pd.theta() * inv_alpha + 1.0);
    let ln_s1 = s.ln();
    let mut gs = Vec::with_capacity(k);
    let mut ln_pi = Vec::with_capacity(k);
    for n in 1..=k {
        if n > 1 {
            s += sample_exp1(stream);
        }
        gs.push(gamma_unit(stream, 1.0 - alpha));
        ln_pi.push((ln_s1 - s.ln()) * inv_alpha);
    }
    let w = gamma_unit(stream, closure_shape(&params, k));
    Ok(assemble(&gs, &ln_pi, Some(w)))
}

pub fn sample_pd_theta_biased(pd: PdParams, k: usize, stream: &mut RngStream) -> Result<MassPartition> {
    Ok(draw_pd_theta_biased(pd, k, stream)?.to_partition())
}

/// `PD(0, theta)` as the normalized series `G_n exp(-Gamma_n / theta)` with
/// `G_n ~ Exp(1)` and `Gamma_n` the partial sums of standard exponentials.
pub fn draw_pd0_exp_weights(theta: f64, k: usize, stream: &mut RngStream) -> Result<Perpetuity> {
    require_positive("theta", theta)?;
    require_k(k)?;
    let mut gs = Vec::with_capacity(k);
    let mut ln_pi = Vec::with_capacity(k);
    // Gamma_1 cancels in the normalization, so the products start at Gamma_2.
    let mut lp = 0.0f64;
    for n in 1..=k {
        if n > 1 {
            lp -= sample_exp1(stream) / theta;
        }
        gs.push(sample_exp1(stream));
        ln_pi.push(lp);
    }
    let w = gamma_unit(stream, theta);
    Ok(assemble(&gs, &ln_pi, Some(w)))
}

pub fn sample_pd0_exp_weights(theta: f64, k: usize, stream: &mut RngStream) -> Result<MassPartition> {
    Ok(draw_pd0_exp_weights(theta, k, stream)?.to_partition())
}

/// Density of the biased exponential time `D` behind the `RAM(0, a, c)`
/// representation: `(1 - exp(-x/a))^(c-1) exp(-x) / K` with
/// `K = a Gamma(a) Gamma(c) / Gamma(a + c)`.
pub fn biased_exp_density(a: f64, c: f64, x: f64) -> Result<f64> {
    require_positive("a", a)?;
    require_positive("c", c)?;
    if !(x.is_finite() && x > 0.0) {
        return Err(invalid("x", x, "must be finite and > 0"));
    }
    let k = a * gamma_fn(a) * gamma_fn(c) / gamma_fn(a + c);
    Ok((-(-x / a).exp_m1()).powf(c - 1.0) * (-x).exp() / k)
}

/// One draw of the biased exponential time, `D = -a ln B` with `B ~ beta(a, c)`.
pub fn sample_biased_exp_time(a: f64, c: f64, stream: &mut RngStream) -> Result<f64> {
    require_positive("a", a)?;
    require_positive("c", c)?;
    Ok(-a * ln_beta_draw(stream, a, c))
}

/// `ln B` for `B ~ beta(a, b)`, computed from the two gammas without forming `B`.
fn ln_beta_draw(stream: &mut RngStream, a: f64, b: f64) -> f64 {
    let ga = gamma_unit(stream, a);
    let gb = gamma_unit(stream, b);
    ga.ln() - (ga + gb).ln()
}

/// `RAM(0, a, c)` as the normalized series `G_n exp(-(D_1 + ... + D_n) / a)`
/// with `G_n ~ gamma(c)` and biased exponential times `D_i`.
pub fn draw_ram0_biased_exp(a: f64, c: f64, k: usize, stream: &mut RngStream) -> Result<Perpetuity> {
    require_positive("a", a)?;
    require_positive("c", c)?;
    require_k(k)?;
    let mut gs = Vec::with_capacity(k);
    let mut ln_pi = Vec::with_capacity(k);
    // exp(-D_1 / a) is common to every term and cancels.
    let mut lp = 0.0f64;
    for n in 1..=k {
        if n > 1 {
            lp += ln_beta_draw(stream, a, c);
        }
        gs.push(gamma_unit(stream, c));
        ln_pi.push(lp);
    }
    let w = gamma_unit(stream, a);
    Ok(assemble(&gs, &ln_pi, Some(w)))
}

pub fn sample_ram0_biased_exp(a: f64, c: f64, k: usize, stream: &mut RngStream) -> Result<MassPartition> {
    Ok(draw_ram0_biased_exp(a, c, k, stream)?.to_partition())
}

/// Interval lengths `exp(-Gamma_{n-1}/a) - exp(-Gamma_n/a)` cut from [0, 1]
/// by the points `exp(-Gamma_n / a)`; the residual is `exp(-Gamma_k / a)`.
pub fn sample_dickman_partition(a: f64, k: usize, stream: &mut RngStream) -> Result<MassPartition> {
    require_positive("a", a)?;
    require_k(k)?;
    let mut atoms = Vec::with_capacity(k);
    let mut rest = 1.0f64;
    for _ in 0..k {
        let d = sample_exp1(stream) / a;
        atoms.push(rest * -(-d).exp_m1());
        rest *= (-d).exp();
    }
    Ok(MassPartition::from_parts(atoms, rest, Order::Construction, Closure::Exact))
}
