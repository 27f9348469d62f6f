use rand_distr::{Distribution, Exp1, StandardNormal};

use super::RngStream;
use crate::error::{require_positive, Result};

/// Standard exponential draw (ziggurat).
#[inline]
pub fn sample_exp1(stream: &mut RngStream) -> f64 {
    Exp1.sample(stream)
}

/// Standard normal draw (ziggurat).
#[inline]
pub fn sample_normal(stream: &mut RngStream) -> f64 {
    StandardNormal.sample(stream)
}

/// Draws from gamma(shape, rate), i.e. density proportional to
/// `x^(shape-1) exp(-rate x)`.
pub fn sample_gamma(stream: &mut RngStream, shape: f64, rate: f64) -> Result<f64> {
    require_positive("shape", shape)?;
    require_positive("rate", rate)?;
    Ok(gamma_unit(stream, shape) / rate)
}

/// Draws from beta(a, b) as `G_a / (G_a + G_b)` with independent unit-rate gammas.
pub fn sample_beta(stream: &mut RngStream, a: f64, b: f64) -> Result<f64> {
    require_positive("a", a)?;
    require_positive("b", b)?;
    Ok(beta_unchecked(stream, a, b))
}

/// gamma(shape, 1) without parameter validation; `shape` must be positive.
///
/// Marsaglia-Tsang squeeze for `shape >= 1`. Smaller shapes use the boost
/// `gamma(shape) = gamma(shape + 1) * U^(1/shape)`, evaluated in log space,
/// and `shape == 0.5` uses `Z^2 / 2`. Never returns exactly zero.
#[inline]
pub(crate) fn gamma_unit(stream: &mut RngStream, shape: f64) -> f64 {
    debug_assert!(shape > 0.0);
    if shape == 1.0 {
        return sample_exp1(stream);
    }
    if shape == 0.5 {
        loop {
            let z = sample_normal(stream);
            let g = 0.5 * z * z;
            if g > 0.0 {
                return g;
            }
        }
    }
    if shape < 1.0 {
        // Conditioning on a representable result only matters when
        // U^(1/shape) underflows, which needs shape below ~1e-3.
        loop {
            let boosted = marsaglia_tsang(stream, shape + 1.0);
            let g = (boosted.ln() + stream.uniform().ln() / shape).exp();
            if g > 0.0 {
                return g;
            }
        }
    }
    marsaglia_tsang(stream, shape)
}

#[inline]
fn marsaglia_tsang(stream: &mut RngStream, shape: f64) -> f64 {
    let d = shape - 1.0 / 3.0;
    let c = 1.0 / (9.0 * d).sqrt();
    loop {
        let x = sample_normal(stream);
        let v = 1.0 + c * x;
        if v <= 0.0 {
            continue;
        }
        let v = v * v * v;
        let u = stream.uniform();
        let x2 = x * x;
        if u < 1.0 - 0.0331 * x2 * x2 {
            return d * v;
        }
        if u.ln() < 0.5 * x2 + d * (1.0 - v + v.ln()) {
            return d * v;
        }
    }
}

#[inline]
pub(crate) fn beta_unchecked(stream: &mut RngStream, a: f64, b: f64) -> f64 {
    let ga = gamma_unit(stream, a);
    let gb = gamma_unit(stream, b);
    ga / (ga + gb)
}
