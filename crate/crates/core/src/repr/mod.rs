//! Constructive representations of `RAM(alpha, a1, c)` and `PD(alpha, theta)`
//! mass-partitions.
//!
//! Samplers fall in three families:
//!
//! * stick-breaking ([`sample_ram_stick`], [`StickBreaker`]);
//! * normalized perpetuities `sum_n G_n Pi_n` with an exact gamma closure
//!   of the unrealised tail ([`sample_ram_perpetuity`] and the PD variants);
//! * normalized Poisson point processes ([`sample_pd_stable_points`],
//!   [`sample_mvee`] and what is built on it), which carry an estimated tail.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, require_positive, Result};

mod perpetuity;
mod poisson;
mod stick;

pub use perpetuity::{
    closure_shape, draw_pd0_exp_weights, draw_pd_theta_biased, draw_ram0_biased_exp,
    draw_ram_perpetuity, sample_biased_exp_time, sample_dickman_partition,
    sample_pd0_exp_weights, sample_pd_theta_biased, sample_ram0_biased_exp,
    sample_ram_perpetuity, biased_exp_density, Perpetuity,
};
pub use poisson::{
    mvee_tail_mean, nu_vee_tail, sample_mvee, sample_pd0_limit_of_mvee,
    sample_pd_stable_points, sample_pd_theta_mixed_poisson, sample_xi_thinned,
    stable_tail_estimate, XiSample, LIMIT_MAX_ALPHA,
};
pub use stick::{sample_ram_stick, StickBreaker};

/// Parameters of the residual allocation model `RAM(alpha, a1, c)`: the
/// stick fractions are independent `beta(c, a_n)` with `a_n = a1 + (n-1) alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RamParams {
    alpha: f64,
    a1: f64,
    c: f64,
}

impl RamParams {
    pub fn new(alpha: f64, a1: f64, c: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha >= 0.0) {
            return Err(invalid("alpha", alpha, "must be finite and >= 0"));
        }
        require_positive("a1", a1)?;
        require_positive("c", c)?;
        Ok(Self { alpha, a1, c })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn a1(&self) -> f64 {
        self.a1
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// `a_n = a1 + (n-1) alpha`, for `n >= 1`.
    pub fn a(&self, n: usize) -> f64 {
        debug_assert!(n >= 1);
        self.a1 + (n - 1) as f64 * self.alpha
    }

    /// `b = c + alpha`, the second parameter of every perpetuity factor `U_n`.
    pub fn b(&self) -> f64 {
        self.c + self.alpha
    }
}

/// Parameters of the two-parameter Poisson-Dirichlet law `PD(alpha, theta)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PdParams {
    alpha: f64,
    theta: f64,
}

impl PdParams {
    pub fn new(alpha: f64, theta: f64) -> Result<Self> {
        if !(alpha.is_finite() && (0.0..1.0).contains(&alpha)) {
            return Err(invalid("alpha", alpha, "must lie in [0, 1)"));
        }
        if !(theta.is_finite() && theta + alpha > 0.0) {
            return Err(invalid("theta", theta, "must satisfy theta > -alpha"));
        }
        Ok(Self { alpha, theta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn to_ram(&self) -> RamParams {
        pd_to_ram(*self)
    }
}

/// `PD(alpha, theta)` is `RAM(alpha, alpha + theta, 1 - alpha)`.
pub fn pd_to_ram(pd: PdParams) -> RamParams {
    RamParams {
        alpha: pd.alpha,
        a1: pd.alpha + pd.theta,
        c: 1.0 - pd.alpha,
    }
}

pub(crate) fn require_k(k: usize) -> Result<()> {
    if k == 0 {
        Err(invalid("k", 0.0, "must be at least 1"))
    } else {
        Ok(())
    }
}

pub(crate) fn require_stable_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(invalid("alpha", alpha, "must lie strictly between 0 and 1"))
    }
}
