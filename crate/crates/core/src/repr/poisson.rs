use serde::{Deserialize, Serialize};

use super::{require_k, require_stable_alpha, PdParams};
use crate::error::{invalid, require_positive, Result};
use crate::partition::{normalize_with_tail, Closure, MarkedPointSet, MassPartition, Order, Point};
use crate::randkit::{gamma_fn, gamma_unit, reg_inc_gamma_upper, sample_exp1, RngStream};

/// Largest alpha accepted by [`sample_pd0_limit_of_mvee`].
pub const LIMIT_MAX_ALPHA: f64 = 0.05;

/// Mean of `sum_{j>n} Gamma_j^(-1/alpha)` given `Gamma_n`, approximated by
/// `int_{Gamma_n}^inf t^(-1/alpha) dt`.
pub fn stable_tail_estimate(alpha: f64, gamma_n: f64) -> f64 {
    gamma_n.powf(1.0 - 1.0 / alpha) * alpha / (1.0 - alpha)
}

/// Nonincreasing `PD(alpha, 0)` prefix from the stable jumps
/// `P_j = Gamma_j^(-1/alpha)`.
///
/// The tail beyond `n_points` is replaced by [`stable_tail_estimate`], so
/// the result is approximate and tagged [`Closure::Estimated`].
pub fn sample_pd_stable_points(alpha: f64, n_points: usize, stream: &mut RngStream) -> Result<MassPartition> {
    require_stable_alpha(alpha)?;
    if n_points < 2 {
        return Err(invalid("n_points", n_points as f64, "must be at least 2"));
    }
    let inv_alpha = 1.0 / alpha;
    let mut t = 0.0f64;
    let mut sizes = Vec::with_capacity(n_points);
    for _ in 0..n_points {
        t += sample_exp1(stream);
        sizes.push((-inv_alpha * t.ln()).exp());
    }
    let tail = stable_tail_estimate(alpha, t);
    let set = MarkedPointSet::from_parts(
        sizes.into_iter().map(|size| Point { time: None, size }).collect(),
        Some(t),
        tail,
    );
    let p = normalize_with_tail(&set)?;
    Ok(MassPartition::from_parts(
        p.atoms().to_vec(),
        p.residual(),
        Order::Nonincreasing,
        Closure::Estimated,
    ))
}

/// `nu(u, inf)` for the tempered stable measure
/// `alpha / Gamma(1-alpha) x^(-1-alpha) exp(-x) dx`.
pub fn nu_vee_tail(alpha: f64, u: f64) -> Result<f64> {
    require_stable_alpha(alpha)?;
    require_positive("u", u)?;
    let first = (-alpha * u.ln() - u).exp() / gamma_fn(1.0 - alpha);
    Ok((first - reg_inc_gamma_upper(1.0 - alpha, u)?).max(0.0))
}

/// Conditional mean of the sizes of `M_s` beyond the `n`-th point, given
/// `Gamma_n = gamma_n`: `(1-alpha) int_{gamma_n}^inf (s/(s+t))^(1/alpha) dt`.
pub fn mvee_tail_mean(alpha: f64, s: f64, gamma_n: f64) -> f64 {
    alpha * (s.ln() / alpha + (1.0 - 1.0 / alpha) * (s + gamma_n).ln()).exp()
}

/// First `n_points` points of `M_s = sum_i delta(G_i (s/(s+Gamma_i))^(1/alpha))`
/// with `G_i ~ gamma(1-alpha)`.
///
/// Point times are the `Gamma_i`; the truncation level is `Gamma_n` and the
/// tail mean is [`mvee_tail_mean`].
pub fn sample_mvee(alpha: f64, s: f64, n_points: usize, stream: &mut RngStream) -> Result<MarkedPointSet> {
    require_stable_alpha(alpha)?;
    require_positive("s", s)?;
    require_k(n_points)?;
    Ok(mvee_unchecked(alpha, s, n_points, stream))
}

fn mvee_unchecked(alpha: f64, s: f64, n_points: usize, stream: &mut RngStream) -> MarkedPointSet {
    let inv_alpha = 1.0 / alpha;
    let shape = 1.0 - alpha;
    let ln_s = s.ln();
    let mut t = 0.0f64;
    let mut points = Vec::with_capacity(n_points);
    for _ in 0..n_points {
        t += sample_exp1(stream);
        let g = gamma_unit(stream, shape);
        let size = g * (inv_alpha * (ln_s - (s + t).ln())).exp();
        points.push(Point { time: Some(t), size });
    }
    let tail = mvee_tail_mean(alpha, s, t);
    MarkedPointSet::from_parts(points, Some(t), tail)
}

/// One draw of the thinned construction of `PD(alpha, 0)` at an
/// exponential time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct XiSample {
    /// `{A, completed jumps}` divided by the total, with `A` first.
    pub partition: MassPartition,
    /// `A / Gamma`: the age of the straddling jump over the total.
    pub a_frac: f64,
    /// `B / Gamma` with overshoot `B = A (U^(-1/alpha) - 1)`.
    pub b_over_gamma: f64,
    /// The total `Gamma`, exponential in law.
    pub gamma_total: f64,
    /// Local time `T` at which the first long jump happens.
    pub local_time: f64,
    /// Sum of the completed jumps (including the tail estimate).
    pub completed_mass: f64,
}

/// Thinned-process construction: `T ~ Exp(1)`, `A ~ gamma(1-alpha)`, the
/// completed jumps are `M_T` with `n_points - 1` points, and
/// `Gamma = A + sum of completed jumps + tail mean`.
pub fn sample_xi_thinned(alpha: f64, n_points: usize, stream: &mut RngStream) -> Result<XiSample> {
    require_stable_alpha(alpha)?;
    if n_points < 2 {
        return Err(invalid("n_points", n_points as f64, "must be at least 2"));
    }
    let local_time = sample_exp1(stream);
    let a = gamma_unit(stream, 1.0 - alpha);
    let u = stream.uniform();
    let completed = mvee_unchecked(alpha, local_time, n_points - 1, stream);
    let completed_mass = completed.size_sum() + completed.tail_mean();
    let gamma_total = a + completed_mass;
    let mut atoms = Vec::with_capacity(n_points);
    atoms.push(a / gamma_total);
    atoms.extend(completed.sizes().map(|x| x / gamma_total));
    let partition = MassPartition::from_parts(
        atoms,
        completed.tail_mean() / gamma_total,
        Order::Construction,
        Closure::Estimated,
    );
    let overshoot = a * ((-u.ln() / alpha).exp() - 1.0);
    Ok(XiSample {
        partition,
        a_frac: a / gamma_total,
        b_over_gamma: overshoot / gamma_total,
        gamma_total,
        local_time,
        completed_mass,
    })
}

/// `PD(alpha, theta)` with `theta > 0` as the normalized `M_D` with
/// `D ~ gamma(theta/alpha)`. Approximate, in construction order.
pub fn sample_pd_theta_mixed_poisson(pd: PdParams, n_points: usize, stream: &mut RngStream) -> Result<MassPartition> {
    require_stable_alpha(pd.alpha())?;
    require_positive("theta", pd.theta())?;
    require_k(n_points)?;
    let d = gamma_unit(stream, pd.theta() / pd.alpha());
    normalize_with_tail(&mvee_unchecked(pd.alpha(), d, n_points, stream))
}

/// Normalized `M_{theta/alpha}` for small alpha; approaches `PD(0, theta)`
/// as alpha goes to zero.
pub fn sample_pd0_limit_of_mvee(
    theta: f64,
    alpha_small: f64,
    n_points: usize,
    stream: &mut RngStream,
) -> Result<MassPartition> {
    require_positive("theta", theta)?;
    if !(alpha_small > 0.0 && alpha_small <= LIMIT_MAX_ALPHA) {
        return Err(invalid("alpha_small", alpha_small, "must lie in (0, 0.05]"));
    }
    require_k(n_points)?;
    normalize_with_tail(&mvee_unchecked(alpha_small, theta / alpha_small, n_points, stream))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::randkit::make_stream;

    #[test]
    fn nu_tail_limits_and_monotone() {
        assert!(nu_vee_tail(0.5, 50.0).unwrap() < 1e-15);
        let mut prev = f64::INFINITY;
        for i in 1..=100 {
            let v = nu_vee_tail(0.5, 0.05 * i as f64).unwrap();
            assert!(v < prev);
            prev = v;
        }
        assert!(nu_vee_tail(1.0, 1.0).is_err());
        assert!(nu_vee_tail(0.5, 0.0).is_err());
    }

    #[test]
    fn mvee_sizes_bounded_by_marks() {
        let mut s = make_stream(9, 9);
        let set = sample_mvee(0.5, 2.0, 500, &mut s).unwrap();
        assert_eq!(set.len(), 500);
        assert!(set.sizes().all(|x| x > 0.0 && x.is_finite()));
        assert_eq!(set.truncation_level(), set.points().last().unwrap().time);
    }

    #[test]
    fn tiny_intensity_has_no_large_points() {
        for r in 0..1000 {
            let mut s = make_stream(0xC0FFEE, r);
            let set = sample_mvee(0.5, 1e-6, 50, &mut s).unwrap();
            assert!(set.sizes().all(|x| x <= 0.1));
        }
    }

    #[test]
    fn tail_estimates_shrink_with_depth() {
        let mut s = make_stream(4, 4);
        let short = sample_pd_stable_points(0.5, 1000, &mut s).unwrap().residual();
        let mut s = make_stream(4, 4);
        let long = sample_pd_stable_points(0.5, 10_000, &mut s).unwrap().residual();
        assert!(long < short);
        assert!(long < 0.1);
    }

    #[test]
    fn xi_fields_consistent() {
        let mut s = make_stream(3, 3);
        let x = sample_xi_thinned(0.5, 200, &mut s).unwrap();
        assert_eq!(x.partition.atom(0), Some(x.a_frac));
        assert!((x.partition.total_mass() - 1.0).abs() < 1e-12);
        assert!(x.b_over_gamma >= 0.0);
        assert!((x.gamma_total - x.completed_mass - x.a_frac * x.gamma_total).abs() < 1e-12);
    }

    #[test]
    fn parameter_errors() {
        let mut s = make_stream(0, 0);
        assert!(sample_pd_stable_points(1.2, 10, &mut s).is_err());
        assert!(sample_pd_stable_points(0.5, 1, &mut s).is_err());
        assert!(sample_mvee(0.5, 0.0, 10, &mut s).is_err());
        assert!(sample_pd0_limit_of_mvee(1.0, 0.1, 10, &mut s).is_err());
        let pd = PdParams::new(0.5, 0.0).unwrap();
        assert!(sample_pd_theta_mixed_poisson(pd, 10, &mut s).is_err());
    }
}
