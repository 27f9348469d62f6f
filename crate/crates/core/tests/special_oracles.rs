//! Special functions and closed-form laws checked against numerical quadrature.

mod common;

use common::{integrate, integrate_from_zero, integrate_power_tail, integrate_to_inf};
use masspart::excursion::{bfry_cdf, bfry_density};
use masspart::randkit::{gamma_fn, ln_gamma, reg_inc_beta, reg_inc_gamma, reg_inc_gamma_upper};
use masspart::repr::{biased_exp_density, nu_vee_tail};
use masspart::{make_stream, RngStream};

fn gamma_cdf_quadrature(shape: f64, x: f64) -> f64 {
    let norm = gamma_fn(shape);
    let density = |t: f64| (-t + (shape - 1.0) * t.ln()).exp() / norm;
    // Singular part near zero by substitution, the rest on unit pieces.
    let head = x.min(1.0);
    let mut total = integrate_from_zero(density, shape, head, 1e-15);
    let mut lo = head;
    while lo < x {
        let hi = (lo + 1.0).min(x);
        total += integrate(density, lo, hi, 1e-16);
        lo = hi;
    }
    total
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

#[test]
fn incomplete_gamma_half_at_fifty() {
    let v = reg_inc_gamma(0.5, 50.0).unwrap();
    assert!((v - 1.0).abs() < 1e-10);
    // The upper tail is erfc(sqrt(50)) ~ 2e-23; quadrature of the tail.
    let tail = integrate_to_inf(|t| t.powf(-0.5) * (-t).exp() / gamma_fn(0.5), 50.0, 1e-30);
    let upper = reg_inc_gamma_upper(0.5, 50.0).unwrap();
    assert!(rel_err(upper, tail) < 1e-8, "{upper} vs {tail}");
    assert!((v - gamma_cdf_quadrature(0.5, 50.0)).abs() < 1e-10);
}

#[test]
fn incomplete_gamma_matches_quadrature_on_grid() {
    for &shape in &[0.05, 0.3, 0.5, 1.0, 2.5, 7.0, 30.0] {
        for &x in &[1e-3, 0.1, 0.9, 1.0, 3.0, 10.0, 40.0] {
            let got = reg_inc_gamma(shape, x).unwrap();
            let want = gamma_cdf_quadrature(shape, x);
            assert!(
                (got - want).abs() <= 1e-10 * want.max(1e-300) || (got - want).abs() < 1e-14,
                "P({shape}, {x}) = {got} vs {want}"
            );
        }
    }
}

#[test]
fn exponential_case_and_empty_integral() {
    for x in [0.1f64, 1.0, 10.0] {
        assert!((reg_inc_gamma(1.0, x).unwrap() - (1.0 - (-x).exp())).abs() < 1e-12);
    }
    assert_eq!(reg_inc_gamma(3.3, 0.0).unwrap(), 0.0);
}

fn beta_cdf_quadrature(a: f64, b: f64, x: f64) -> f64 {
    let ln_norm = ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b);
    let density = |t: f64| (ln_norm + (a - 1.0) * t.ln() + (b - 1.0) * (1.0 - t).ln()).exp();
    if x <= 0.5 {
        integrate_from_zero(density, a, x, 1e-14)
    } else {
        // Integrate the upper part from the other end to tame (1-t)^(b-1).
        let upper = integrate_from_zero(
            |s: f64| (ln_norm + (a - 1.0) * (1.0 - s).ln() + (b - 1.0) * s.ln()).exp(),
            b,
            1.0 - x,
            1e-14,
        );
        1.0 - upper
    }
}

#[test]
fn incomplete_beta_matches_quadrature() {
    for &(a, b) in &[(0.5, 0.5), (0.3, 2.0), (2.0, 3.0), (5.0, 0.7), (12.0, 9.0)] {
        for &x in &[0.01, 0.1, 0.4, 0.5, 0.77, 0.99] {
            let got = reg_inc_beta(a, b, x).unwrap();
            let want = beta_cdf_quadrature(a, b, x);
            assert!((got - want).abs() <= 1e-10 * want.max(1e-3), "I({a},{b},{x}) {got} vs {want}");
        }
    }
}

#[test]
fn incomplete_beta_closed_forms() {
    for x in [0.0, 0.1, 0.5, 0.9, 1.0] {
        assert!((reg_inc_beta(1.0, 1.0, x).unwrap() - x).abs() < 1e-12);
    }
    for x in [0.1f64, 0.5, 0.9] {
        let arcsine = std::f64::consts::FRAC_2_PI * x.sqrt().asin();
        assert!((reg_inc_beta(0.5, 0.5, x).unwrap() - arcsine).abs() < 1e-10);
    }
}

fn random_triple(s: &mut RngStream) -> (f64, f64, f64) {
    let a = (s.uniform() * 6.0 - 3.0).exp();
    let b = (s.uniform() * 6.0 - 3.0).exp();
    (a, b, s.uniform())
}

#[test]
fn incomplete_beta_symmetry() {
    let mut s = make_stream(common::SUITE_SEED, 11);
    for _ in 0..100 {
        let (a, b, x) = random_triple(&mut s);
        let sum = reg_inc_beta(a, b, x).unwrap() + reg_inc_beta(b, a, 1.0 - x).unwrap();
        assert!((sum - 1.0).abs() < 1e-12, "a={a} b={b} x={x}: {sum}");
    }
}

#[test]
fn incomplete_functions_are_monotone() {
    let mut s = make_stream(common::SUITE_SEED, 12);
    for _ in 0..1000 {
        let (a, b, x) = random_triple(&mut s);
        let y = s.uniform();
        let (lo, hi) = if x < y { (x, y) } else { (y, x) };
        assert!(reg_inc_beta(a, b, lo).unwrap() <= reg_inc_beta(a, b, hi).unwrap());
        let (glo, ghi) = (lo * 20.0, hi * 20.0);
        assert!(reg_inc_gamma(a, glo).unwrap() <= reg_inc_gamma(a, ghi).unwrap());
    }
}

#[test]
fn nu_vee_tail_matches_quadrature() {
    for &(alpha, u) in &[(0.5, 1.0), (0.5, 0.1), (0.3, 2.0), (0.7, 0.5)] {
        let k = alpha / gamma_fn(1.0 - alpha);
        let want = integrate_to_inf(|x| k * x.powf(-alpha - 1.0) * (-x).exp(), u, 1e-15);
        let got = nu_vee_tail(alpha, u).unwrap();
        assert!((got - want).abs() < 1e-8, "alpha={alpha} u={u}: {got} vs {want}");
    }
}

#[test]
fn bfry_normalizes_and_cdf_matches_quadrature() {
    for &alpha in &[0.3, 0.5, 0.7] {
        let f = |x: f64| bfry_density(alpha, x).unwrap();
        // Near zero the density behaves like x^(-alpha).
        let head = integrate_from_zero(f, 1.0 - alpha, 1.0, 1e-13);
        let total = head + integrate_power_tail(f, 1.0, alpha, 1e-13);
        assert!((total - 1.0).abs() < 1e-6, "alpha={alpha}: {total}");
        for &x in &[0.01, 0.5, 1.0, 4.0, 100.0] {
            let want = if x <= 1.0 {
                integrate_from_zero(f, 1.0 - alpha, x, 1e-13)
            } else {
                1.0 - integrate_power_tail(f, x, alpha, 1e-13)
            };
            let got = bfry_cdf(alpha, x).unwrap();
            assert!((got - want).abs() < 1e-9, "alpha={alpha} x={x}: {got} vs {want}");
        }
    }
}

#[test]
fn biased_exponential_density_normalizes() {
    for &(a, c) in &[(2.0, 3.0), (0.7, 0.4), (1.0, 1.0)] {
        let f = |x: f64| biased_exp_density(a, c, x).unwrap();
        let head = integrate_from_zero(f, c, 1.0, 1e-13);
        let total = head + integrate_to_inf(f, 1.0, 1e-13);
        assert!((total - 1.0).abs() < 1e-9, "a={a} c={c}: {total}");
    }
}
