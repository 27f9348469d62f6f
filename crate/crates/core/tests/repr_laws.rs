//! Distributional checks of the representation samplers.

mod common;

use common::{beta_cdf, bonferroni, gamma_cdf, replicas, replicas_multi, size_biased_atoms, N};
use masspart::partition::{size_biased_permutation, size_biased_prefix, sort_nonincreasing};
use masspart::randkit::{reg_inc_beta, sample_beta};
use masspart::repr::*;
use masspart::stattest::{ks_one_sample, ks_two_sample, moment_check, KsReport};
use masspart::{MarkedPointSet, PdParams, RamParams};

fn ram(alpha: f64, a1: f64, c: f64) -> RamParams {
    RamParams::new(alpha, a1, c).unwrap()
}

fn pd(alpha: f64, theta: f64) -> PdParams {
    PdParams::new(alpha, theta).unwrap()
}

fn assert_pass(r: &KsReport, gate: f64, what: &str) {
    assert!(r.p_value >= gate, "{what}: {r:?}");
}

#[test]
fn stick_first_atom_is_arcsine_for_pd_half_zero() {
    let x = replicas("stick-half", N, |s| sample_ram_stick(ram(0.5, 0.5, 0.5), 1, s).unwrap().atoms()[0]);
    assert_pass(&ks_one_sample(&x, beta_cdf(0.5, 0.5)).unwrap(), 1e-3, "atom 1");
}

#[test]
fn stick_beyond_alpha_one() {
    let y2 = replicas("stick-alpha-2", N, |s| {
        let p = sample_ram_stick(ram(2.0, 1.0, 3.0), 2, s).unwrap();
        p.atoms()[1] / (1.0 - p.atoms()[0])
    });
    assert_pass(&ks_one_sample(&y2, beta_cdf(3.0, 3.0)).unwrap(), 1e-3, "Y2");
}

#[test]
fn perpetuity_single_term_and_denominator() {
    let p = ram(0.5, 0.5, 0.5);
    let [atom, denom] = replicas_multi("perp-one", N, |s| {
        let d = draw_ram_perpetuity(p, 1, s, true).unwrap();
        [d.to_partition().atoms()[0], d.denominator()]
    });
    let gate = bonferroni(1e-3, 2);
    assert_pass(&ks_one_sample(&atom, beta_cdf(0.5, 0.5)).unwrap(), gate, "atom 1");
    assert_pass(&ks_one_sample(&denom, |x| 1.0 - (-x).exp()).unwrap(), gate, "denominator");
}

#[test]
fn perpetuity_first_atom_matches_stick() {
    let p = ram(0.5, 0.5, 0.5);
    let a = replicas("perp-vs-stick/perp", N, |s| sample_ram_perpetuity(p, 5, s, true).unwrap().atoms()[0]);
    let b = replicas("perp-vs-stick/stick", N, |s| sample_ram_stick(p, 5, s).unwrap().atoms()[0]);
    assert_pass(&ks_two_sample(&a, &b).unwrap(), 1e-3, "first atom");
}

#[test]
fn truncated_perpetuity_is_biased() {
    // Dropping the tail inflates the first atom; the exact closure fixes it.
    let p = ram(0.5, 0.5, 0.5);
    let trunc = replicas("perp-trunc", N, |s| sample_ram_perpetuity(p, 3, s, false).unwrap().atoms()[0]);
    assert!(ks_one_sample(&trunc, beta_cdf(0.5, 0.5)).unwrap().p_value < 1e-6);
}

#[test]
fn stable_points_consecutive_ratio() {
    // P_2 / P_1 = (Gamma_1 / Gamma_2)^(1/alpha) ~ beta(alpha, 1).
    let r = replicas("stable-ratio", N, |s| {
        let p = sample_pd_stable_points(0.5, 2, s).unwrap();
        p.atoms()[1] / p.atoms()[0]
    });
    assert_pass(&ks_one_sample(&r, |x| x.sqrt()).unwrap(), 1e-3, "ratio");
}

#[test]
fn stable_points_largest_atom_matches_sorted_stick() {
    let stable = replicas("stable-max/stable", N, |s| sample_pd_stable_points(0.5, 2000, s).unwrap().atoms()[0]);
    let stick = replicas("stable-max/stick", N, |s| {
        sort_nonincreasing(&sample_ram_stick(ram(0.5, 0.5, 0.5), 500, s).unwrap()).atoms()[0]
    });
    assert_pass(&ks_two_sample(&stable, &stick).unwrap(), 1e-2, "largest atom");
}

#[test]
fn theta_biased_matches_beta_and_stick() {
    let law = pd(0.5, 0.5);
    let a = replicas("theta-biased", N, |s| sample_pd_theta_biased(law, 3, s).unwrap().atoms()[0]);
    let b = replicas("theta-biased/stick", N, |s| sample_ram_stick(ram(0.5, 1.0, 0.5), 3, s).unwrap().atoms()[0]);
    let gate = bonferroni(1e-3, 2);
    assert_pass(&ks_one_sample(&a, beta_cdf(0.5, 1.0)).unwrap(), gate, "beta(1/2, 1)");
    assert_pass(&ks_two_sample(&a, &b).unwrap(), gate, "vs stick");
}

#[test]
fn theta_biased_at_zero_matches_size_biased_stable_points() {
    let a = replicas("theta-zero", N, |s| sample_pd_theta_biased(pd(0.5, 0.0), 2, s).unwrap().atoms()[0]);
    let b = replicas("theta-zero/stable", N, |s| {
        let p = sample_pd_stable_points(0.5, 2000, s).unwrap();
        size_biased_atoms::<1>(&p, s)[0]
    });
    assert_pass(&ks_two_sample(&a, &b).unwrap(), 1e-2, "first size-biased atom");
}

#[test]
fn exp_weights_laws() {
    let u = replicas("pd0-exp/theta-1", N, |s| sample_pd0_exp_weights(1.0, 1, s).unwrap().atoms()[0]);
    let [a, d] = replicas_multi("pd0-exp/theta-2.5", N, |s| {
        let draw = draw_pd0_exp_weights(2.5, 4, s).unwrap();
        [draw.to_partition().atoms()[0], draw.denominator()]
    });
    let b = replicas("pd0-exp/stick", N, |s| sample_ram_stick(ram(0.0, 2.5, 1.0), 4, s).unwrap().atoms()[0]);
    let gate = bonferroni(1e-3, 3);
    assert_pass(&ks_one_sample(&u, |x| x).unwrap(), gate, "uniform");
    assert_pass(&ks_two_sample(&a, &b).unwrap(), gate, "vs stick");
    assert_pass(&ks_one_sample(&d, gamma_cdf(3.5)).unwrap(), gate, "denominator");
}

#[test]
fn biased_exponential_laws() {
    let a = replicas("ram0/c-1", N, |s| sample_ram0_biased_exp(1.7, 1.0, 3, s).unwrap().atoms()[0]);
    let b = replicas("ram0/exp", N, |s| sample_pd0_exp_weights(1.7, 3, s).unwrap().atoms()[0]);
    let y1 = replicas("ram0/a2c3", N, |s| sample_ram0_biased_exp(2.0, 3.0, 1, s).unwrap().atoms()[0]);
    let d = replicas("ram0/time", N, |s| sample_biased_exp_time(2.0, 3.0, s).unwrap());
    let b_from_d: Vec<f64> = d.iter().map(|x| (-x / 2.0).exp()).collect();
    let gate = bonferroni(1e-3, 4);
    assert_pass(&ks_two_sample(&a, &b).unwrap(), gate, "c = 1 vs exp weights");
    assert_pass(&ks_one_sample(&y1, beta_cdf(3.0, 2.0)).unwrap(), gate, "beta(3, 2)");
    assert_pass(&ks_one_sample(&b_from_d, beta_cdf(2.0, 3.0)).unwrap(), gate, "exp(-D/a)");
    // Distribution function of D from its density: 1 - I_{exp(-x/a)}(a, c).
    let cdf = |x: f64| 1.0 - reg_inc_beta(2.0, 3.0, (-x / 2.0).exp()).unwrap();
    assert_pass(&ks_one_sample(&d, cdf).unwrap(), gate, "D");
}

#[test]
fn biased_exponential_cdf_matches_density_quadrature() {
    for x in [0.05, 0.5, 2.0, 8.0] {
        let want = common::integrate_from_zero(|t| biased_exp_density(2.0, 3.0, t).unwrap(), 3.0, x, 1e-14);
        let got = 1.0 - reg_inc_beta(2.0, 3.0, (-x / 2.0).exp()).unwrap();
        assert!((got - want).abs() < 1e-9, "x={x}: {got} vs {want}");
    }
}

#[test]
fn mvee_counts_match_intensity() {
    let (alpha, s_level, u) = (0.5, 1.0, 0.1);
    let reps = 10_000;
    let counts = replicas("mvee-count", reps, |s| {
        sample_mvee(alpha, s_level, 400, s).unwrap().sizes().filter(|&x| x > u).count() as f64
    });
    let mean = s_level * nu_vee_tail(alpha, u).unwrap();
    // Counts are Poisson, so the standard deviation is sqrt(mean).
    let r = moment_check(&counts, mean, mean.sqrt()).unwrap();
    assert!(r.passed, "{r:?}");
}

#[test]
fn dickman_first_interval() {
    let x = replicas("dickman-first", N, |s| sample_dickman_partition(2.0, 1, s).unwrap().atoms()[0]);
    assert_pass(&ks_one_sample(&x, beta_cdf(1.0, 2.0)).unwrap(), 1e-3, "beta(1, a)");
}

#[test]
fn size_biasing_an_exact_pd_sample() {
    // Size-bias a PD(1/2, 0) prefix with exact closure. A pick landing in the
    // residual is completed exactly: the unseen atoms are the residual times a
    // RAM(alpha, a_{k+1}, c) partition, whose size-biased pick is beta(c, a_{k+1}).
    let p = ram(0.5, 0.5, 0.5);
    let k = 40;
    let x = replicas("size-bias-pd", N, |s| {
        let part = sample_ram_perpetuity(p, k, s, true).unwrap();
        let pick = size_biased_prefix(&part, 1, s);
        match pick.atom(0) {
            Some(v) => v,
            None => part.residual() * sample_beta(s, p.c(), p.a(k + 1)).unwrap(),
        }
    });
    assert_pass(&ks_one_sample(&x, beta_cdf(0.5, 0.5)).unwrap(), 1e-3, "first atom");
}

#[test]
fn size_biasing_twice_keeps_first_atom_law() {
    let once_and_twice = |s: &mut masspart::RngStream| {
        let sizes: Vec<f64> = (0..20).map(|_| masspart::randkit::sample_gamma(s, 0.5, 1.0).unwrap()).collect();
        let p = masspart::partition::normalize(&MarkedPointSet::from_sizes(&sizes).unwrap()).unwrap();
        let once = size_biased_permutation(&p, s).unwrap();
        let twice = size_biased_permutation(&once, s).unwrap();
        [once.atoms()[0], twice.atoms()[0]]
    };
    let [once, _] = replicas_multi("sb-twice/a", N, once_and_twice);
    let [_, twice] = replicas_multi("sb-twice/b", N, once_and_twice);
    assert_pass(&ks_two_sample(&once, &twice).unwrap(), 1e-3, "first atom");
}

#[test]
fn mixed_poisson_depth_does_not_hurt() {
    let law = pd(0.5, 0.5);
    let reference = replicas("mixed-depth/stick", N, |s| sample_ram_stick(ram(0.5, 1.0, 0.5), 1, s).unwrap().atoms()[0]);
    let stat = |n_points: usize| {
        let x = replicas("mixed-depth/mixed", N, |s| {
            size_biased_atoms::<1>(&sample_pd_theta_mixed_poisson(law, n_points, s).unwrap(), s)[0]
        });
        ks_two_sample(&x, &reference).unwrap()
    };
    let shallow = stat(500);
    let deep = stat(1000);
    assert!(deep.statistic <= shallow.statistic + 2.0 * deep.statistic_se(), "{shallow:?} {deep:?}");
    assert_pass(&deep, 1e-2, "mixed vs stick");
}

#[test]
fn small_alpha_limit_is_close_to_pd0() {
    let x = replicas("limit/mvee", N, |s| {
        size_biased_atoms::<1>(&sample_pd0_limit_of_mvee(1.0, 0.01, 300, s).unwrap(), s)[0]
    });
    let y = replicas("limit/exp", N, |s| sample_pd0_exp_weights(1.0, 1, s).unwrap().atoms()[0]);
    let r = ks_two_sample(&x, &y).unwrap();
    assert!(r.statistic < 0.02, "{r:?}");
}

#[test]
fn limit_partition_sums_to_one() {
    for i in 0..100u64 {
        let mut s = masspart::make_stream(5, i);
        let p = sample_pd0_limit_of_mvee(1.0, 0.02, 300, &mut s).unwrap();
        assert!((p.total_mass() - 1.0).abs() < 1e-12);
    }
}

/// Samples of the first two size-biased atoms from every sampler that applies
/// to `law`, tagged with whether the sampler is exact.
fn equivalence_samples(law: PdParams, tag: &str) -> Vec<(&'static str, bool, [Vec<f64>; 2])> {
    let r = law.to_ram();
    let label = |name: &str| format!("equiv/{tag}/{name}");
    let two = |p: masspart::MassPartition| [p.atoms()[0], p.atoms()[1]];
    let mut out = vec![
        ("stick", true, replicas_multi(&label("stick"), N, |s| two(sample_ram_stick(r, 2, s).unwrap()))),
        (
            "perpetuity",
            true,
            replicas_multi(&label("perpetuity"), N, |s| two(sample_ram_perpetuity(r, 2, s, true).unwrap())),
        ),
    ];
    if law.alpha() > 0.0 {
        out.push((
            "theta-biased",
            true,
            replicas_multi(&label("theta-biased"), N, |s| two(sample_pd_theta_biased(law, 2, s).unwrap())),
        ));
    } else {
        out.push((
            "exp-weights",
            true,
            replicas_multi(&label("exp-weights"), N, |s| two(sample_pd0_exp_weights(law.theta(), 2, s).unwrap())),
        ));
        out.push((
            "biased-exp",
            true,
            replicas_multi(&label("biased-exp"), N, |s| {
                two(sample_ram0_biased_exp(law.theta(), 1.0, 2, s).unwrap())
            }),
        ));
    }
    if law.alpha() > 0.0 && law.theta() > 0.0 {
        out.push((
            "mixed-poisson",
            false,
            replicas_multi(&label("mixed"), N, |s| {
                size_biased_atoms::<2>(&sample_pd_theta_mixed_poisson(law, 1000, s).unwrap(), s)
            }),
        ));
    }
    if law.alpha() > 0.0 && law.theta() == 0.0 {
        out.push((
            "xi-thinned",
            false,
            replicas_multi(&label("xi"), N, |s| {
                size_biased_atoms::<2>(&sample_xi_thinned(law.alpha(), 1000, s).unwrap().partition, s)
            }),
        ));
    }
    out
}

#[test]
fn representations_agree_on_first_two_atoms() {
    for (alpha, theta) in [(0.5, 0.0), (0.5, 0.5), (0.3, 0.7), (0.0, 1.0), (0.0, 2.5)] {
        let tag = format!("{alpha}-{theta}");
        let samples = equivalence_samples(pd(alpha, theta), &tag);
        let pairs = samples.len() * (samples.len() - 1) / 2;
        let mut failures = Vec::new();
        for i in 0..samples.len() {
            for j in i + 1..samples.len() {
                let (na, ea, xa) = &samples[i];
                let (nb, eb, xb) = &samples[j];
                let gate = if *ea && *eb { 1e-3 } else { 1e-2 };
                for c in 0..2 {
                    let r = ks_two_sample(&xa[c], &xb[c]).unwrap();
                    if r.p_value < bonferroni(gate, 2 * pairs) {
                        failures.push(format!("PD({alpha},{theta}) {na} vs {nb} atom {}: {r:?}", c + 1));
                    }
                }
            }
        }
        assert!(failures.is_empty(), "{failures:#?}");
    }
}

#[test]
fn alpha_above_one_stick_and_perpetuity_agree() {
    let p = ram(1.5, 1.0, 2.0);
    let [a1, a2] = replicas_multi("alpha-1.5/perp", N, |s| {
        let q = sample_ram_perpetuity(p, 2, s, true).unwrap();
        [q.atoms()[0], q.atoms()[1]]
    });
    let [b1, b2] = replicas_multi("alpha-1.5/stick", N, |s| {
        let q = sample_ram_stick(p, 2, s).unwrap();
        [q.atoms()[0], q.atoms()[1]]
    });
    let gate = bonferroni(1e-3, 2);
    assert_pass(&ks_two_sample(&a1, &b1).unwrap(), gate, "atom 1");
    assert_pass(&ks_two_sample(&a2, &b2).unwrap(), gate, "atom 2");
}

#[test]
fn exact_closure_denominators_are_gamma() {
    let cases = [ram(0.5, 0.5, 0.5), ram(0.3, 1.0, 0.7), ram(0.0, 2.5, 1.0), ram(1.5, 1.0, 2.0)];
    let gate = bonferroni(1e-3, cases.len());
    for (i, p) in cases.iter().enumerate() {
        let d = replicas(&format!("denominator/{i}"), N, |s| draw_ram_perpetuity(*p, 4, s, true).unwrap().denominator());
        let r = ks_one_sample(&d, gamma_cdf(p.c() + p.a1())).unwrap();
        assert_pass(&r, gate, &format!("{p:?}"));
    }
}
