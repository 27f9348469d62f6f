#![allow(dead_code)]

use masspart::{derive_seed, make_stream, RngStream};

pub const SUITE_SEED: u64 = 0xC0FFEE;
pub const N: usize = 100_000;

/// One value per replica, replica `i` drawing from stream `i` of the
/// family named `label`.
pub fn replicas(label: &str, n: usize, mut f: impl FnMut(&mut RngStream) -> f64) -> Vec<f64> {
    let seed = derive_seed(SUITE_SEED, label);
    (0..n as u64).map(|i| f(&mut make_stream(seed, i))).collect()
}

/// Several values per replica, returned column-wise.
pub fn replicas_multi<const K: usize>(
    label: &str,
    n: usize,
    mut f: impl FnMut(&mut RngStream) -> [f64; K],
) -> [Vec<f64>; K] {
    let seed = derive_seed(SUITE_SEED, label);
    let mut cols: [Vec<f64>; K] = std::array::from_fn(|_| Vec::with_capacity(n));
    for i in 0..n as u64 {
        let row = f(&mut make_stream(seed, i));
        for (c, v) in cols.iter_mut().zip(row) {
            c.push(v);
        }
    }
    cols
}

// 15-point Kronrod nodes and weights with the embedded 7-point Gauss rule.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let dx = h * XGK[i];
        let s = f(c - dx) + f(c + dx);
        k += WGK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

fn adapt(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let (k, err) = gk15(f, a, b);
    if err <= tol || depth == 0 {
        return k;
    }
    let m = 0.5 * (a + b);
    adapt(f, a, m, 0.5 * tol, depth - 1) + adapt(f, m, b, 0.5 * tol, depth - 1)
}

/// Adaptive Gauss-Kronrod quadrature of `f` over `[a, b]`.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    adapt(&f, a, b, tol, 40)
}

/// Integral over `[a, inf)` through `x = a + t / (1 - t)`.
pub fn integrate_to_inf(f: impl Fn(f64) -> f64, a: f64, tol: f64) -> f64 {
    let g = |t: f64| {
        if t >= 1.0 {
            return 0.0;
        }
        let one = 1.0 - t;
        f(a + t / one) / (one * one)
    };
    adapt(&g, 0.0, 1.0, tol, 40)
}

/// Integral over `(0, b]` of a function with an integrable `x^(p-1)`
/// singularity at zero, through `x = y^(1/p)`.
pub fn integrate_from_zero(f: impl Fn(f64) -> f64, p: f64, b: f64, tol: f64) -> f64 {
    let inv = 1.0 / p;
    let g = |y: f64| {
        if y <= 0.0 {
            return 0.0;
        }
        let x = y.powf(inv);
        f(x) * inv * x / y
    };
    adapt(&g, 0.0, b.powf(p), tol, 40)
}

/// Gate for the `m`-th member of a group of `m` tests (Bonferroni).
pub fn bonferroni(gate: f64, m: usize) -> f64 {
    gate / m as f64
}

/// Integral over `[a, inf)` of a function decaying like `x^(-1-q)`, through
/// `x = a y^(-1/q)` which makes such an integrand flat in `y`.
pub fn integrate_power_tail(f: impl Fn(f64) -> f64, a: f64, q: f64, tol: f64) -> f64 {
    let g = |y: f64| {
        if y <= 0.0 {
            return 0.0;
        }
        let x = a * y.powf(-1.0 / q);
        f(x) * x / (q * y)
    };
    adapt(&g, 0.0, 1.0, tol, 40)
}

/// First `M` size-biased picks of `p`; a pick that lands in the residual
/// mass (an atom not realised by the sampler) is recorded as 0.
pub fn size_biased_atoms<const M: usize>(p: &masspart::MassPartition, stream: &mut RngStream) -> [f64; M] {
    let picked = masspart::partition::size_biased_prefix(p, M, stream);
    std::array::from_fn(|i| picked.atom(i).unwrap_or(0.0))
}

pub fn beta_cdf(a: f64, b: f64) -> impl Fn(f64) -> f64 {
    move |x| masspart::randkit::reg_inc_beta(a, b, x.clamp(0.0, 1.0)).unwrap()
}

pub fn gamma_cdf(shape: f64) -> impl Fn(f64) -> f64 {
    move |x| masspart::randkit::reg_inc_gamma(shape, x.max(0.0)).unwrap()
}
