//! The closed-form log integrals and Clausen series against quadrature of
//! the raw integrands, written here without the library's local-coordinate
//! machinery.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rough_kernel::circle::{Angle, Arc};
use rough_kernel::logkernel::quadrature::integrate;
use rough_kernel::logkernel::{arc_log_integral, clausen2, Method};

/// `-log(sin t / t)`, by its Maclaurin series where the quotient is close to 1.
fn minus_log_sinc(t: f64) -> f64 {
    if t.abs() < 1e-2 {
        let x = t * t;
        x * (1.0 / 6.0 + x * (1.0 / 180.0 + x * (1.0 / 2835.0 + x / 37800.0)))
    } else {
        -(t.sin() / t).ln()
    }
}

/// `∫_0^w -log|sin t| dt` for `0 < w < π`, the logarithm split off exactly.
fn log_sin_from_zero(w: f64) -> f64 {
    let exact = w - w * w.ln();
    let smooth = integrate(minus_log_sinc, 0.0, w, 1e-12, 2000).unwrap().value;
    exact + smooth
}

/// `-log|cos x|`, through `log1p` where the cosine is close to ±1.
fn minus_log_cos(x: f64) -> f64 {
    let c = x.cos();
    if c.abs() < 0.5 {
        -c.abs().ln()
    } else {
        let s = x.sin();
        -0.5 * (-s * s).ln_1p()
    }
}

/// `∫_a^b -log|cos(θ - ξ)| dθ`, split at every zero of the cosine.
fn oracle(a: f64, b: f64, xi: f64) -> f64 {
    // zeros at ξ + π/2 + kπ
    let k0 = ((a - xi - FRAC_PI_2) / PI).floor() as i64;
    let singular: Vec<f64> = (k0..k0 + 3)
        .map(|k| xi + FRAC_PI_2 + k as f64 * PI)
        .filter(|&s| a <= s && s <= b)
        .collect();
    let mut cuts = vec![a];
    cuts.extend(singular.iter().copied().filter(|&s| a < s && s < b));
    cuts.push(b);
    let mut total = 0.0;
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        total += match (singular.contains(&lo), singular.contains(&hi)) {
            (false, false) => integrate(|t: f64| minus_log_cos(t - xi), lo, hi, 1e-12, 2000).unwrap().value,
            // |cos(s ± u - ξ)| = |sin u|
            (true, false) | (false, true) => log_sin_from_zero(hi - lo),
            (true, true) => unreachable!("arcs are shorter than π: {cuts:?}"),
        };
    }
    total
}

#[test]
fn closed_form_matches_independent_quadrature() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let len = 10f64.powf(rng.gen_range(-4.0..0.19));
        let c = rng.gen_range(0.0..TAU);
        let xi = rng.gen_range(0.0..TAU);
        let arc = Arc::new(Angle::new(c), len).unwrap();
        let got = arc_log_integral(&arc, Angle::new(xi), Method::ClosedForm).unwrap();
        let want = oracle(c - len / 2.0, c + len / 2.0, xi);
        let rel = ((got - want) / want).abs();
        worst = worst.max(rel);
        assert!(rel <= 1e-9, "c={c} len={len} xi={xi}: {got} vs {want}");
    }
    println!("worst relative deviation {worst:e}");
}

#[test]
fn arcs_hugging_the_singular_direction() {
    for offset in [0.0, 1e-3, -1e-3, 0.01, 0.05, -0.2] {
        for len in [1e-3, 0.1, 1.0] {
            let c = FRAC_PI_2 + offset;
            let arc = Arc::new(Angle::new(c), len).unwrap();
            let got = arc_log_integral(&arc, Angle::ZERO, Method::ClosedForm).unwrap();
            let want = oracle(c - len / 2.0, c + len / 2.0, 0.0);
            assert!(((got - want) / want).abs() <= 1e-9, "offset {offset} len {len}");
        }
    }
}

#[test]
fn tiny_expansion_agrees_in_the_overlap_band() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..500 {
        let len = 10f64.powf(rng.gen_range(-8.0..-6.0));
        let arc = Arc::new(Angle::new(rng.gen_range(0.0..TAU)), len).unwrap();
        let xi = Angle::new(rng.gen_range(0.0..TAU));
        let tiny = arc_log_integral(&arc, xi, Method::Tiny).unwrap();
        let closed = arc_log_integral(&arc, xi, Method::ClosedForm).unwrap();
        assert!(((tiny - closed) / closed).abs() <= 1e-8, "{tiny} vs {closed}");
    }
    // centred on the singular and on the zero direction
    for c in [FRAC_PI_2, 0.0] {
        for len in [1e-8, 1e-7, 1e-6] {
            let arc = Arc::new(Angle::new(c), len).unwrap();
            let tiny = arc_log_integral(&arc, Angle::ZERO, Method::Tiny).unwrap();
            let closed = arc_log_integral(&arc, Angle::ZERO, Method::ClosedForm).unwrap();
            assert!(((tiny - closed) / closed).abs() <= 1e-8, "c={c} len={len}");
        }
    }
}

#[test]
fn clausen_matches_its_integral_definition() {
    // Cl₂(θ) = -∫_0^θ log|2 sin(t/2)| dt = -θ log 2 + 2∫_0^{θ/2} -log sin u du
    for theta in [1e-6, 1e-3, 0.1, 1.0, 2.0, PI / 3.0, 3.0, 3.1] {
        let want = -theta * 2f64.ln() + 2.0 * log_sin_from_zero(theta / 2.0);
        let got = clausen2(theta);
        assert!((got - want).abs() <= 1e-13 * want.abs().max(1.0), "θ={theta}: {got} vs {want}");
    }
    // values frozen from an arbitrary-precision evaluation
    for (theta, v) in [
        (1.0, 1.013_959_132_360_768_5),
        (1e-3, 0.007_907_755_292_871_026),
        (3.0, 0.098_026_209_391_301_42),
    ] {
        assert!((clausen2(theta) - v).abs() <= 1e-14, "θ={theta}");
    }
}
