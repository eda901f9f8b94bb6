//! Clausen function `Cl₂(x) = Σ_{k≥1} sin(kx)/k²`.
//!
//! On `0 < θ < 2π` the function splits into its logarithmic singular part and
//! an even power series,
//!
//! ```text
//! Cl₂(θ) = θ - θ log θ + Σ_{k≥1} ζ(2k) / (k(2k+1)) · θ^{2k+1} / (2π)^{2k},
//! ```
//!
//! which converges geometrically for `|θ| ≤ π` (ratio at most 1/4 per term).

use std::f64::consts::{PI, TAU};
use std::sync::OnceLock;

const TERMS: usize = 160;

/// `ζ(2k)` for `k = 1..`.
fn zeta_even(k: usize) -> f64 {
    let p2 = PI * PI;
    match k {
        1 => p2 / 6.0,
        2 => p2 * p2 / 90.0,
        3 => p2.powi(3) / 945.0,
        4 => p2.powi(4) / 9450.0,
        5 => p2.powi(5) / 93555.0,
        6 => 691.0 * p2.powi(6) / 638_512_875.0,
        _ => {
            // Tail beyond m = 200 is below 200^{-13}/13.
            let s = 2 * k as i32;
            (1..=200).rev().map(|m| (m as f64).powi(-s)).sum()
        }
    }
}

/// Coefficients `ζ(2k)/(k(2k+1))`.
fn coefficients() -> &'static [f64] {
    static COEFFS: OnceLock<Vec<f64>> = OnceLock::new();
    COEFFS.get_or_init(|| {
        (1..=TERMS)
            .map(|k| zeta_even(k) / (k as f64 * (2 * k + 1) as f64))
            .collect()
    })
}

/// Regular part `Cl₂(θ) - (θ - θ log θ)` for `0 ≤ θ < 2π`.
///
/// Converges for the whole range, slowly as `θ → 2π`; callers stay below
/// `3π/2` where the ratio is at most 9/16.
pub(crate) fn clausen_tail(theta: f64) -> f64 {
    debug_assert!((0.0..TAU).contains(&theta));
    let r = theta / TAU;
    let r2 = r * r;
    let mut pow = r2;
    let mut sum = 0.0;
    for &c in coefficients() {
        let term = c * pow;
        sum += term;
        if term <= 1e-18 * sum {
            break;
        }
        pow *= r2;
    }
    theta * sum
}

/// `Cl₂(x)` for any finite `x`, to absolute error below `1e-13`.
pub fn clausen2(x: f64) -> f64 {
    let mut t = x.rem_euclid(TAU);
    if t > PI {
        t -= TAU;
    }
    if t == 0.0 {
        return 0.0;
    }
    let a = t.abs();
    let v = a - a * a.ln() + clausen_tail(a);
    v.copysign(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn special_values() {
        assert_eq!(clausen2(0.0), 0.0);
        assert!(clausen2(PI).abs() < 1e-15);
        assert!(clausen2(TAU).abs() < 1e-15);
        assert!((clausen2(FRAC_PI_2) - 0.915_965_594_177_219).abs() < 1e-14);
    }

    #[test]
    fn odd_and_periodic() {
        for &x in &[0.1, 1.0, 2.5, 3.0] {
            assert!((clausen2(-x) + clausen2(x)).abs() < 1e-15);
            assert!((clausen2(x + TAU) - clausen2(x)).abs() < 1e-13);
        }
    }

    #[test]
    fn maximum_at_pi_over_three() {
        // Cl₂ peaks at π/3 with value 1.01494160640965362502...
        assert!((clausen2(PI / 3.0) - 1.014_941_606_409_653_6).abs() < 1e-14);
    }

    #[test]
    fn zeta_values() {
        assert!((zeta_even(7) - 1.000_061_248_135_058_7).abs() < 1e-15);
        assert!((zeta_even(1) - 1.644_934_066_848_226_4).abs() < 1e-15);
    }
}
