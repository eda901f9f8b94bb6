//! `∫_A log(1/|cos(θ - ξ)|) dθ` over a single arc `A`.
//!
//! The integrand `g(x) = -log|cos x|` (with `x = θ - ξ`) is π-periodic, vanishes
//! quadratically at `x ≡ 0` and has a logarithmic singularity at `x ≡ π/2`.
//! Every route first moves the arc into local coordinates: the midpoint
//! offset `x0 ∈ (-π/2, π/2]` and its distance `d = π/2 - |x0|` to the
//! singular direction, both computed from double-double angles so that arcs
//! far shorter than the `f64` spacing of `π` keep their exact position.

use std::f64::consts::{FRAC_PI_4, PI};
use std::sync::OnceLock;

use super::clausen::clausen_tail;
use super::quadrature::integrate;
use crate::circle::{Angle, Arc, DoubleDouble};
use crate::Result;

/// Arc length below which [`Method::Auto`] uses the short expansions.
pub const TINY_ARC: f64 = 1e-8;

/// Evaluation route for [`arc_log_integral`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Method {
    /// Exact antiderivatives: midpoint Taylor series away from the singular
    /// direction, Clausen primitive with the logarithm split off near it.
    ClosedForm,
    /// Adaptive Gauss–Kronrod with the logarithmic singularity subtracted.
    Quadrature { tol: f64 },
    /// Closed form, or the leading-order expansion for arcs shorter than
    /// [`TINY_ARC`].
    Auto,
    /// Leading-order expansion regardless of length.
    Tiny,
}

/// Arc in coordinates relative to the evaluation direction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct LocalArc {
    /// Half length.
    pub h: f64,
    /// Midpoint offset reduced mod π into `(-π/2, π/2]`.
    pub x0: f64,
    /// `π/2 - |x0|`, accurate to full relative precision.
    pub d: f64,
}

impl LocalArc {
    pub fn new(arc: &Arc, xi: Angle) -> Self {
        let mut x = arc.center().diff_dd(xi);
        let half_pi = DoubleDouble::FRAC_PI_2;
        if x.gt(half_pi) {
            x = x.sub(DoubleDouble::PI);
        } else if !x.gt(half_pi.neg()) {
            x = x.add(DoubleDouble::PI);
        }
        let d = half_pi.sub(x.abs()).to_f64().max(0.0);
        Self { h: arc.half_length(), x0: x.to_f64(), d }
    }

    /// `tan(x0)` and `g(x0)`, evaluated through `d` near the singular direction.
    fn tan_and_g(&self) -> (f64, f64) {
        if self.x0.abs() <= FRAC_PI_4 {
            let s = self.x0.sin();
            (self.x0.tan(), -0.5 * (-s * s).ln_1p())
        } else {
            let (sd, cd) = self.d.sin_cos();
            ((cd / sd).copysign(self.x0), -sd.ln())
        }
    }

    /// Signed offset `v` of the midpoint from the nearest singular direction.
    fn sigma(&self) -> f64 {
        if self.x0 >= 0.0 {
            -self.d
        } else {
            self.d
        }
    }
}

/// `∫_A log(1/|⟨e^{iξ}, e^{iθ}⟩|) dθ`.
pub fn arc_log_integral(arc: &Arc, xi: Angle, method: Method) -> Result<f64> {
    let loc = LocalArc::new(arc, xi);
    match method {
        Method::ClosedForm => Ok(closed_form(&loc)),
        Method::Quadrature { tol } => quadrature(&loc, tol),
        Method::Auto => Ok(auto(&loc)),
        Method::Tiny => Ok(tiny(&loc)),
    }
}

#[inline]
pub(crate) fn auto(loc: &LocalArc) -> f64 {
    if 2.0 * loc.h < TINY_ARC {
        tiny(loc)
    } else {
        closed_form(loc)
    }
}

/// `u - u log u`, the primitive of `-log u` vanishing at 0.
#[inline]
fn log_primitive(u: f64) -> f64 {
    if u == 0.0 {
        0.0
    } else {
        u - u * u.ln()
    }
}

/// `∫_a^b -log u du` for `0 ≤ a < b`, `b - a = w`, free of cancellation
/// between the two endpoint values.
#[inline]
fn log_primitive_delta(a: f64, w: f64) -> f64 {
    if a == 0.0 {
        return log_primitive(w);
    }
    let b = a + w;
    w - w * b.ln() - a * (w / a).ln_1p()
}

/// `∫_0^u -log sin v dv = u - u log u + ½·tail(2u)` for `0 ≤ u < π`.
#[inline]
fn sin_log_regular(u: f64) -> f64 {
    if u == 0.0 {
        0.0
    } else {
        0.5 * clausen_tail(2.0 * u)
    }
}

pub(crate) fn closed_form(loc: &LocalArc) -> f64 {
    let LocalArc { h, d, .. } = *loc;
    if h <= 0.25 * d {
        return midpoint_series(loc, usize::MAX);
    }
    if d < h {
        // The singular direction splits the arc into two pieces starting at it.
        let (u1, u2) = (h - d, h + d);
        log_primitive(u1) + sin_log_regular(u1) + log_primitive(u2) + sin_log_regular(u2)
    } else {
        let (a, w) = (d - h, 2.0 * h);
        log_primitive_delta(a, w) + sin_log_regular(a + w) - sin_log_regular(a)
    }
}

/// Even Taylor coefficients `g^{(j)}(x)/(j+1)!` as polynomials in `tan² x`.
///
/// With `P_1(t) = t` and `P_{j+1} = (1 + t²) P_j'`, `g^{(j)}(x) = P_j(tan x)`;
/// for even `j` only even powers of `t` occur and all coefficients are
/// nonnegative.
fn taylor_tables() -> &'static [Vec<f64>] {
    const MAX_ORDER: usize = 80;
    static TABLES: OnceLock<Vec<Vec<f64>>> = OnceLock::new();
    TABLES.get_or_init(|| {
        // q[i] is the coefficient of t^i in P_j/(j+1)!.
        let mut q = vec![0.0, 0.5];
        let mut even = vec![vec![]];
        for j in 1..MAX_ORDER {
            let mut next = vec![0.0; q.len() + 1];
            for (i, &c) in q.iter().enumerate().skip(1) {
                let dc = i as f64 * c / (j + 2) as f64;
                next[i - 1] += dc;
                next[i + 1] += dc;
            }
            q = next;
            if (j + 1) % 2 == 0 {
                even.push(q.iter().step_by(2).copied().collect());
            }
        }
        even
    })
}

/// `2h g(x0) + 2 Σ_{j even ≥ 2} g^{(j)}(x0) h^{j+1}/(j+1)!`, stopping after
/// `max_terms` corrections or once they no longer matter. Converges for
/// `h < d`; every term is nonnegative.
fn midpoint_series(loc: &LocalArc, max_terms: usize) -> f64 {
    let (t, g0) = loc.tan_and_g();
    let h = loc.h;
    let s = (t * h) * (t * h);
    let q = h * h;
    let mut sum = g0;
    for (m, coeffs) in taylor_tables().iter().enumerate().skip(1).take(max_terms) {
        // Σ_i c_i t^{2i} h^{2m} = Σ_i c_i s^i q^{m-i}
        let mut term = 0.0;
        let mut sp = 1.0;
        for (i, &c) in coeffs.iter().enumerate() {
            term += c * sp * q.powi((m - i) as i32);
            sp *= s;
        }
        sum += term;
        if term <= 1e-17 * sum {
            break;
        }
    }
    2.0 * h * sum
}

/// Leading-order expansions for short arcs: two corrections of the midpoint
/// series away from the singular direction, `u - u log u + u³/18` near it.
pub(crate) fn tiny(loc: &LocalArc) -> f64 {
    let LocalArc { h, d, .. } = *loc;
    if h <= 0.01 * d {
        return midpoint_series(loc, 2);
    }
    let cube = |u: f64| u * u * u / 18.0;
    if d < h {
        let (u1, u2) = (h - d, h + d);
        log_primitive(u1) + log_primitive(u2) + cube(u1) + cube(u2)
    } else {
        let (a, w) = (d - h, 2.0 * h);
        log_primitive_delta(a, w) + cube(a + w) - cube(a)
    }
}

const QUAD_MAX_SEGMENTS: usize = 2000;

/// `ζ(2k)` for `k = 1..=12`.
#[allow(clippy::excessive_precision)]
const ZETA_EVEN: [f64; 12] = [
    1.6449340668482264365,
    1.0823232337111381915,
    1.0173430619844491397,
    1.0040773561979443394,
    1.0009945751278180853,
    1.0002460865533080483,
    1.0000612481350587048,
    1.0000152822594086519,
    1.0000038172932649998,
    1.0000009539620338728,
    1.0000002384505027277,
    1.0000000596081890513
,
];

/// `-log(sin v / v) = Σ ζ(2k)/k·(v/π)^{2k}`; the series keeps full relative
/// precision where `sin v / v` rounds to 1.
fn minus_log_sinc(v: f64) -> f64 {
    if v.abs() >= 1.0 {
        return -(v.sin() / v).ln();
    }
    let x = (v / PI) * (v / PI);
    let mut pow = x;
    let mut sum = 0.0;
    for k in 1..=40 {
        let zeta = match ZETA_EVEN.get(k - 1) {
            Some(&z) => z,
            None => 1.0 + 4f64.powi(-(k as i32)) + 9f64.powi(-(k as i32)),
        };
        let term = zeta / k as f64 * pow;
        sum += term;
        if term < 1e-18 * sum {
            break;
        }
        pow *= x;
    }
    sum
}

/// Quadrature oracle. Near the singular direction the integrand is written
/// as `-log|v| - log(sin v / v)` in the offset `v` from it; the first part is
/// integrated exactly, the second is smooth.
pub(crate) fn quadrature(loc: &LocalArc, tol: f64) -> Result<f64> {
    let LocalArc { h, x0, d } = *loc;
    if d - h < FRAC_PI_4 {
        let sigma = loc.sigma();
        let (a, b) = (sigma - h, sigma + h);
        if d <= 4.0 * h {
            let f_abs = |u: f64| if u == 0.0 { 0.0 } else { u - u * u.ln() };
            let singular = if a >= 0.0 {
                f_abs(b) - f_abs(a)
            } else if b <= 0.0 {
                f_abs(-a) - f_abs(-b)
            } else {
                f_abs(b) + f_abs(-a)
            };
            let smooth = integrate(
                minus_log_sinc,
                a,
                b,
                tol,
                QUAD_MAX_SEGMENTS,
            )?;
            Ok(singular + smooth.value)
        } else {
            // Offsets from the midpoint: `sigma ± h` may round to one float.
            let q = integrate(|t: f64| -(sigma + t).sin().abs().ln(), -h, h, tol, QUAD_MAX_SEGMENTS)?;
            Ok(q.value)
        }
    } else {
        let q = integrate(
            |t: f64| {
                let s = (x0 + t).sin();
                -0.5 * (-s * s).ln_1p()
            },
            -h,
            h,
            tol,
            QUAD_MAX_SEGMENTS,
        )?;
        Ok(q.value)
    }
}
