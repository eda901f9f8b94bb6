//! Young functions, Orlicz modulars and Luxemburg norms.
//!
//! A Young function `Φ` enters the construction through the gap function
//! `Ψ(t) = t log(e+t) / Φ(t)`, which fixes the number of atom pairs
//! `n = ⌊Ψ(N / log N)⌋`, and through the modular `∫ Φ(|Ω|) dθ` of the
//! resulting kernel.

use std::f64::consts::E;

use crate::circle::ArcFunction;
use crate::{Error, Result};

/// Monotone piecewise-cubic (Fritsch–Carlson) interpolant of tabulated
/// `(t, Φ(t))` pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct YoungTable {
    t: Vec<f64>,
    y: Vec<f64>,
    slope: Vec<f64>,
}

impl YoungTable {
    /// Accepts knots starting at `(0, 0)` with strictly increasing `t`,
    /// nondecreasing values and nondecreasing secant slopes.
    pub fn new(points: &[(f64, f64)]) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::Domain("a Young table needs at least two knots".into()));
        }
        if points[0] != (0.0, 0.0) {
            return Err(Error::Domain(format!(
                "the first knot must be (0, 0), got {:?}",
                points[0]
            )));
        }
        let (t, y): (Vec<f64>, Vec<f64>) = points.iter().copied().unzip();
        if t.iter().chain(&y).any(|v| !v.is_finite()) {
            return Err(Error::Domain("table entries must be finite".into()));
        }
        let mut secants = Vec::with_capacity(t.len() - 1);
        for i in 0..t.len() - 1 {
            let h = t[i + 1] - t[i];
            if !(h > 0.0) {
                return Err(Error::Domain(format!("knots must increase, t[{}] = {}", i + 1, t[i + 1])));
            }
            secants.push((y[i + 1] - y[i]) / h);
        }
        if secants[0] < 0.0 {
            return Err(Error::Domain("table values must be nondecreasing".into()));
        }
        if let Some(i) = secants.windows(2).position(|w| w[1] < w[0]) {
            return Err(Error::Domain(format!(
                "table is not convex at knot t = {}: slope {} follows {}",
                t[i + 1],
                secants[i + 1],
                secants[i]
            )));
        }
        let slope = pchip_slopes(&t, &secants);
        Ok(Self { t, y, slope })
    }

    pub fn last_knot(&self) -> f64 {
        *self.t.last().unwrap()
    }

    fn locate(&self, x: f64) -> Result<usize> {
        if x > self.last_knot() {
            return Err(Error::Domain(format!(
                "t = {x} lies beyond the last table knot {}",
                self.last_knot()
            )));
        }
        Ok(self.t.partition_point(|&k| k <= x).clamp(1, self.t.len() - 1) - 1)
    }

    fn eval(&self, x: f64) -> Result<f64> {
        let i = self.locate(x)?;
        let h = self.t[i + 1] - self.t[i];
        let s = (x - self.t[i]) / h;
        let (h00, h10) = ((1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s), s * (1.0 - s) * (1.0 - s));
        let (h01, h11) = (s * s * (3.0 - 2.0 * s), s * s * (s - 1.0));
        Ok(h00 * self.y[i] + h10 * h * self.slope[i] + h01 * self.y[i + 1] + h11 * h * self.slope[i + 1])
    }

    fn derivative(&self, x: f64) -> Result<f64> {
        let i = self.locate(x)?;
        let h = self.t[i + 1] - self.t[i];
        let s = (x - self.t[i]) / h;
        let dy = (self.y[i + 1] - self.y[i]) / h;
        Ok(6.0 * s * (1.0 - s) * dy
            + (1.0 - 4.0 * s + 3.0 * s * s) * self.slope[i]
            + (3.0 * s * s - 2.0 * s) * self.slope[i + 1])
    }
}

fn pchip_slopes(t: &[f64], secants: &[f64]) -> Vec<f64> {
    let n = t.len();
    let h: Vec<f64> = t.windows(2).map(|w| w[1] - w[0]).collect();
    let mut m = vec![0.0; n];
    if n == 2 {
        m[0] = secants[0];
        m[1] = secants[0];
        return m;
    }
    for i in 1..n - 1 {
        let (d0, d1) = (secants[i - 1], secants[i]);
        if d0 * d1 > 0.0 {
            let w1 = 2.0 * h[i] + h[i - 1];
            let w2 = h[i] + 2.0 * h[i - 1];
            m[i] = (w1 + w2) / (w1 / d0 + w2 / d1);
        }
    }
    let edge = |h0: f64, h1: f64, d0: f64, d1: f64| {
        let e = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if e.signum() != d0.signum() || d0 == 0.0 {
            0.0
        } else if d0.signum() != d1.signum() && e.abs() > 3.0 * d0.abs() {
            3.0 * d0
        } else {
            e
        }
    };
    m[0] = edge(h[0], h[1], secants[0], secants[1]);
    m[n - 1] = edge(h[n - 2], h[n - 3], secants[n - 2], secants[n - 3]);
    m
}

/// The supported Young function families.
#[derive(Clone, Debug, PartialEq)]
pub enum YoungFunction {
    /// `Φ(t) = t (log(e+t))^β`.
    PowerLog { beta: f64 },
    /// `Φ(t) = t log(e+t) / log(e + log(e+t))`.
    LogQuotient,
    /// Interpolated user table.
    CustomTable(YoungTable),
}

impl YoungFunction {
    pub fn power_log(beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::Domain(format!("power_log needs β > 0, got {beta}")));
        }
        Ok(Self::PowerLog { beta })
    }

    pub fn custom_table(points: &[(f64, f64)]) -> Result<Self> {
        Ok(Self::CustomTable(YoungTable::new(points)?))
    }

    fn check_arg(t: f64) -> Result<()> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::Domain(format!("Φ is defined on [0, ∞), got t = {t}")));
        }
        Ok(())
    }

    /// `Φ(t)`.
    pub fn phi(&self, t: f64) -> Result<f64> {
        Self::check_arg(t)?;
        if t == 0.0 {
            return Ok(0.0);
        }
        Ok(match self {
            Self::PowerLog { beta } => t * (E + t).ln().powf(*beta),
            Self::LogQuotient => {
                let l = (E + t).ln();
                t * l / (E + l).ln()
            }
            Self::CustomTable(table) => table.eval(t)?,
        })
    }

    /// Right derivative `φ(t) = Φ'(t)`.
    pub fn density(&self, t: f64) -> Result<f64> {
        Self::check_arg(t)?;
        Ok(match self {
            Self::PowerLog { beta } => {
                let l = (E + t).ln();
                l.powf(*beta) + beta * t * l.powf(beta - 1.0) / (E + t)
            }
            Self::LogQuotient => {
                let l = (E + t).ln();
                let m = (E + l).ln();
                (l + t / (E + t)) / m - t * l / (m * m * (E + l) * (E + t))
            }
            Self::CustomTable(table) => table.derivative(t)?,
        })
    }

    /// `Ψ(t) = t log(e+t) / Φ(t)`.
    pub fn psi(&self, t: f64) -> Result<f64> {
        if !(t > 0.0) {
            return Err(Error::Domain(format!("Ψ needs t > 0, got {t}")));
        }
        let phi = self.phi(t)?;
        if phi == 0.0 {
            return Err(Error::Domain(format!("Φ({t}) = 0, Ψ undefined")));
        }
        Ok(t * (E + t).ln() / phi)
    }

    /// Checks convexity and growth on the geometric grid `2^-10, …, 2^40`
    /// (truncated at the last knot of a table).
    pub fn check_invariants(&self) -> Result<()> {
        if self.phi(0.0)? != 0.0 {
            return Err(Error::Invariant("Φ(0) must vanish".into()));
        }
        let top = match self {
            Self::CustomTable(table) => table.last_knot(),
            _ => 2f64.powi(40),
        };
        let grid: Vec<f64> = (-10..=40).map(|e| 2f64.powi(e)).take_while(|&t| t <= top).collect();
        if grid.len() < 2 {
            return Err(Error::Invariant("table too short to check".into()));
        }
        for w in grid.windows(2) {
            let (a, b) = (w[0], w[1]);
            let (fa, fb) = (self.phi(a)?, self.phi(b)?);
            if self.phi(0.5 * (a + b))? > 0.5 * (fa + fb) + 1e-12 * fb {
                return Err(Error::Invariant(format!("Φ is not midpoint convex on [{a}, {b}]")));
            }
            if fb / b < fa / a * (1.0 - 1e-12) {
                return Err(Error::Invariant(format!("Φ(t)/t decreases on [{a}, {b}]")));
            }
        }
        let last = *grid.last().unwrap();
        if last > 1.0 && self.phi(last)? / last <= self.phi(1.0)? {
            return Err(Error::Invariant("Φ(t)/t does not grow".into()));
        }
        Ok(())
    }

    /// Short label such as `power_log:0.5`.
    pub fn label(&self) -> String {
        match self {
            Self::PowerLog { beta } => format!("power_log:{beta}"),
            Self::LogQuotient => "log_quotient".into(),
            Self::CustomTable(_) => "custom_table".into(),
        }
    }
}

pub fn eval_phi(yf: &YoungFunction, t: f64) -> Result<f64> {
    yf.phi(t)
}

pub fn eval_psi(yf: &YoungFunction, t: f64) -> Result<f64> {
    yf.psi(t)
}

/// `∫ Φ(|f|) dθ = Σ Φ(|c_i|) len_i`.
pub fn modular(yf: &YoungFunction, f: &ArcFunction) -> Result<f64> {
    f.pieces()
        .iter()
        .map(|p| Ok(yf.phi(p.coeff.abs())? * p.arc.length()))
        .sum()
}

fn scaled_modular(yf: &YoungFunction, f: &ArcFunction, k: f64) -> Result<f64> {
    f.pieces()
        .iter()
        .map(|p| Ok(yf.phi(p.coeff.abs() / k)? * p.arc.length()))
        .sum()
}

const BISECTION_CAP: usize = 200;

/// `inf{k > 0 : ∫ Φ(|f|/k) ≤ 1}`, to relative tolerance `tol`.
///
/// The returned value always satisfies the constraint.
pub fn luxemburg_norm(yf: &YoungFunction, f: &ArcFunction, tol: f64) -> Result<f64> {
    if !(tol > 0.0 && tol <= 1e-3) {
        return Err(Error::Domain(format!("tol must lie in (0, 1e-3], got {tol}")));
    }
    if f.is_empty() {
        return Ok(0.0);
    }
    let start = f.max_abs();
    let (mut lo, mut hi) = (start, start);
    let mut steps = 0;
    while scaled_modular(yf, f, lo)? <= 1.0 {
        lo *= 0.5;
        steps += 1;
        if steps > 2000 {
            return Err(Error::Numeric(format!("no lower bracket found, reached k = {lo:e}")));
        }
    }
    while scaled_modular(yf, f, hi)? > 1.0 {
        hi *= 2.0;
        steps += 1;
        if steps > 2000 {
            return Err(Error::Numeric(format!("no upper bracket found, reached k = {hi:e}")));
        }
    }
    for _ in 0..BISECTION_CAP {
        if hi - lo <= tol * hi {
            return Ok(hi);
        }
        let mid = (lo * hi).sqrt();
        if scaled_modular(yf, f, mid)? > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::Numeric(format!(
        "bisection stalled after {BISECTION_CAP} steps with bracket [{lo:e}, {hi:e}]"
    )))
}

/// Whether `∫Φ(|f|) < ‖f‖_Φ ⇒ ‖f‖_Φ ≤ 1 + tol` holds for this `f`.
pub fn lemma_orlicz_check(yf: &YoungFunction, f: &ArcFunction, tol: f64) -> Result<bool> {
    let m = modular(yf, f)?;
    let norm = luxemburg_norm(yf, f, tol)?;
    Ok(!(m < norm) || norm <= 1.0 + tol)
}

/// Size parameters of one construction: arcs of length `1/N`, `2n` atoms.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScheduleParams {
    pub big_n: f64,
    pub n: usize,
}

/// `n = ⌊Ψ(N / log N)⌋`.
pub fn schedule_n(yf: &YoungFunction, big_n: f64) -> Result<ScheduleParams> {
    if !(big_n >= 100.0) || !big_n.is_finite() {
        return Err(Error::Domain(format!("N must be at least 100, got {big_n}")));
    }
    let psi = yf.psi(big_n / big_n.ln())?;
    if psi < 1.0 {
        return Err(Error::Parameter(format!(
            "schedule degenerate; increase N (Ψ(N/log N) = {psi})"
        )));
    }
    Ok(ScheduleParams { big_n, n: psi.floor() as usize })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle::{half_split, Angle, Arc, Piece};
    use std::f64::consts::{PI, TAU};

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(1e-300)
    }

    #[test]
    fn phi_examples() {
        let pl1 = YoungFunction::power_log(1.0).unwrap();
        let half = YoungFunction::power_log(0.5).unwrap();
        let t = E * E - E;
        assert_eq!(pl1.phi(0.0).unwrap(), 0.0);
        assert!(close(pl1.phi(t).unwrap(), 2.0 * t, 1e-15));
        assert!(close(half.phi(t).unwrap(), t * 2f64.sqrt(), 1e-15));
        assert!(pl1.phi(-1.0).is_err());
        assert!(YoungFunction::power_log(-1.0).is_err());
        assert!(YoungFunction::power_log(0.0).is_err());
    }

    #[test]
    fn psi_examples() {
        let pl1 = YoungFunction::power_log(1.0).unwrap();
        let half = YoungFunction::power_log(0.5).unwrap();
        for t in [1e-3, 1.0, 144.77, 1e12] {
            assert_eq!(pl1.psi(t).unwrap(), 1.0);
        }
        assert!(close(half.psi(100f64.exp() - E).unwrap(), 10.0, 1e-12));
        assert!(half.psi(0.0).is_err());
    }

    #[test]
    fn density_matches_finite_differences() {
        for yf in [
            YoungFunction::power_log(0.5).unwrap(),
            YoungFunction::power_log(2.0).unwrap(),
            YoungFunction::LogQuotient,
        ] {
            for t in [0.3, 2.0, 50.0, 1e4] {
                let h = 1e-6 * t;
                let fd = (yf.phi(t + h).unwrap() - yf.phi(t - h).unwrap()) / (2.0 * h);
                assert!(close(yf.density(t).unwrap(), fd, 1e-7), "{} at {t}", yf.label());
            }
        }
    }

    #[test]
    fn families_satisfy_invariants() {
        for beta in [0.25, 0.5, 1.0, 2.0] {
            YoungFunction::power_log(beta).unwrap().check_invariants().unwrap();
        }
        YoungFunction::LogQuotient.check_invariants().unwrap();
    }

    #[test]
    fn custom_table_interpolates_and_validates() {
        let pts: Vec<(f64, f64)> = (0..=20)
            .map(|i| {
                let t = i as f64 * 0.5;
                (t, t * (E + t).ln())
            })
            .collect();
        let yf = YoungFunction::custom_table(&pts).unwrap();
        assert_eq!(yf.phi(0.0).unwrap(), 0.0);
        assert!(close(yf.phi(2.0).unwrap(), 2.0 * (E + 2.0).ln(), 1e-14));
        let exact = 3.3 * (E + 3.3).ln();
        assert!(close(yf.phi(3.3).unwrap(), exact, 1e-3));
        assert!(yf.phi(10.5).is_err());
        yf.check_invariants().unwrap();
        let mut bad = pts.clone();
        bad[5].1 += 1.0;
        assert!(YoungFunction::custom_table(&bad).is_err());
        assert!(YoungFunction::custom_table(&[(1.0, 1.0), (2.0, 3.0)]).is_err());
        // monotone interpolation
        let mut prev = 0.0;
        for j in 0..=1000 {
            let v = yf.phi(j as f64 * 0.01).unwrap();
            assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn modular_examples() {
        let pl1 = YoungFunction::power_log(1.0).unwrap();
        assert_eq!(modular(&pl1, &ArcFunction::zero()).unwrap(), 0.0);
        let m = modular(&pl1, &half_split()).unwrap();
        assert!(close(m, TAU * (E + 1.0).ln(), 1e-14));
        assert!((m - 8.251_466_5).abs() < 1e-7);
    }

    #[test]
    fn luxemburg_examples() {
        let pl1 = YoungFunction::power_log(1.0).unwrap();
        assert_eq!(luxemburg_norm(&pl1, &ArcFunction::zero(), 1e-6).unwrap(), 0.0);
        let f = half_split();
        let k = luxemburg_norm(&pl1, &f, 1e-9).unwrap();
        assert!((k - 6.623).abs() < 1e-3, "{k}");
        let k2 = luxemburg_norm(&pl1, &f.scaled(2.0), 1e-9).unwrap();
        assert!(close(k2, 2.0 * k, 2e-9));
        assert!(luxemburg_norm(&pl1, &f, 0.0).is_err());
        assert!(luxemburg_norm(&pl1, &f, 0.1).is_err());
    }

    #[test]
    fn lemma_examples() {
        let pl1 = YoungFunction::power_log(1.0).unwrap();
        assert!(lemma_orlicz_check(&pl1, &ArcFunction::zero(), 1e-6).unwrap());
        assert!(lemma_orlicz_check(&pl1, &half_split(), 1e-6).unwrap());
        let small = ArcFunction::new(vec![Piece {
            arc: Arc::new(Angle::new(1.0), 0.1).unwrap(),
            coeff: 0.5,
        }])
        .unwrap();
        assert!(lemma_orlicz_check(&pl1, &small, 1e-6).unwrap());
        let _ = PI;
    }

    #[test]
    fn schedule_examples() {
        let half = YoungFunction::power_log(0.5).unwrap();
        let pl1 = YoungFunction::power_log(1.0).unwrap();
        assert_eq!(schedule_n(&half, 1e6).unwrap().n, 3);
        assert_eq!(schedule_n(&half, 1e3).unwrap().n, 2);
        assert_eq!(schedule_n(&pl1, 1e6).unwrap().n, 1);
        assert!(schedule_n(&half, 50.0).is_err());
        let steep = YoungFunction::power_log(3.0).unwrap();
        let err = schedule_n(&steep, 1e6).unwrap_err();
        assert!(err.to_string().contains("schedule degenerate"), "{err}");
    }
}
