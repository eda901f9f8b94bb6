//! Rudin–Shapiro signs and norms of trigonometric polynomials
//! `P(x) = Σ_{k=1}^n a_k e^{2πikx}` on `[0, 1)`.
//!
//! Norms are computed from `M = oversample·n` equispaced samples obtained by
//! one FFT. For even integer `p` the sample mean of `|P|^p` is the exact
//! integral as soon as `M > (p/2)·n`; other exponents are approximations.

use std::f64::consts::PI;

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use crate::circle::SignSequence;
use crate::{Error, Result};

/// Oversampling used when no explicit factor is given; exact for `p ≤ 16`
/// even.
pub const DEFAULT_OVERSAMPLE: usize = 8;

/// Real coefficients `a_1..a_n` at frequencies `1..n`.
#[derive(Clone, Debug, PartialEq)]
pub struct TrigPolynomial {
    coeffs: Vec<f64>,
}

impl TrigPolynomial {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Domain("a trigonometric polynomial needs at least one coefficient".into()));
        }
        if coeffs.iter().any(|a| !a.is_finite()) {
            return Err(Error::Domain("coefficients must be finite".into()));
        }
        Ok(Self { coeffs })
    }

    pub fn from_signs(signs: &SignSequence) -> Result<Self> {
        Self::new(signs.as_slice().iter().map(|&e| f64::from(e)).collect())
    }

    /// The Dirichlet-type polynomial with all coefficients 1.
    pub fn dirichlet(n: usize) -> Result<Self> {
        Self::new(vec![1.0; n])
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    /// `P(j/M)` for `j = 0..M`.
    fn samples(&self, m: usize) -> Vec<Complex64> {
        debug_assert!(m > self.degree());
        let mut buf = vec![Complex64::new(0.0, 0.0); m];
        for (k, &a) in self.coeffs.iter().enumerate() {
            buf[k + 1] = Complex64::new(a, 0.0);
        }
        // The inverse transform carries the `e^{+2πi jk/M}` sign convention.
        FftPlanner::new().plan_fft_inverse(m).process(&mut buf);
        buf
    }
}

/// First `n` terms of the Rudin–Shapiro sequence: `a_0 = 1`, `a_{2k} = a_k`,
/// `a_{2k+1} = (-1)^k a_k`.
pub fn rudin_shapiro(n: usize) -> SignSequence {
    let mut a: Vec<i8> = Vec::with_capacity(n);
    for i in 0..n {
        let v = if i == 0 {
            1
        } else if i % 2 == 0 {
            a[i / 2]
        } else {
            let k = i / 2;
            if k % 2 == 0 { a[k] } else { -a[k] }
        };
        a.push(v);
    }
    SignSequence::new(a).expect("Rudin–Shapiro terms are ±1")
}

/// `(mean_j |P(j/M)|^p)^{1/p}` with `M = oversample·n`.
pub fn lp_norm(poly: &TrigPolynomial, p: f64, oversample: usize) -> Result<f64> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::Domain(format!("p must be a finite exponent ≥ 1, got {p}")));
    }
    if oversample < 2 {
        return Err(Error::Parameter(format!("oversample must be at least 2, got {oversample}")));
    }
    let m = oversample * poly.degree();
    let samples = poly.samples(m);
    let sum: f64 = if p == 2.0 {
        samples.iter().map(|z| z.norm_sqr()).sum()
    } else {
        samples.iter().map(|z| z.norm_sqr().powf(0.5 * p)).sum()
    };
    Ok((sum / m as f64).powf(1.0 / p))
}

/// Grid maximum of `|P|` and the Bernstein slack bounding the gap to the true
/// supremum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SupEstimate {
    pub grid_max: f64,
    pub slack: f64,
}

impl SupEstimate {
    /// Guaranteed upper bound `grid_max + slack` on `‖P‖_∞`.
    pub fn bound(&self) -> f64 {
        self.grid_max + self.slack
    }

    // Every point lies within 1/(2M) of the grid and |P'| ≤ 2πn‖P‖_∞, so
    // ‖P‖_∞ ≤ grid_max / (1 - πn/M).
    fn from_grid(grid_max: f64, n: usize, m: usize) -> Self {
        let q = PI * n as f64 / m as f64;
        Self { grid_max, slack: grid_max * q / (1.0 - q) }
    }
}

fn check_sup_oversample(oversample: usize) -> Result<()> {
    if oversample < 16 {
        return Err(Error::Parameter(format!("sup_norm needs oversample ≥ 16, got {oversample}")));
    }
    Ok(())
}

/// `max_j |P(j/M)|` with `M = oversample·n`, plus slack.
pub fn sup_norm(poly: &TrigPolynomial, oversample: usize) -> Result<SupEstimate> {
    check_sup_oversample(oversample)?;
    let m = oversample * poly.degree();
    let grid_max = poly.samples(m).iter().map(|z| z.norm()).fold(0.0, f64::max);
    Ok(SupEstimate::from_grid(grid_max, poly.degree(), m))
}

const LANES: usize = 8;
const TILE: usize = 512;

/// Sup estimates of the partial Rudin–Shapiro polynomials `P_n`,
/// `n = 1..=n_max`, each on a grid of at least `oversample·n` points.
///
/// Consecutive degrees `lo..=hi` (with `hi ≈ 5lo/4`) share a grid of
/// `oversample·hi` points on which terms are added one at a time, so the
/// sweep costs about `oversample·n_max²/2` complex updates instead of one FFT
/// per degree.
pub fn rudin_shapiro_sup_sweep(n_max: usize, oversample: usize) -> Result<Vec<SupEstimate>> {
    check_sup_oversample(oversample)?;
    let signs = rudin_shapiro(n_max);
    let mut out = Vec::with_capacity(n_max);
    let mut lo = 1;
    while lo <= n_max {
        let hi = (lo + lo.div_ceil(4)).min(n_max);
        block_sweep(&signs, lo, hi, oversample * hi, &mut out);
        lo = hi + 1;
    }
    Ok(out)
}

fn block_sweep(signs: &SignSequence, lo: usize, hi: usize, m: usize, out: &mut Vec<SupEstimate>) {
    // Partial sum S = P_{lo-1} on the grid.
    let (mut sr, mut si): (Vec<f64>, Vec<f64>) = if lo > 1 {
        let head: Vec<f64> = (1..lo).map(|k| signs.get(k)).collect();
        let s = TrigPolynomial { coeffs: head }.samples(m);
        s.iter().map(|z| (z.re, z.im)).unzip()
    } else {
        (vec![0.0; m], vec![0.0; m])
    };
    // E_j = e^{2πi j·lo/M}, advanced by W_j = e^{2πi j/M}.
    let phase = |j: usize, k: usize| {
        let t = 2.0 * PI * ((j * k) % m) as f64 / m as f64;
        (t.cos(), t.sin())
    };
    let (mut er, mut ei): (Vec<f64>, Vec<f64>) = (0..m).map(|j| phase(j, lo)).unzip();
    let (wr, wi): (Vec<f64>, Vec<f64>) = (0..m).map(|j| phase(j, 1)).unzip();
    // Pad to whole lanes with points that stay at zero.
    let padded = m.next_multiple_of(LANES);
    for v in [&mut sr, &mut si, &mut er, &mut ei] {
        v.resize(padded, 0.0);
    }
    let (mut wr, mut wi) = (wr, wi);
    wr.resize(padded, 0.0);
    wi.resize(padded, 0.0);
    // Tiles of the grid run through every degree of the block while they sit
    // in cache; `best[k - lo]` collects the running maxima.
    let mut best = vec![0.0f64; hi - lo + 1];
    let tiles = sr
        .chunks_mut(TILE)
        .zip(si.chunks_mut(TILE))
        .zip(er.chunks_mut(TILE).zip(ei.chunks_mut(TILE)))
        .zip(wr.chunks(TILE).zip(wi.chunks(TILE)));
    for (((sr, si), (er, ei)), (wr, wi)) in tiles {
        for (k, best) in (lo..=hi).zip(best.iter_mut()) {
            let a = signs.get(k);
            let mut lanes = [0.0f64; LANES];
            let rows = sr
                .chunks_exact_mut(LANES)
                .zip(si.chunks_exact_mut(LANES))
                .zip(er.chunks_exact_mut(LANES).zip(ei.chunks_exact_mut(LANES)))
                .zip(wr.chunks_exact(LANES).zip(wi.chunks_exact(LANES)));
            for (((sr, si), (er, ei)), (wr, wi)) in rows {
                for l in 0..LANES {
                    let (xr, xi) = (er[l], ei[l]);
                    let (nr, ni) = (sr[l] + a * xr, si[l] + a * xi);
                    sr[l] = nr;
                    si[l] = ni;
                    er[l] = xr * wr[l] - xi * wi[l];
                    ei[l] = xr * wi[l] + xi * wr[l];
                    let v = nr * nr + ni * ni;
                    lanes[l] = if v > lanes[l] { v } else { lanes[l] };
                }
            }
            *best = lanes.iter().copied().fold(*best, f64::max);
        }
    }
    for (k, b) in (lo..=hi).zip(best) {
        out.push(SupEstimate::from_grid(b.sqrt(), k, m));
    }
}

/// `‖Σ_{k=1}^n e^{2πikx}‖_{L^p}` with the default oversampling.
pub fn dirichlet_norm(n: usize, p: f64) -> Result<f64> {
    dirichlet_norm_with(n, p, DEFAULT_OVERSAMPLE)
}

pub fn dirichlet_norm_with(n: usize, p: f64, oversample: usize) -> Result<f64> {
    if !(p > 1.0) {
        return Err(Error::Domain(format!("dirichlet_norm needs p > 1, got {p}")));
    }
    lp_norm(&TrigPolynomial::dirichlet(n)?, p, oversample)
}

/// `‖Σ e^{2πikx}‖_p / ‖Σ ε_k e^{2πikx}‖_p` with Rudin–Shapiro `ε`.
pub fn unconditionality_ratio(n: usize, p: f64) -> Result<f64> {
    unconditionality_ratio_with(n, p, DEFAULT_OVERSAMPLE)
}

pub fn unconditionality_ratio_with(n: usize, p: f64, oversample: usize) -> Result<f64> {
    if !(p > 2.0) {
        return Err(Error::Domain(format!("unconditionality_ratio needs p > 2, got {p}")));
    }
    let signed = TrigPolynomial::from_signs(&rudin_shapiro(n))?;
    Ok(dirichlet_norm_with(n, p, oversample)? / lp_norm(&signed, p, oversample)?)
}

/// Least-squares line through `(log n, log ratio)`.
#[derive(Clone, Debug, PartialEq)]
pub struct NormFit {
    pub samples: Vec<(usize, f64)>,
    pub slope: f64,
    pub intercept: f64,
    /// Largest absolute deviation of a sample from the line, in log units.
    pub residual: f64,
}

pub fn fit_exponent(samples: &[(usize, f64)]) -> Result<NormFit> {
    if samples.len() < 3 {
        return Err(Error::Domain(format!("a fit needs at least 3 samples, got {}", samples.len())));
    }
    if samples.iter().any(|&(n, r)| n == 0 || !(r > 0.0) || !r.is_finite()) {
        return Err(Error::Domain("samples need n ≥ 1 and finite positive ratios".into()));
    }
    if samples.iter().all(|s| s.0 == samples[0].0) {
        return Err(Error::Domain("all samples share the same n".into()));
    }
    if samples.windows(2).any(|w| w[1].0 <= w[0].0) {
        return Err(Error::Domain("sample n must increase strictly".into()));
    }
    let pts: Vec<(f64, f64)> = samples.iter().map(|&(n, r)| ((n as f64).ln(), r.ln())).collect();
    let len = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / len;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / len;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = pts
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).abs())
        .fold(0.0, f64::max);
    Ok(NormFit { samples: samples.to_vec(), slope, intercept, residual })
}
