//! Grid estimates on a [`Construction`]: decay of single atoms away from their
//! direction, cancellation between paired atoms, the split
//! `K̂_{Ω_n}(x_{2k}) = D ε_k + δ_k`, and sampled profiles of `K̂` and `m`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, TAU};

use rayon::prelude::*;

use super::kernel::{khat_and_m, khat_unchecked, m_unchecked};
use crate::circle::{atom_sign, Angle, ArcFunction, Construction};
use crate::{Error, Result};

/// Sampled `K̂_{Ω_n}` and `m(Ω_n)` plus the special values `D`, `δ_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelProfile {
    pub grid: Vec<Angle>,
    pub khat: Vec<f64>,
    pub m: Vec<f64>,
    pub d: f64,
    pub delta: Vec<f64>,
    /// `max_k |δ_k| / |D|`.
    pub margin: f64,
}

impl KernelProfile {
    /// Grid estimate of `‖m(Ω_n)‖_∞` (a lower bound of the true supremum).
    pub fn sup_m(&self) -> f64 {
        self.m.iter().copied().fold(0.0, f64::max)
    }

    /// Largest violation of `|K̂| ≤ m` on the grid (nonpositive when it holds).
    pub fn majorant_excess(&self) -> f64 {
        self.khat
            .iter()
            .zip(&self.m)
            .map(|(k, m)| k.abs() - m)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// `D`, the cross-talk terms `δ_k` and `max_k |δ_k|/|D|`.
#[derive(Clone, Debug, PartialEq)]
pub struct DDelta {
    pub d: f64,
    /// Largest deviation of `K̂_{w_{2k}}(x_{2k})` from `D` over `k`.
    pub d_spread: f64,
    pub delta: Vec<f64>,
    pub margin: f64,
}

/// Uniform midpoint grid of the open window `(π/2, 3π/4)`.
pub fn window_grid(grid_size: usize) -> Vec<Angle> {
    (0..grid_size)
        .map(|j| Angle::new(FRAC_PI_2 + FRAC_PI_4 * (j as f64 + 0.5) / grid_size as f64))
        .collect()
}

/// Uniform grid `2πj/G` of the full circle.
pub fn circle_grid(grid_size: usize) -> Vec<Angle> {
    (0..grid_size)
        .map(|j| Angle::new(TAU * j as f64 / grid_size as f64))
        .collect()
}

fn check_index(cons: &Construction, k: usize, upper: usize, uses_log_n: bool) -> Result<()> {
    if k == 0 || k > upper {
        return Err(Error::Parameter(format!("index {k} outside 1..={upper}")));
    }
    if uses_log_n && cons.n() < 2 {
        return Err(Error::Parameter("log n vanishes for n = 1".into()));
    }
    Ok(())
}

/// `max_x m(w_k)(x) · log N / log n` over the window grid outside the
/// quarter-turn copies of `J_k`.
pub fn atom_decay_constant(cons: &Construction, k: usize, grid_size: usize) -> Result<f64> {
    check_index(cons, k, 2 * cons.n(), true)?;
    let w = cons.atom(k);
    let scale = cons.big_n().ln() / (cons.n() as f64).ln();
    let values: Vec<f64> = window_grid(grid_size)
        .into_par_iter()
        .filter(|&x| !cons.in_guard_zone(k, x))
        .map(|x| m_unchecked(w, x))
        .collect();
    if values.is_empty() {
        return Err(Error::Parameter("no grid point left outside the guard arcs".into()));
    }
    Ok(values.into_iter().fold(0.0, f64::max) * scale)
}

/// `max_x |K̂_{w_{2k}}(x) - K̂_{w_{2k-1}}(x)| · n log N · |x - x_{2k}|` over the
/// window grid outside the guard zones of both atoms.
pub fn pair_difference_constant(cons: &Construction, k: usize, grid_size: usize) -> Result<f64> {
    check_index(cons, k, cons.n(), false)?;
    let (even, odd) = (2 * k, 2 * k - 1);
    pair_difference_of(
        cons.atom(even),
        cons.atom(odd),
        cons.direction(even),
        |x| cons.in_guard_zone(even, x) || cons.in_guard_zone(odd, x),
        cons.n() as f64 * cons.big_n().ln(),
        grid_size,
    )
}

pub(crate) fn pair_difference_of<F>(
    w_even: &ArcFunction,
    w_odd: &ArcFunction,
    dir_even: Angle,
    excluded: F,
    scale: f64,
    grid_size: usize,
) -> Result<f64>
where
    F: Fn(Angle) -> bool + Sync,
{
    let values: Vec<f64> = window_grid(grid_size)
        .into_par_iter()
        .filter(|&x| !excluded(x))
        .map(|x| {
            let diff = khat_unchecked(w_even, x) - khat_unchecked(w_odd, x);
            diff.abs() * scale * x.chord(dir_even)
        })
        .collect();
    if values.is_empty() {
        return Err(Error::Parameter("no grid point left outside the guard arcs".into()));
    }
    Ok(values.into_iter().fold(0.0, f64::max))
}

/// Splits `K̂_{Ω_n}(x_{2k}) = D ε_k + δ_k`.
pub fn d_delta(cons: &Construction) -> Result<DDelta> {
    let n = cons.n();
    let ds: Vec<f64> = (1..=n)
        .map(|k| khat_unchecked(cons.atom(2 * k), cons.direction(2 * k)))
        .collect();
    let d = ds[0];
    let d_spread = ds.iter().map(|v| (v - d).abs()).fold(0.0, f64::max);
    if d_spread > 1e-8 {
        return Err(Error::Invariant(format!(
            "K̂_{{w_2k}}(x_2k) varies by {d_spread:e} across k; atoms are not congruent"
        )));
    }
    let delta: Vec<f64> = (1..=n)
        .into_par_iter()
        .map(|k| {
            let x = cons.direction(2 * k);
            (1..=2 * n)
                .filter(|&i| i != 2 * k)
                .map(|i| atom_sign(&cons.signs, i) * khat_unchecked(cons.atom(i), x))
                .sum()
        })
        .collect();
    let margin = delta.iter().map(|v: &f64| v.abs()).fold(0.0, f64::max) / d.abs();
    Ok(DDelta { d, d_spread, delta, margin })
}

fn sample(f: &ArcFunction, grid: &[Angle], parallel: bool) -> (Vec<f64>, Vec<f64>) {
    let pairs: Vec<(f64, f64)> = if parallel {
        grid.par_iter().map(|&x| khat_and_m(f, x)).collect()
    } else {
        grid.iter().map(|&x| khat_and_m(f, x)).collect()
    };
    pairs.into_iter().unzip()
}

/// Samples `K̂_{Ω_n}` and `m(Ω_n)` on the full-circle grid of `grid_size`
/// points.
pub fn profile(cons: &Construction, grid_size: usize) -> Result<KernelProfile> {
    profile_with(cons, grid_size, true)
}

/// [`profile`] evaluated on a single thread in grid order.
pub fn profile_serial(cons: &Construction, grid_size: usize) -> Result<KernelProfile> {
    profile_with(cons, grid_size, false)
}

fn profile_with(cons: &Construction, grid_size: usize, parallel: bool) -> Result<KernelProfile> {
    if grid_size < 64 {
        return Err(Error::Parameter(format!("grid_size must be at least 64, got {grid_size}")));
    }
    let grid = circle_grid(grid_size);
    let (khat, m) = sample(&cons.omega, &grid, parallel);
    let DDelta { d, delta, margin, .. } = d_delta(cons)?;
    Ok(KernelProfile { grid, khat, m, d, delta, margin })
}

/// Largest `|K̂_{Ω_n}(x) - K̂_{Ω_n}(x_{2k})|` over the points of the full-circle
/// grid of `grid_size` points within two grid steps of `x_{2k}`.
pub fn grid_oscillation(cons: &Construction, k: usize, grid_size: usize) -> f64 {
    let centre = cons.direction(2 * k);
    let at_centre = khat_unchecked(&cons.omega, centre);
    let step = TAU / grid_size as f64;
    let j0 = (centre.value() / step).round() as i64;
    (j0 - 3..=j0 + 3)
        .map(|j| Angle::new(step * j as f64))
        .filter(|x| x.diff(centre).abs() <= 2.0 * step)
        .map(|x| (khat_unchecked(&cons.omega, x) - at_centre).abs())
        .fold(0.0, f64::max)
}
