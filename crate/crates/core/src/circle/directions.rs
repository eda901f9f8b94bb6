use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use super::Angle;
use crate::{Error, Result};

/// Lower end of the admissible direction window, `π/2 + π/32`.
pub const WINDOW_LO: f64 = FRAC_PI_2 + PI / 32.0;
/// Upper end of the admissible direction window, `3π/4 - π/32`.
pub const WINDOW_HI: f64 = 3.0 * FRAC_PI_4 - PI / 32.0;

/// Integer geometry of the lattice points `x_k = (-t_k, s)`; `None` entries
/// are chosen automatically.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct GeometrySpec {
    pub s: Option<u64>,
    pub t_start: Option<u64>,
    pub t_step: Option<u64>,
}

impl GeometrySpec {
    pub fn auto() -> Self {
        Self::default()
    }

    pub fn manual(s: u64, t_start: u64, t_step: u64) -> Self {
        Self { s: Some(s), t_start: Some(t_start), t_step: Some(t_step) }
    }
}

/// The `2n` directions `x_k/|x_k|` with `x_k = (-t_k, s)` and `t_k` an
/// arithmetic progression of positive integers.
#[derive(Clone, Debug, PartialEq)]
pub struct DirectionFamily {
    pub s: u64,
    pub t_start: u64,
    pub t_step: u64,
    angles: Vec<Angle>,
}

impl DirectionFamily {
    fn from_integers(s: u64, t_start: u64, t_step: u64, count: usize) -> Self {
        let angles = (0..count as u64)
            .map(|k| {
                let t = t_start + k * t_step;
                Angle::from_point(-(t as f64), s as f64)
            })
            .collect();
        Self { s, t_start, t_step, angles }
    }

    pub fn count(&self) -> usize {
        self.angles.len()
    }

    /// Number `n` of direction pairs.
    pub fn n(&self) -> usize {
        self.angles.len() / 2
    }

    pub fn angles(&self) -> &[Angle] {
        &self.angles
    }

    /// Direction `k` with the 1-based indexing `k = 1..=2n`.
    pub fn angle(&self, k: usize) -> Angle {
        self.angles[k - 1]
    }

    pub fn t(&self, k: usize) -> u64 {
        self.t_start + (k as u64 - 1) * self.t_step
    }

    /// Chord gaps between consecutive directions.
    pub fn gaps(&self) -> Vec<f64> {
        self.angles.windows(2).map(|w| w[1].chord(w[0])).collect()
    }

    pub fn min_gap(&self) -> f64 {
        self.gaps().into_iter().fold(f64::INFINITY, f64::min)
    }

    /// Checks the window and gap-band invariants, naming the first violation.
    pub fn validate(&self) -> Result<()> {
        let n = self.n().max(1) as f64;
        if self.t_step == 0 || self.t_start == 0 || self.s == 0 {
            return Err(Error::Invariant(format!(
                "s, t_start and t_step must be positive (s={}, t_start={}, t_step={})",
                self.s, self.t_start, self.t_step
            )));
        }
        for (i, a) in self.angles.iter().enumerate() {
            let v = a.value();
            if !(v > WINDOW_LO && v < WINDOW_HI) {
                return Err(Error::Invariant(format!(
                    "direction {} at {v:.6} rad leaves the window ({WINDOW_LO:.6}, {WINDOW_HI:.6})",
                    i + 1
                )));
            }
        }
        let (lo, hi) = (1.0 / (32.0 * n), 4.0 / n);
        for (i, g) in self.gaps().into_iter().enumerate() {
            if !(lo..=hi).contains(&g) {
                return Err(Error::Invariant(format!(
                    "gap between directions {} and {} is {g:.3e}, outside [{lo:.3e}, {hi:.3e}]",
                    i + 1,
                    i + 2
                )));
            }
        }
        Ok(())
    }
}

/// Builds `2n` directions; unspecified integers are fitted to spread the
/// directions over the whole window.
pub fn build_directions(n: usize, geometry: GeometrySpec) -> Result<DirectionFamily> {
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    let count = 2 * n;
    if let GeometrySpec { s: Some(s), t_start: Some(t0), t_step: Some(dt) } = geometry {
        let fam = DirectionFamily::from_integers(s, t0, dt, count);
        fam.validate()?;
        return Ok(fam);
    }
    let candidates: Vec<u64> = match geometry.s {
        Some(s) => vec![s],
        None => (1..=52).map(|j| 1u64 << j).collect(),
    };
    let (tan_lo, tan_hi) = ((WINDOW_LO - FRAC_PI_2).tan(), (WINDOW_HI - FRAC_PI_2).tan());
    let mut last_err = Error::Invariant("no candidate geometry".into());
    for s in candidates {
        let sf = s as f64;
        let t0 = geometry.t_start.unwrap_or((sf * tan_lo).floor() as u64 + 1);
        let t_max = (sf * tan_hi).ceil() as u64 - 1;
        let dt = match geometry.t_step {
            Some(dt) => dt,
            None if t_max > t0 => (t_max - t0) / (count as u64 - 1),
            None => 0,
        };
        if dt == 0 {
            last_err = Error::Invariant(format!("s = {s} leaves no room for {count} directions"));
            continue;
        }
        let fam = DirectionFamily::from_integers(s, t0, dt, count);
        match fam.validate() {
            Ok(()) => return Ok(fam),
            Err(e) => last_err = e,
        }
    }
    Err(last_err)
}
