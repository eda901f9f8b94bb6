use std::f64::consts::{FRAC_PI_2, PI, TAU};

use super::Angle;
use crate::{Error, Result};

/// Overlap tolerated between neighbouring arcs, in radians.
pub const DISJOINT_SLACK: f64 = 1e-15;

/// Closed-open arc `[center - length/2, center + length/2)` of the unit circle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Arc {
    center: Angle,
    length: f64,
}

impl Arc {
    pub fn new(center: Angle, length: f64) -> Result<Self> {
        if !(length > 0.0 && length <= FRAC_PI_2) {
            return Err(Error::Domain(format!(
                "arc length must lie in (0, π/2], got {length}"
            )));
        }
        Ok(Self { center, length })
    }

    pub fn center(&self) -> Angle {
        self.center
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn half_length(&self) -> f64 {
        0.5 * self.length
    }

    /// Rotates counterclockwise by `alpha`.
    pub fn rotate(&self, alpha: Angle) -> Arc {
        Arc { center: self.center.rotate(alpha), length: self.length }
    }

    /// Rotates counterclockwise by `k` quarter turns, exactly.
    pub fn quarter_turns(&self, k: i64) -> Arc {
        Arc { center: self.center.quarter_turns(k), length: self.length }
    }

    pub fn contains(&self, theta: Angle) -> bool {
        let off = theta.diff(self.center);
        let h = self.half_length();
        -h <= off && off < h
    }

    /// Whether the two arcs share more than [`DISJOINT_SLACK`] of length.
    pub fn overlaps(&self, other: &Arc) -> bool {
        let gap = self.center.diff(other.center).abs();
        gap < 0.5 * (self.length + other.length) - DISJOINT_SLACK
    }
}

/// Rotates `a` counterclockwise by `alpha`.
pub fn rotate_arc(a: &Arc, alpha: Angle) -> Arc {
    a.rotate(alpha)
}

/// One constant piece of an [`ArcFunction`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Piece {
    pub arc: Arc,
    pub coeff: f64,
}

/// Finite sum `Σ c_i χ_{A_i}` over pairwise disjoint arcs `A_i`.
///
/// Pieces are kept sorted by centre angle; all sums over pieces run in that
/// order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ArcFunction {
    pieces: Vec<Piece>,
}

impl ArcFunction {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn new(mut pieces: Vec<Piece>) -> Result<Self> {
        for p in &pieces {
            if !p.coeff.is_finite() || p.coeff == 0.0 {
                return Err(Error::Invariant(format!(
                    "piece coefficients must be finite and nonzero, got {}",
                    p.coeff
                )));
            }
        }
        pieces.sort_by(|a, b| a.arc.center().value().total_cmp(&b.arc.center().value()));
        let f = Self { pieces };
        f.check_disjoint()?;
        Ok(f)
    }

    fn check_disjoint(&self) -> Result<()> {
        let m = self.pieces.len();
        if m < 2 {
            return Ok(());
        }
        for i in 0..m {
            let a = &self.pieces[i].arc;
            let b = &self.pieces[(i + 1) % m].arc;
            let gap = b.center().diff(a.center()).rem_euclid(TAU);
            let need = 0.5 * (a.length() + b.length()) - DISJOINT_SLACK;
            if gap < need {
                return Err(Error::Invariant(format!(
                    "arcs centred at {} and {} overlap (gap {gap:e}, need {need:e})",
                    a.center(),
                    b.center()
                )));
            }
        }
        Ok(())
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    /// Multiplies every coefficient by `k` (a zero factor yields the zero function).
    pub fn scaled(&self, k: f64) -> Self {
        if k == 0.0 {
            return Self::zero();
        }
        Self {
            pieces: self
                .pieces
                .iter()
                .map(|p| Piece { arc: p.arc, coeff: p.coeff * k })
                .collect(),
        }
    }

    /// Sum of functions with pairwise disjoint supports.
    pub fn disjoint_sum<'a, I>(parts: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a ArcFunction>,
    {
        let pieces = parts.into_iter().flat_map(|f| f.pieces.iter().copied()).collect();
        Self::new(pieces)
    }

    pub fn evaluate(&self, theta: Angle) -> f64 {
        if self.pieces.is_empty() {
            return 0.0;
        }
        let v = theta.value();
        let idx = self.pieces.partition_point(|p| p.arc.center().value() <= v);
        let m = self.pieces.len();
        // The containing arc, if any, is one of the two neighbours in
        // circular order.
        for j in [idx + m - 1, idx] {
            let p = &self.pieces[j % m];
            if p.arc.contains(theta) {
                return p.coeff;
            }
        }
        0.0
    }

    /// `∫ f dθ`, summed in piece order.
    pub fn integral(&self) -> f64 {
        self.pieces.iter().map(|p| p.coeff * p.arc.length()).sum()
    }

    pub fn support_measure(&self) -> f64 {
        self.pieces.iter().map(|p| p.arc.length()).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.pieces.iter().fold(0.0, |m, p| m.max(p.coeff.abs()))
    }

    /// Checks `f(θ) = f(θ + π)` on a uniform grid of `samples` points and at
    /// every piece centre.
    pub fn is_even(&self, samples: usize) -> bool {
        let grid = (0..samples).map(|j| Angle::new(TAU * j as f64 / samples as f64));
        let centres = self.pieces.iter().map(|p| p.arc.center());
        grid.chain(centres).all(|theta| {
            let antipode = theta.quarter_turns(2);
            self.evaluate(theta) == self.evaluate(antipode)
        })
    }
}

/// `evaluate`, `integral` and `is_even` as free functions.
pub fn evaluate(f: &ArcFunction, theta: Angle) -> f64 {
    f.evaluate(theta)
}

pub fn integral(f: &ArcFunction) -> f64 {
    f.integral()
}

pub fn is_even(f: &ArcFunction, samples: usize) -> bool {
    f.is_even(samples)
}

/// The function `+1` on the upper half circle and `-1` on the lower half,
/// tiled by four quarter arcs.
pub fn half_split() -> ArcFunction {
    let q = |k: i64, c: f64| Piece {
        arc: Arc::new(Angle::new(PI / 4.0).quarter_turns(k), FRAC_PI_2).unwrap(),
        coeff: c,
    };
    ArcFunction::new(vec![q(0, 1.0), q(1, 1.0), q(2, -1.0), q(3, -1.0)]).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arc(c: f64, l: f64) -> Arc {
        Arc::new(Angle::new(c), l).unwrap()
    }

    #[test]
    fn rotation_examples() {
        let a = arc(0.0, 0.01);
        assert_eq!(rotate_arc(&a, Angle::ZERO), a);
        let r = rotate_arc(&a, Angle::new(FRAC_PI_2));
        assert!((r.center().value() - FRAC_PI_2).abs() < 1e-15);
        assert_eq!(r.length(), 0.01);
        let rots: Vec<Arc> = (0..4).map(|k| a.quarter_turns(k)).collect();
        for i in 0..4 {
            for j in 0..i {
                assert!(!rots[i].overlaps(&rots[j]));
            }
        }
    }

    #[test]
    fn rejects_bad_lengths() {
        assert!(Arc::new(Angle::ZERO, 0.0).is_err());
        assert!(Arc::new(Angle::ZERO, 2.0).is_err());
        assert!(Arc::new(Angle::ZERO, f64::NAN).is_err());
    }

    #[test]
    fn rejects_overlap_and_zero_coefficients() {
        let p = |c: f64, l: f64, k: f64| Piece { arc: arc(c, l), coeff: k };
        assert!(ArcFunction::new(vec![p(0.0, 0.1, 1.0), p(0.05, 0.1, 1.0)]).is_err());
        assert!(ArcFunction::new(vec![p(0.0, 0.1, 0.0)]).is_err());
        // Wrap-around neighbours.
        assert!(ArcFunction::new(vec![p(0.01, 0.1, 1.0), p(TAU - 0.01, 0.1, 1.0)]).is_err());
        assert!(ArcFunction::new(vec![p(0.0, 0.1, 1.0), p(0.1, 0.1, 1.0)]).is_ok());
    }

    #[test]
    fn evaluation_and_integral() {
        let f = half_split();
        assert_eq!(f.evaluate(Angle::new(1.0)), 1.0);
        assert_eq!(f.evaluate(Angle::new(4.0)), -1.0);
        assert_eq!(f.evaluate(Angle::new(TAU - 1e-9)), -1.0);
        assert!(f.integral().abs() < 1e-15);
        assert!((f.support_measure() - TAU).abs() < 1e-14);
        assert!(!f.is_even(1000));
        assert_eq!(ArcFunction::zero().evaluate(Angle::new(2.0)), 0.0);
        assert_eq!(ArcFunction::zero().integral(), 0.0);
    }

    #[test]
    fn scaled_and_disjoint_sum() {
        let a = ArcFunction::new(vec![Piece { arc: arc(1.0, 0.1), coeff: 2.0 }]).unwrap();
        let b = ArcFunction::new(vec![Piece { arc: arc(3.0, 0.1), coeff: -1.0 }]).unwrap();
        let s = ArcFunction::disjoint_sum([&a, &b.scaled(3.0)]).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.evaluate(Angle::new(3.0)), -3.0);
        assert!(ArcFunction::disjoint_sum([&a, &a]).is_err());
        assert!(a.scaled(0.0).is_empty());
    }
}
