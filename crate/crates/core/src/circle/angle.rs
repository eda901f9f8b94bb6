use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt;

// Low-order parts of the double-double representations of π/2, π and 2π.
const FRAC_PI_2_LO: f64 = 6.123_233_995_736_766e-17;
const PI_LO: f64 = 1.224_646_799_147_353_2e-16;
const TAU_LO: f64 = 2.449_293_598_294_706_4e-16;

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

impl DoubleDouble {
    pub const ZERO: Self = Self { hi: 0.0, lo: 0.0 };
    pub const FRAC_PI_2: Self = Self { hi: FRAC_PI_2, lo: FRAC_PI_2_LO };
    pub const PI: Self = Self { hi: PI, lo: PI_LO };
    pub const TAU: Self = Self { hi: TAU, lo: TAU_LO };

    pub fn from_f64(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    pub fn add(self, other: Self) -> Self {
        let (s, e) = two_sum(self.hi, other.hi);
        let (t, f) = two_sum(self.lo, other.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Self { hi, lo }
    }

    pub fn neg(self) -> Self {
        Self { hi: -self.hi, lo: -self.lo }
    }

    pub fn sub(self, other: Self) -> Self {
        self.add(other.neg())
    }

    /// Multiplication by a small integer, exact up to double-double rounding.
    pub fn mul_int(self, k: i64) -> Self {
        let kf = k as f64;
        let p = self.hi * kf;
        let perr = self.hi.mul_add(kf, -p);
        let (hi, lo) = quick_two_sum(p, perr + self.lo * kf);
        Self { hi, lo }
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            self.neg()
        } else {
            self
        }
    }

    pub fn gt(self, other: Self) -> bool {
        self.hi > other.hi || (self.hi == other.hi && self.lo > other.lo)
    }

    pub fn ge(self, other: Self) -> bool {
        !other.gt(self)
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    /// Reduces into `[0, 2π)`.
    pub fn rem_tau(self) -> Self {
        let q = (self.hi / TAU).floor();
        let mut r = if q != 0.0 {
            self.sub(Self::TAU.mul_int(q as i64))
        } else {
            self
        };
        while r.hi < 0.0 || (r.hi == 0.0 && r.lo < 0.0) {
            r = r.add(Self::TAU);
        }
        while r.ge(Self::TAU) {
            r = r.sub(Self::TAU);
        }
        r
    }

    /// Reduces into `(-π, π]`.
    pub fn signed_rem_tau(self) -> Self {
        let r = self.rem_tau();
        if r.gt(Self::PI) {
            r.sub(Self::TAU)
        } else {
            r
        }
    }
}

/// A point of the unit circle, stored as an angle in `[0, 2π)`.
///
/// The angle is kept as a double-double so that differences between angles
/// which are structurally equal up to quarter turns (an arc centre and the
/// direction it was built from) stay exact far below `f64` resolution of `π`.
/// Arcs of length `2^-64` placed on a singular direction depend on this.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Angle {
    rad: DoubleDouble,
}

impl Angle {
    pub const ZERO: Angle = Angle { rad: DoubleDouble::ZERO };

    pub fn new(rad: f64) -> Self {
        assert!(rad.is_finite(), "angle must be finite, got {rad}");
        Self { rad: DoubleDouble::from_f64(rad).rem_tau() }
    }

    pub(crate) fn from_dd(rad: DoubleDouble) -> Self {
        Self { rad: rad.rem_tau() }
    }

    /// Nearest `f64` to the angle, in `[0, 2π)`.
    pub fn value(self) -> f64 {
        let v = self.rad.to_f64();
        if v >= TAU {
            0.0
        } else {
            v
        }
    }

    /// Direction of the point `(x, y)`.
    pub fn from_point(x: f64, y: f64) -> Self {
        Self::new(y.atan2(x))
    }

    pub fn rotate(self, by: Angle) -> Self {
        Self::from_dd(self.rad.add(by.rad))
    }

    /// Counterclockwise rotation by `k` quarter turns.
    pub fn quarter_turns(self, k: i64) -> Self {
        Self::from_dd(self.rad.add(DoubleDouble::FRAC_PI_2.mul_int(k)))
    }

    /// Signed difference `self - other` reduced into `(-π, π]`.
    pub fn diff(self, other: Angle) -> f64 {
        self.rad.sub(other.rad).signed_rem_tau().to_f64()
    }

    pub(crate) fn diff_dd(self, other: Angle) -> DoubleDouble {
        self.rad.sub(other.rad).signed_rem_tau()
    }

    /// Chord length `|e^{iα} - e^{iβ}|`.
    pub fn chord(self, other: Angle) -> f64 {
        2.0 * (0.5 * self.diff(other)).sin().abs()
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_is_idempotent() {
        for &x in &[-7.0, -TAU, -1e-20, 0.0, 1.0, PI, TAU, 100.0, 1e6] {
            let a = Angle::new(x);
            assert!((0.0..TAU).contains(&a.value()), "{x} -> {}", a.value());
            assert_eq!(Angle::new(a.value()).value(), a.value());
        }
    }

    #[test]
    fn quarter_turns_close_the_circle() {
        let a = Angle::new(2.1);
        let back = a.quarter_turns(1).quarter_turns(1).quarter_turns(1).quarter_turns(1);
        assert!(back.diff(a).abs() < 1e-30);
        assert!(a.quarter_turns(-1).quarter_turns(1).diff(a).abs() < 1e-30);
    }

    #[test]
    fn diff_resolves_below_f64_spacing_of_pi() {
        let theta = Angle::new(2.0);
        let centre = theta.quarter_turns(-1);
        // The centre sits exactly a quarter turn before theta.
        let off = centre.diff_dd(theta).add(DoubleDouble::FRAC_PI_2);
        assert!(off.to_f64().abs() < 1e-30, "{:?}", off);
    }

    #[test]
    fn diff_is_signed_and_wraps() {
        let a = Angle::new(0.1);
        let b = Angle::new(TAU - 0.1);
        assert!((a.diff(b) - 0.2).abs() < 1e-15);
        assert!((b.diff(a) + 0.2).abs() < 1e-15);
        assert!((Angle::new(PI).chord(Angle::ZERO) - 2.0).abs() < 1e-15);
    }
}
