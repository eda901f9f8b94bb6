//! Globally adaptive 7/15-point Gauss–Kronrod quadrature.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::{Error, Result};

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

#[derive(Clone, Copy, Debug)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
    floor: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs_sum = fc.abs() * WGK[7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let (f1, f2) = (f(center - dx), f(center + dx));
        kronrod += WGK[j] * (f1 + f2);
        abs_sum += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let value = kronrod * half;
    let floor = 50.0 * f64::EPSILON * abs_sum * half.abs();
    let err = ((kronrod - gauss) * half).abs().max(floor);
    Segment { a, b, value, err, floor }
}

/// Adaptive quadrature result.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub err: f64,
    pub segments: usize,
}

/// Integrates `f` over `[a, b]` until the estimated error is below
/// `rel_tol·|I|`, bisecting the worst segment at each step.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    max_segments: usize,
) -> Result<Quadrature> {
    if a == b {
        return Ok(Quadrature { value: 0.0, err: 0.0, segments: 0 });
    }
    let mut heap = BinaryHeap::new();
    let first = gk15(&f, a, b);
    let (mut value, mut err, mut floor) = (first.value, first.err, first.floor);
    heap.push(first);
    // Stop at the tolerance, or once every segment is down to roundoff.
    while err > rel_tol * value.abs() && err > f64::MIN_POSITIVE && err > floor * (1.0 + 1e-9) {
        if heap.len() >= max_segments {
            let mut worst: Vec<String> = heap
                .into_sorted_vec()
                .iter()
                .rev()
                .take(5)
                .map(|s| format!("[{:e}, {:e}] err {:e}", s.a, s.b, s.err))
                .collect();
            worst.insert(0, format!("after {max_segments} segments, I = {value:e} ± {err:e}"));
            return Err(Error::Numeric(format!(
                "quadrature did not converge: {}",
                worst.join("; ")
            )));
        }
        let s = heap.pop().expect("heap is never empty here");
        let mid = 0.5 * (s.a + s.b);
        let (l, r) = (gk15(&f, s.a, mid), gk15(&f, mid, s.b));
        value += l.value + r.value - s.value;
        err += l.err + r.err - s.err;
        floor += l.floor + r.floor - s.floor;
        heap.push(l);
        heap.push(r);
    }
    // Re-sum to shed the drift of the running updates.
    let segments = heap.len();
    let mut parts = heap.into_vec();
    parts.sort_by(|x, y| x.a.total_cmp(&y.a));
    let value = parts.iter().map(|s| s.value).sum();
    let err = parts.iter().map(|s| s.err).sum();
    Ok(Quadrature { value, err, segments })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_are_exact() {
        let q = integrate(|x| x.powi(5) - 3.0 * x * x, 0.0, 2.0, 1e-14, 10).unwrap();
        assert!((q.value - (64.0 / 6.0 - 8.0)).abs() < 1e-13);
        assert_eq!(q.segments, 1);
    }

    #[test]
    fn endpoint_log_singularity() {
        // ∫_0^1 -log x dx = 1
        let q = integrate(|x| -x.ln(), 0.0, 1.0, 1e-12, 500).unwrap();
        assert!((q.value - 1.0).abs() < 1e-11, "{q:?}");
    }

    #[test]
    fn reports_non_convergence() {
        let err = integrate(|x| 1.0 / x, 0.0, 1.0, 1e-12, 20).unwrap_err();
        assert!(err.to_string().contains("did not converge"), "{err}");
    }
}
