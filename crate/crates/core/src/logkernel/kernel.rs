use super::integral::{auto, LocalArc};
use crate::circle::{Angle, Arc, ArcFunction};
use crate::{Error, Result};

/// `(K̂_f(ξ), m(f)(ξ))` in one pass over the pieces.
pub(crate) fn khat_and_m(f: &ArcFunction, xi: Angle) -> (f64, f64) {
    let mut k = 0.0;
    let mut m = 0.0;
    for p in f.pieces() {
        let v = auto(&LocalArc::new(&p.arc, xi));
        k += p.coeff * v;
        m += p.coeff.abs() * v;
    }
    (k, m)
}

pub(crate) fn khat_unchecked(f: &ArcFunction, xi: Angle) -> f64 {
    f.pieces()
        .iter()
        .map(|p| p.coeff * auto(&LocalArc::new(&p.arc, xi)))
        .sum()
}

pub(crate) fn m_unchecked(f: &ArcFunction, xi: Angle) -> f64 {
    f.pieces()
        .iter()
        .map(|p| p.coeff.abs() * auto(&LocalArc::new(&p.arc, xi)))
        .sum()
}

/// `K̂_f(ξ) = ∫ f(θ) log(1/|cos(θ - ξ)|) dθ`.
///
/// This is the multiplier of the rough kernel only for even, mean-zero `f`;
/// other inputs are evaluated anyway with a warning.
pub fn khat(f: &ArcFunction, xi: Angle) -> f64 {
    if f.integral().abs() > 1e-12 * f.max_abs().max(1.0) || !f.is_even(64) {
        log::warn!("khat evaluated on a function that is not even and mean-zero");
    }
    khat_unchecked(f, xi)
}

/// `m(f)(ξ) = ∫ |f(θ)| log(1/|cos(θ - ξ)|) dθ ≥ |K̂_f(ξ)|`.
pub fn m_eval(f: &ArcFunction, xi: Angle) -> f64 {
    m_unchecked(f, xi)
}

/// Atom height making `m(w)(e) = 1` for the atom built on `arc`, which must
/// sit a quarter turn clockwise of `e`.
pub fn solve_c(arc: &Arc, e: Angle) -> Result<f64> {
    let offset = arc.center().diff(e.quarter_turns(-1)).abs();
    if offset > 1e-9 {
        return Err(Error::Domain(format!(
            "arc centre is {offset:e} rad away from the quarter turn of its direction"
        )));
    }
    let denom: f64 = (0..4)
        .map(|j| auto(&LocalArc::new(&arc.quarter_turns(j), e)))
        .sum();
    if !(denom > 0.0) {
        return Err(Error::Numeric(format!("normalisation integral is {denom:e}")));
    }
    Ok(1.0 / denom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle::make_w;

    fn atom(e: Angle, len: f64) -> (Arc, f64, ArcFunction) {
        let arc = Arc::new(e.quarter_turns(-1), len).unwrap();
        let c = solve_c(&arc, e).unwrap();
        let w = make_w(&arc, c).unwrap();
        (arc, c, w)
    }

    #[test]
    fn normalisation_at_n_100() {
        let e = Angle::new(2.0);
        let (_, c, w) = atom(e, 0.01);
        let h: f64 = 0.005;
        let near = 2.0 * (h - h * h.ln()) + h.powi(3) / 9.0 + 2.0 * h.powi(5) / 900.0;
        let far = h.powi(3) / 3.0 + h.powi(5) / 30.0;
        let expected_c = 1.0 / (2.0 * near + 2.0 * far);
        assert!(((c - expected_c) / expected_c).abs() < 1e-12);
        assert!((c - 7.93862).abs() < 1e-5);
        assert!((m_eval(&w, e) - 1.0).abs() < 1e-14);
        let k = khat(&w, e);
        assert!((k - expected_c * (-2.0 * near + 2.0 * far)).abs() < 1e-14);
        assert!((k + 0.999_998_7).abs() < 1e-7, "{k}");
    }

    #[test]
    fn c_is_independent_of_direction() {
        let (_, c1, _) = atom(Angle::new(1.9), 1e-6);
        let (_, c2, _) = atom(Angle::new(2.2), 1e-6);
        assert!((c1 - c2).abs() < 1e-12 * c1);
    }

    #[test]
    fn c_scales_like_n_over_log_n() {
        for big_n in [1e2, 1e4, 1e8, 2f64.powi(60)] {
            let (_, c, _) = atom(Angle::new(2.0), 1.0 / big_n);
            let r = c * big_n.ln() / big_n;
            assert!((0.2..=2.0).contains(&r), "N = {big_n}: {r}");
        }
    }

    #[test]
    fn zero_function_and_majorant() {
        assert_eq!(khat(&ArcFunction::zero(), Angle::new(1.0)), 0.0);
        let (_, _, w) = atom(Angle::new(2.0), 1e-3);
        for j in 0..100 {
            let x = Angle::new(0.0628 * j as f64);
            assert!(khat(&w, x).abs() <= m_eval(&w, x) + 1e-15);
            let (k, m) = khat_and_m(&w, x);
            assert_eq!(k, khat_unchecked(&w, x));
            assert_eq!(m, m_unchecked(&w, x));
        }
    }

    #[test]
    fn rejects_misplaced_arc() {
        let arc = Arc::new(Angle::new(0.3), 0.01).unwrap();
        assert!(solve_c(&arc, Angle::new(2.0)).is_err());
    }
}
