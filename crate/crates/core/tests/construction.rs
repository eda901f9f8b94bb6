use std::f64::consts::{FRAC_PI_2, TAU};

use rough_kernel::circle::{build_directions, Angle, Construction, GeometrySpec, SignSequence};
use rough_kernel::logkernel::{d_delta, khat, m_eval, profile, solve_c};
use rough_kernel::orlicz::ScheduleParams;
use rough_kernel::Error;

fn build(n: usize, log2_n: i32) -> Construction {
    Construction::new(ScheduleParams { big_n: 2f64.powi(log2_n), n }, GeometrySpec::auto()).unwrap()
}

#[test]
fn omega_is_even_mean_zero_with_disjoint_support() {
    for (n, e) in [(1, 20), (3, 24), (16, 48)] {
        let c = build(n, e);
        assert_eq!(c.omega.len(), 8 * n);
        assert!(c.omega.integral().abs() <= 1e-12);
        assert!(c.omega.is_even(4096));
        let support = c.omega.support_measure();
        assert!((support - 8.0 * n as f64 / 2f64.powi(e)).abs() <= 1e-15 * support.max(1.0));
        // every atom carries ±c on its own arcs
        for p in c.omega.pieces() {
            assert_eq!(p.coeff.abs(), c.c);
        }
    }
}

#[test]
fn every_atom_is_normalised_at_its_direction() {
    let c = build(32, 64);
    for k in 1..=64 {
        let v = m_eval(c.atom(k), c.direction(k));
        assert!((v - 1.0).abs() <= 1e-12, "k = {k}: {v}");
    }
}

#[test]
fn height_is_shared_and_matches_a_fresh_solve() {
    let c = build(8, 40);
    for k in 1..=16 {
        let fresh = solve_c(&c.arcs[k - 1], c.direction(k)).unwrap();
        assert!((fresh - c.c).abs() <= 1e-10 * c.c);
    }
    let dd = d_delta(&c).unwrap();
    assert!(dd.d_spread <= 1e-10);
    assert!((0.9..=1.0).contains(&dd.d.abs()));
}

#[test]
fn majorant_dominates_multiplier_on_the_grid() {
    let c = build(8, 32);
    let p = profile(&c, 2048).unwrap();
    assert!(p.majorant_excess() <= 1e-12);
    for (x, k) in p.grid.iter().zip(&p.khat).step_by(97) {
        assert!((khat(&c.omega, *x) - k).abs() <= 1e-14);
    }
}

#[test]
fn margin_shrinks_as_arcs_shorten() {
    let margins: Vec<f64> = [32, 48, 64].iter().map(|&e| d_delta(&build(8, e)).unwrap().margin).collect();
    assert!(margins.windows(2).all(|w| w[1] <= w[0]), "{margins:?}");
}

#[test]
fn geometry_errors_surface() {
    // arcs too long for the direction gaps
    let err = Construction::new(ScheduleParams { big_n: 100.0, n: 64 }, GeometrySpec::auto()).unwrap_err();
    assert!(matches!(err, Error::Invariant(_)), "{err}");
    let err = build_directions(4, GeometrySpec::manual(10, 1, 2)).unwrap_err();
    assert!(matches!(err, Error::Domain(_) | Error::Invariant(_)), "{err}");
    let wrong_len = SignSequence::all_plus(3);
    assert!(Construction::with_signs(ScheduleParams { big_n: 1e9, n: 4 }, GeometrySpec::auto(), wrong_len).is_err());
}

#[test]
fn directions_sit_in_the_window_with_gaps_in_band() {
    for n in [1, 2, 5, 32, 100] {
        let dirs = build_directions(n, GeometrySpec::auto()).unwrap();
        assert_eq!(dirs.count(), 2 * n);
        for a in dirs.angles() {
            let v = a.value();
            assert!(v > FRAC_PI_2 + TAU / 64.0 && v < 0.75 * TAU / 2.0 - TAU / 64.0, "{v}");
        }
        for g in dirs.gaps() {
            assert!(g >= 1.0 / (32.0 * n as f64) && g <= 4.0 / n as f64, "n={n} gap {g}");
        }
    }
    let _ = Angle::ZERO;
}
