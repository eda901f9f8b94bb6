use proptest::prelude::*;
use rough_kernel::trignorms::{
    dirichlet_norm, fit_exponent, lp_norm, rudin_shapiro, rudin_shapiro_sup_sweep, sup_norm,
    unconditionality_ratio, TrigPolynomial,
};

#[test]
fn dirichlet_fourth_moment_is_exact() {
    for n in [2usize, 8, 64, 1024] {
        let nf = n as f64;
        let exact = ((2.0 * nf.powi(3) + nf) / 3.0).powf(0.25);
        assert!((dirichlet_norm(n, 4.0).unwrap() / exact - 1.0).abs() <= 1e-12, "n = {n}");
    }
}

#[test]
fn rudin_shapiro_partial_sums_stay_flat() {
    let sweep = rudin_shapiro_sup_sweep(1 << 10, 16).unwrap();
    for (i, s) in sweep.iter().enumerate() {
        let n = (i + 1) as f64;
        assert!(s.bound() <= 5.0 * n.sqrt(), "n = {n}: {}", s.bound());
    }
    // full blocks obey the sharper Shapiro-pair bound √(2n)
    for e in 0..=10 {
        let n = 1usize << e;
        let s = sup_norm(&TrigPolynomial::from_signs(&rudin_shapiro(n)).unwrap(), 16).unwrap();
        assert!(s.grid_max <= (2.0 * n as f64).sqrt() + 1e-9);
    }
}

#[test]
fn ratio_exponents_follow_the_lp_gap() {
    for (p, target) in [(4.0, 0.25), (8.0, 0.375)] {
        let samples: Vec<(usize, f64)> =
            (4..=12).map(|e| (1usize << e, unconditionality_ratio(1 << e, p).unwrap())).collect();
        let fit = fit_exponent(&samples).unwrap();
        assert!((fit.slope - target).abs() <= 0.05, "p = {p}: {fit:?}");
        assert!(fit.residual <= 0.15);
    }
}

proptest! {
    #[test]
    fn parseval(coeffs in prop::collection::vec(-5.0f64..5.0, 1..200), oversample in 2usize..9) {
        let energy: f64 = coeffs.iter().map(|a| a * a).sum();
        let poly = TrigPolynomial::new(coeffs).unwrap();
        let l2 = lp_norm(&poly, 2.0, oversample).unwrap();
        prop_assert!((l2 - energy.sqrt()).abs() <= 1e-9 * energy.sqrt().max(1.0));
    }

    #[test]
    fn norms_increase_with_p(coeffs in prop::collection::vec(-5.0f64..5.0, 1..100), p1 in 1.0f64..10.0, dp in 0.0f64..5.0) {
        let poly = TrigPolynomial::new(coeffs).unwrap();
        let a = lp_norm(&poly, p1, 8).unwrap();
        let b = lp_norm(&poly, p1 + dp, 8).unwrap();
        prop_assert!(a <= b + 1e-9 * b.max(1.0));
    }

    #[test]
    fn rudin_shapiro_prefix_consistency(n in 1usize..3000) {
        let long = rudin_shapiro(2 * n);
        let short = rudin_shapiro(n);
        prop_assert_eq!(&long.as_slice()[..n], short.as_slice());
    }
}
