use num_complex::Complex64;
use num_traits::Zero;
use proptest::prelude::*;
use qpmid::mid::*;
use qpmid::pade::exp_pade_normalized;
use qpmid::polycore::{rat, ratio};
use qpmid::quasipoly::Quasipolynomial;

fn design() -> impl Strategy<Value = (usize, usize, i64, i64, i64)> {
    (1usize..=5)
        .prop_flat_map(|n| (Just(n), 0..=n))
        .prop_flat_map(|(n, m)| (Just(n), Just(m), 1i64..30, 1i64..10, -20i64..10))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exact_design_has_maximal_multiplicity((n, m, tn, td, s) in design()) {
        let tau = ratio(tn, td);
        let s0 = ratio(s, 4);
        let d = synthesize_exact(n, m, &tau, &s0).unwrap();
        for j in 0..d.degree_bound() {
            prop_assert!(d.exact_derivative_at_s0(j).is_zero(), "derivative {} does not vanish", j);
        }
        prop_assert_eq!(d.exact_derivative_at_s0(d.degree_bound()), d.expected_top_derivative());
        prop_assert_eq!(d.exact_s0_from_coeffs(), s0);
        let nf = d.normalized();
        let pair = exp_pade_normalized(n, m);
        prop_assert_eq!(&nf.p_tilde, &pair.den);
        prop_assert_eq!(&nf.q_tilde, &pair.num);
    }

    #[test]
    fn perturbed_designs_fail_every_item((n, m, tn, td, s) in design(), which in 0usize..12, rel in prop_oneof![-1e-2f64..-1e-4, 1e-4f64..1e-2]) {
        let d = synthesize_coeffs(n, m, tn as f64 / td as f64, s as f64 / 4.0).unwrap();
        let mut a = d.a.clone();
        let mut alpha = d.alpha.clone();
        let k = which % (n + m + 1);
        if k < n {
            a[k] += rel * a[k].abs().max(1.0);
        } else {
            alpha[k - n] += rel * alpha[k - n].abs().max(1.0);
        }
        let q = Quasipolynomial::new(n, m, d.tau, a, alpha).unwrap();
        let rep = check_equivalences(&q, d.s0).unwrap();
        prop_assert!(rep.none_hold(), "{:?}", rep);
        prop_assert!(rep.consistent);
    }

    #[test]
    fn stability_matches_the_sign_of_s0((n, m, tn, td, s) in design()) {
        let tau = tn as f64 / td as f64;
        let s0 = s as f64 / 4.0;
        let d = synthesize_coeffs(n, m, tau, s0).unwrap();
        let q = d.quasipolynomial();
        let top = d.a[n - 1];
        prop_assert!((s0_from_coeffs(n, m, tau, top) - s0).abs() <= 1e-9 * (1.0 + top.abs()));
        if s0.abs() > 1e-6 {
            prop_assert_eq!(stability_criterion(n, m, tau, top), s0 < 0.0);
            prop_assert_eq!(stability_criterion_strict(&q).unwrap(), s0 < 0.0);
        }
    }
}

#[test]
fn characteristic_matches_the_float_quasipolynomial_away_from_s0() {
    let d = synthesize_coeffs(3, 2, 0.5, -2.0).unwrap();
    let f = d.characteristic();
    let q = d.quasipolynomial();
    use qpmid::quasipoly::Analytic;
    for s in [Complex64::new(1.0, 3.0), Complex64::new(-5.0, 10.0), Complex64::new(30.0, -2.0), Complex64::new(-2.0, 50.0)] {
        let a = f.value(s).unwrap();
        let b = q.eval(s, 0);
        assert!((a - b).norm() <= 1e-9 * q.term_magnitude(s, 0), "{s}: {a} vs {b}");
    }
}

#[test]
fn batch_results_keep_input_order() {
    let designs: Vec<MIDDesign> = [(1, 0, 1.0, 0.0), (2, 1, 1.0, -1.0), (3, 3, 0.3, 1.5)]
        .iter()
        .map(|&(n, m, t, s)| synthesize_coeffs(n, m, t, s).unwrap())
        .collect();
    let reports = check_designs(&designs);
    for (d, r) in designs.iter().zip(reports) {
        let r = r.unwrap();
        assert_eq!((r.n, r.m, r.s0), (d.n, d.m, d.s0));
        assert!(r.all_hold());
    }
}

#[test]
fn non_design_is_rejected_by_the_strict_criterion() {
    let q = Quasipolynomial::new(1, 0, 1.0, vec![-0.5], vec![1.0]).unwrap();
    assert!(stability_criterion_strict(&q).is_err());
    assert!(stability_criterion(1, 0, 1.0, -0.5));
    assert!(!stability_criterion(1, 0, 1.0, -1.0));
    assert!(!stability_criterion(2, 1, 1.0, -4.0));
}

#[test]
fn rational_closeness() {
    assert!(rational_close(&ratio(1_000_000_001, 1_000_000_000), &rat(1), 1e-8));
    assert!(!rational_close(&ratio(1_001, 1_000), &rat(1), 1e-8));
}
