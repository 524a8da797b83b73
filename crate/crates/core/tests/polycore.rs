use num_complex::Complex64;
use proptest::prelude::*;
use qpmid::pade::{exp_pade_normalized, perron_pair, remainder_leading_coefficient};
use qpmid::polycore::*;

fn poly() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((-20i64..20, 1i64..6), 0..7)
        .prop_map(|c| Polynomial::new(c.into_iter().map(|(n, d)| ratio(n, d)).collect()))
}

proptest! {
    #[test]
    fn product_evaluates_to_product(p in poly(), q in poly(), x in -4i64..4, d in 1i64..4) {
        let x = ratio(x, d);
        prop_assert_eq!((&p * &q).eval_exact(&x), p.eval_exact(&x) * q.eval_exact(&x));
    }

    #[test]
    fn series_product_truncates_polynomial_product(p in poly(), q in poly(), order in 0usize..10) {
        let lhs = TruncatedSeries::from_polynomial(&p, order).mul(&TruncatedSeries::from_polynomial(&q, order));
        prop_assert_eq!(lhs, TruncatedSeries::from_polynomial(&(&p * &q), order));
    }

    #[test]
    fn exponentials_cancel(p in poly(), order in 0usize..14) {
        let round = series_mul_exp(&p, ExpSign::Plus, order).mul(&TruncatedSeries::exp(ExpSign::Minus, order));
        prop_assert_eq!(round, TruncatedSeries::from_polynomial(&p, order));
    }

    #[test]
    fn vanishing_order_of_a_shifted_monomial(k in 0usize..8, extra in 0usize..5, c in 1i64..9) {
        let order = k + extra;
        let s = TruncatedSeries::from_polynomial(&Polynomial::monomial(k, rat(c)), order);
        prop_assert_eq!(order_of_vanishing(&s, 0.0), k);
        let z = TruncatedSeries::from_polynomial(&Polynomial::zero(), order);
        prop_assert_eq!(order_of_vanishing(&z, 0.0), order + 1);
    }

    #[test]
    fn derivative_matches_float_horner(p in poly(), x in -2.0f64..2.0, y in -2.0f64..2.0, order in 0usize..4) {
        let mut d = p.clone();
        for _ in 0..order {
            d = d.derivative();
        }
        let z = Complex64::new(x, y);
        let direct = d.eval(z);
        let horner = horner_derivative(&p.to_f64(), z, order);
        prop_assert!((direct - horner).norm() <= 1e-9 * (1.0 + direct.norm()));
    }

    #[test]
    fn affine_composition_is_substitution(p in poly(), shift in -3i64..3, num in 1i64..4, den in 1i64..4, x in -3i64..3) {
        let scale = ratio(num, den);
        let shift = rat(shift);
        let x = rat(x);
        let composed = p.compose_affine(&shift, &scale);
        prop_assert_eq!(composed.eval_exact(&x), p.eval_exact(&(&shift + &scale * &x)));
    }
}

#[test]
fn pade_pairs_have_exact_contact_order() {
    for n in 0..=8 {
        for m in 0..=8 {
            let p = exp_pade_normalized(n, m);
            assert!(p.den.is_monic());
            assert_eq!(p.contact_order(), n + m + 1, "({n}, {m})");
            let r = p.residual_series(n + m + 1);
            assert_eq!(r.coeff(n + m + 1).unwrap(), &remainder_leading_coefficient(n, m));
        }
    }
}

#[test]
fn perron_and_normalized_pairs_agree_after_reflection() {
    for n in 0..=6 {
        for m in 0..=n {
            let raw = perron_pair(n, m);
            let norm = exp_pade_normalized(n, m);
            let z = Complex64::new(0.3, -0.2);
            assert!((raw.approximate_exp(-z) - 1.0 / norm.approximate_exp(z)).norm() < 1e-12);
        }
    }
}
