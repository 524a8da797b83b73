//! Kummer's confluent hypergeometric function `Φ(a, b, z)` and the Whittaker
//! function `M_{k,l}(z) = e^{−z/2} z^{1/2+l} Φ(1/2 + l − k, 1 + 2l, z)`.
//!
//! `Φ` is summed from its defining series. Terms and partial sums are carried
//! in double-double precision, which keeps the result accurate while the
//! largest term exceeds the sum by up to ~10¹⁵ (e.g. `|Im z|` up to about
//! 40). For `Re z < −10` the value is obtained from Kummer's reflection
//! `Φ(a, b, z) = e^z Φ(b − a, b, −z)` instead.
//!
//! Derivatives use `Φ^{(j)}(a, b, z) = (a)_j/(b)_j · Φ(a + j, b + j, z)`, i.e.
//! the term-wise differentiated series.

mod dd;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad;
use crate::quasipoly::Analytic;
use dd::{CDd, Dd};

/// Default relative truncation tolerance for the series.
pub const DEFAULT_TOL: f64 = 1e-17;

const MAX_TERMS: usize = 10_000;
const REFLECT_BELOW: f64 = -10.0;
const INTEGER_GRID_TOL: f64 = 1e-12;

fn near_nonpositive_integer(x: f64) -> bool {
    let r = x.round();
    r <= 0.0 && (x - r).abs() < INTEGER_GRID_TOL
}

fn exact_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x.fract() == 0.0
}

/// Real parameters `(a, b)` of `Φ(a, b, ·)`; `b` is never zero or a negative
/// integer.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KummerParams {
    a: f64,
    b: f64,
}

impl KummerParams {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidParameter(format!("non-finite Kummer parameters ({a}, {b})")));
        }
        if near_nonpositive_integer(b) {
            return Err(Error::InvalidParameter(format!(
                "Kummer parameter b = {b} is a nonpositive integer"
            )));
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// Parameters of the `j`-th derivative, `(a + j, b + j)`.
    pub fn shifted(&self, j: usize) -> Self {
        Self {
            a: self.a + j as f64,
            b: self.b + j as f64,
        }
    }

    /// `true` when the series terminates (a polynomial of degree `−a`).
    pub fn is_polynomial(&self) -> bool {
        exact_nonpositive_integer(self.a)
    }
}

/// A summed series value together with `Σ|t_k|`, which bounds the rounding
/// noise of the summation.
#[derive(Clone, Copy, Debug)]
pub struct SeriesValue {
    pub value: Complex64,
    pub magnitude: f64,
    pub terms: usize,
    pub reflected: bool,
}

fn sum_series(a: f64, b: f64, z: Complex64, tol: f64) -> Result<SeriesValue> {
    let mut term = CDd::ONE;
    let mut sum = CDd::ONE;
    let mut magnitude = 1.0f64;
    let mut max_term = 1.0f64;
    let mut small_run = 0;
    let zn = z.norm();
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        let ratio = Dd::sum(a, kf) / Dd::sum(b, kf).mul_f64(kf + 1.0);
        term = term.mul_c64(z).mul_dd(ratio);
        if term.is_zero() {
            // a is a nonpositive integer: the series has terminated
            return Ok(SeriesValue {
                value: sum.to_c64(),
                magnitude,
                terms: k + 1,
                reflected: false,
            });
        }
        sum = sum + term;
        let t = term.norm();
        magnitude += t;
        max_term = max_term.max(t);
        let shrinking = ratio.abs() * zn < 1.0;
        if shrinking && (t < tol * sum.norm() || t < 1e-40 * max_term) {
            small_run += 1;
            if small_run >= 3 {
                return Ok(SeriesValue {
                    value: sum.to_c64(),
                    magnitude,
                    terms: k + 2,
                    reflected: false,
                });
            }
        } else {
            small_run = 0;
        }
    }
    Err(Error::NonConvergence {
        what: "Kummer series",
        iterations: MAX_TERMS,
        achieved: term.norm() / sum.norm().max(f64::MIN_POSITIVE),
    })
}

/// `Φ(a, b, z)` with its summation magnitude.
pub fn kummer_phi_detailed(p: &KummerParams, z: Complex64, tol: f64) -> Result<SeriesValue> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("series tolerance must be positive, got {tol}")));
    }
    if z.re < REFLECT_BELOW && !p.is_polynomial() {
        let inner = sum_series(p.b - p.a, p.b, -z, tol)?;
        let ez = z.exp();
        return Ok(SeriesValue {
            value: ez * inner.value,
            magnitude: ez.norm() * inner.magnitude,
            terms: inner.terms,
            reflected: true,
        });
    }
    sum_series(p.a, p.b, z, tol)
}

/// Kummer's function `Φ(a, b, z) = Σ (a)_k/(b)_k z^k/k!`.
pub fn kummer_phi(p: &KummerParams, z: Complex64, tol: f64) -> Result<Complex64> {
    kummer_phi_detailed(p, z, tol).map(|v| v.value)
}

/// Pochhammer ratio `(a)_j/(b)_j`.
fn pochhammer_ratio(a: f64, b: f64, j: usize) -> f64 {
    (0..j).map(|i| (a + i as f64) / (b + i as f64)).product()
}

/// `j`-th derivative of `Φ(a, b, ·)` at `z`.
pub fn kummer_phi_derivative(p: &KummerParams, z: Complex64, order: usize, tol: f64) -> Result<Complex64> {
    if order == 0 {
        return kummer_phi(p, z, tol);
    }
    let c = pochhammer_ratio(p.a, p.b, order);
    if c == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    Ok(kummer_phi(&p.shifted(order), z, tol)? * c)
}

const ORACLE_REL_TOL: f64 = 1e-10;

fn gamma(x: f64) -> f64 {
    statrs::function::gamma::gamma(x)
}

/// `Φ(a, b, z)` from the Euler integral
/// `Γ(b)/(Γ(a)Γ(b−a)) ∫₀¹ e^{zt} t^{a−1}(1−t)^{b−a−1} dt`, valid for
/// `b > a > 0`, by tanh-sinh quadrature, which absorbs the algebraic
/// endpoint singularities.
pub fn kummer_integral_oracle(p: &KummerParams, z: Complex64) -> Result<Complex64> {
    let (a, b) = (p.a, p.b);
    if !(b > a && a > 0.0) {
        return Err(Error::Domain(format!(
            "integral representation needs b > a > 0, got a = {a}, b = {b}"
        )));
    }
    let c = b - a;
    let q = quad::integrate_unit_tanh_sinh(
        |t, u| (z * t).exp() * (t.powf(a - 1.0) * u.powf(c - 1.0)),
        ORACLE_REL_TOL,
    )?;
    let norm = gamma(b) / (gamma(a) * gamma(c));
    Ok(q.value * norm)
}

/// `z Φ'' + (b − z) Φ' − a Φ`, which vanishes for an exact `Φ`.
pub fn kummer_ode_residual(p: &KummerParams, z: Complex64) -> Result<Complex64> {
    let f = kummer_phi(p, z, DEFAULT_TOL)?;
    let d1 = kummer_phi_derivative(p, z, 1, DEFAULT_TOL)?;
    let d2 = kummer_phi_derivative(p, z, 2, DEFAULT_TOL)?;
    Ok(z * d2 + (p.b - z) * d1 - p.a * f)
}

/// Parameters `(k, l)` of `M_{k,l}`; `2l` is never a negative integer.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WhittakerParams {
    k: f64,
    l: f64,
}

impl WhittakerParams {
    pub fn new(k: f64, l: f64) -> Result<Self> {
        if !k.is_finite() || !l.is_finite() {
            return Err(Error::InvalidParameter(format!("non-finite Whittaker parameters ({k}, {l})")));
        }
        let two_l = 2.0 * l;
        if near_nonpositive_integer(two_l) && two_l.round() < 0.0 {
            return Err(Error::InvalidParameter(format!("2l = {two_l} is a negative integer")));
        }
        Ok(Self { k, l })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn l(&self) -> f64 {
        self.l
    }

    /// Exponent `1/2 + l` of the power prefactor.
    pub fn exponent(&self) -> f64 {
        0.5 + self.l
    }

    /// The underlying `Φ(1/2 + l − k, 1 + 2l, ·)`.
    pub fn kummer(&self) -> KummerParams {
        KummerParams {
            a: 0.5 + self.l - self.k,
            b: 1.0 + 2.0 * self.l,
        }
    }
}

/// A Whittaker value and whether it was taken on the principal branch cut.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WhittakerValue {
    pub value: Complex64,
    /// `z` lies on the negative real axis and `1/2 + l` is not an integer;
    /// the principal value (argument `+π`) was returned.
    pub on_branch_cut: bool,
}

/// Principal-branch `z^μ`, with the negative real axis taken at argument `+π`
/// regardless of the sign of the zero imaginary part.
fn principal_pow(z: Complex64, mu: f64) -> Result<(Complex64, bool)> {
    let integral = mu.fract() == 0.0;
    if z.re == 0.0 && z.im == 0.0 {
        return if mu > 0.0 {
            Ok((Complex64::new(0.0, 0.0), false))
        } else if mu == 0.0 {
            Ok((Complex64::new(1.0, 0.0), false))
        } else {
            Err(Error::Domain(format!("z^{mu} is singular at z = 0")))
        };
    }
    if integral && mu.abs() < i32::MAX as f64 {
        return Ok((z.powi(mu as i32), false));
    }
    let on_cut = z.im == 0.0 && z.re < 0.0;
    let theta = if on_cut { std::f64::consts::PI } else { z.arg() };
    Ok((Complex64::from_polar(z.norm().powf(mu), mu * theta), on_cut))
}

/// `M_{k,l}(z) = e^{−z/2} z^{1/2+l} Φ(1/2 + l − k, 1 + 2l, z)` on the
/// principal branch of `z^{1/2+l}`.
pub fn whittaker_m(w: &WhittakerParams, z: Complex64) -> Result<WhittakerValue> {
    let (power, on_branch_cut) = principal_pow(z, w.exponent())?;
    if power.re == 0.0 && power.im == 0.0 {
        return Ok(WhittakerValue {
            value: power,
            on_branch_cut,
        });
    }
    let phi = kummer_phi(&w.kummer(), z, DEFAULT_TOL)?;
    Ok(WhittakerValue {
        value: (-0.5 * z).exp() * power * phi,
        on_branch_cut,
    })
}

/// `dM_{k,l}/dz = e^{−z/2} [μ z^{μ−1} Φ + z^μ (Φ' − Φ/2)]` with `μ = 1/2 + l`.
pub fn whittaker_m_derivative(w: &WhittakerParams, z: Complex64) -> Result<WhittakerValue> {
    let mu = w.exponent();
    let p = w.kummer();
    let (pow_mu, cut) = principal_pow(z, mu)?;
    let (pow_lower, _) = principal_pow(z, mu - 1.0)?;
    let phi = kummer_phi(&p, z, DEFAULT_TOL)?;
    let dphi = kummer_phi_derivative(&p, z, 1, DEFAULT_TOL)?;
    Ok(WhittakerValue {
        value: (-0.5 * z).exp() * (pow_lower * phi * mu + pow_mu * (dphi - phi * 0.5)),
        on_branch_cut: cut,
    })
}

/// `Φ(a, b, ·)` as an entire function for the contour machinery.
#[derive(Clone, Copy, Debug)]
pub struct KummerFn {
    pub params: KummerParams,
    pub tol: f64,
}

impl KummerFn {
    pub fn new(params: KummerParams) -> Self {
        Self {
            params,
            tol: DEFAULT_TOL,
        }
    }
}

impl Analytic for KummerFn {
    fn derivative(&self, s: Complex64, order: usize) -> Result<Complex64> {
        kummer_phi_derivative(&self.params, s, order, self.tol)
    }

    /// `|Φ| + |s||Φ'|` covers the rounding of `s` itself; the double-double
    /// series adds noise of order `ε²` times its term magnitude.
    fn scale(&self, s: Complex64) -> f64 {
        let Ok(v) = kummer_phi_detailed(&self.params, s, self.tol) else {
            return 1.0;
        };
        let d = kummer_phi_derivative(&self.params, s, 1, self.tol).map_or(0.0, |d| d.norm());
        let series = 1e3 * f64::EPSILON * f64::EPSILON * v.magnitude;
        (v.value.norm() + s.norm() * d + series).max(f64::MIN_POSITIVE)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn phi(a: f64, b: f64, z: Complex64) -> Complex64 {
        kummer_phi(&KummerParams::new(a, b).unwrap(), z, DEFAULT_TOL).unwrap()
    }

    #[test]
    fn phi_examples() {
        for (a, b) in [(1.0, 2.0), (-1.5, 0.5), (3.0, 7.0)] {
            assert_eq!(phi(a, b, c(0.0, 0.0)), c(1.0, 0.0));
        }
        assert!((phi(1.0, 2.0, c(1.0, 0.0)) - (E - 1.0)).norm() < 1e-15);
        assert_eq!(phi(-1.0, 3.0, c(3.0, 0.0)).norm(), 0.0);
    }

    #[test]
    fn invalid_b_is_rejected() {
        for b in [0.0, -1.0, -7.0, -2.0 + 1e-14] {
            assert!(matches!(KummerParams::new(1.0, b), Err(Error::InvalidParameter(_))));
        }
        assert!(KummerParams::new(1.0, -0.5).is_ok());
    }

    #[test]
    fn closed_form_on_imaginary_axis() {
        // Φ(1, 2, z) = (e^z − 1)/z, checked where the series cancels heavily.
        for y in [5.0, 17.3, 31.0, 40.0] {
            let z = c(0.0, y);
            let exact = (z.exp() - 1.0) / z;
            assert!((phi(1.0, 2.0, z) - exact).norm() < 1e-14, "y = {y}");
        }
    }

    #[test]
    fn reflection_branch_matches_closed_form() {
        let z = c(-25.0, 3.0);
        let exact = (z.exp() - 1.0) / z;
        let v = kummer_phi_detailed(&KummerParams::new(1.0, 2.0).unwrap(), z, DEFAULT_TOL).unwrap();
        assert!(v.reflected);
        assert!((v.value - exact).norm() < 1e-15 * exact.norm());
    }

    #[test]
    fn integral_oracle_examples() {
        let p = KummerParams::new(1.0, 2.0).unwrap();
        assert!((kummer_integral_oracle(&p, c(1.0, 0.0)).unwrap() - (E - 1.0)).norm() < 1e-10);
        let p = KummerParams::new(2.0, 4.0).unwrap();
        let exact = 6.0 * (3.0 - E);
        assert!((kummer_integral_oracle(&p, c(1.0, 0.0)).unwrap() - exact).norm() < 1e-9);
        let p = KummerParams::new(1.0, 3.0).unwrap();
        assert!((kummer_integral_oracle(&p, c(0.0, 0.0)).unwrap() - 1.0).norm() < 1e-10);
        let p = KummerParams::new(2.0, 1.5).unwrap();
        assert!(matches!(kummer_integral_oracle(&p, c(0.0, 0.0)), Err(Error::Domain(_))));
    }

    #[test]
    fn integral_oracle_with_endpoint_singularities() {
        let p = KummerParams::new(0.3, 0.9).unwrap();
        let z = c(1.5, -2.0);
        let series = kummer_phi(&p, z, DEFAULT_TOL).unwrap();
        let oracle = kummer_integral_oracle(&p, z).unwrap();
        assert!((series - oracle).norm() < 1e-8 * series.norm());
    }

    #[test]
    fn ode_residual_examples() {
        let p = KummerParams::new(1.0, 2.0).unwrap();
        assert!(kummer_ode_residual(&p, c(0.5, 0.0)).unwrap().norm() < 1e-10);
        let p = KummerParams::new(-1.0, 3.0).unwrap();
        for z in [c(0.0, 0.0), c(2.5, -1.0), c(-40.0, 7.0)] {
            assert!(kummer_ode_residual(&p, z).unwrap().norm() < 1e-12);
        }
        let p = KummerParams::new(2.0, 4.0).unwrap();
        assert!(kummer_ode_residual(&p, c(1.0, 2.0)).unwrap().norm() < 1e-9);
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let p = KummerParams::new(1.7, 3.2).unwrap();
        let z = c(0.8, -1.1);
        let h = 1e-5;
        let fd = (kummer_phi(&p, z + h, DEFAULT_TOL).unwrap() - kummer_phi(&p, z - h, DEFAULT_TOL).unwrap())
            / (2.0 * h);
        let d = kummer_phi_derivative(&p, z, 1, DEFAULT_TOL).unwrap();
        assert!((fd - d).norm() < 1e-8);
    }

    #[test]
    fn whittaker_examples() {
        let w = WhittakerParams::new(2.5, 1.0).unwrap();
        assert!(whittaker_m(&w, c(3.0, 0.0)).unwrap().value.norm() < 1e-15);
        // M_{k,l}(z)/z^{1/2+l} → 1 at the origin
        let w = WhittakerParams::new(0.3, 0.75).unwrap();
        let z = c(1e-9, 1e-9);
        let v = whittaker_m(&w, z).unwrap().value;
        let (pw, _) = principal_pow(z, w.exponent()).unwrap();
        assert!((v / pw - 1.0).norm() < 1e-8);
        assert_eq!(whittaker_m(&w, c(0.0, 0.0)).unwrap().value, c(0.0, 0.0));
    }

    #[test]
    fn whittaker_branch_cut_is_flagged() {
        let w = WhittakerParams::new(0.0, 0.25).unwrap();
        let v = whittaker_m(&w, c(-2.0, 0.0)).unwrap();
        assert!(v.on_branch_cut);
        let v_neg_zero = whittaker_m(&w, c(-2.0, -0.0)).unwrap();
        assert_eq!(v.value, v_neg_zero.value);
        // half-integer l gives an integer exponent: no cut
        let w = WhittakerParams::new(0.0, 0.5).unwrap();
        assert!(!whittaker_m(&w, c(-2.0, 0.0)).unwrap().on_branch_cut);
    }

    #[test]
    fn whittaker_rejects_negative_integer_two_l() {
        assert!(WhittakerParams::new(0.0, -0.5).is_err());
        assert!(WhittakerParams::new(0.0, -1.0).is_err());
        assert!(WhittakerParams::new(0.0, -0.25).is_ok());
    }

    #[test]
    fn whittaker_derivative_matches_finite_differences() {
        let w = WhittakerParams::new(1.2, 0.8).unwrap();
        let z = c(2.0, 0.7);
        let h = 1e-5;
        let fd = (whittaker_m(&w, z + h).unwrap().value - whittaker_m(&w, z - h).unwrap().value) / (2.0 * h);
        let d = whittaker_m_derivative(&w, z).unwrap().value;
        assert!((fd - d).norm() < 1e-8);
    }
}
