//! Quasipolynomials with a real root of maximal multiplicity.
//!
//! For `s0 ∈ ℝ` the following are equivalent:
//!
//! * (a) `s0` is a root of `Δ` of multiplicity `n + m + 1`;
//! * (b) the normalized polynomials `(P̃, Q̃)` are, up to sign, the Padé pair
//!   of order `(m, n)` of `e^z`;
//! * (c) `Δ̃(z) = n! z^{n+m+1}/(n+m+1)! · Φ(m+1, n+m+2, −z)`;
//! * (d) the coefficients of `Δ` are given by [`synthesize_coeffs`].
//!
//! When they hold and `m ≤ n`, `s0` is the rightmost root of `Δ`.
//!
//! Here `Δ̃(z) = τ^n Δ(s0 + z/τ) = P̃(z) + e^{−z} Q̃(z)`.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hyperfunc::{kummer_phi_derivative, kummer_phi_detailed, KummerParams, DEFAULT_TOL};
use crate::pade::exp_pade_normalized;
use crate::polycore::{binomial, factorial, rat, rat_from_f64, rat_to_f64, Polynomial};
use crate::quasipoly::{
    count_zeros, strip_uniqueness, Analytic, Quasipolynomial, Rect, StripReport,
};

/// Residual threshold of the multiplicity test, relative to the magnitude
/// of the terms of each derivative.
pub const MULTIPLICITY_RTOL: f64 = 1e-8;
/// Per-coefficient relative tolerance for coefficient comparisons.
pub const COEFF_RTOL: f64 = 1e-9;
/// Tolerance of the Kummer identity on the `|z| ≤ 5` grid.
pub const KUMMER_RTOL: f64 = 1e-9;
/// Offset of the left edge of the dominance rectangle from `s0`.
pub const DOMINANCE_OFFSET: f64 = 1e-6;

/// Below this `|z|` the exact characteristic is evaluated through its
/// Kummer factorization.
const KUMMER_REGION: f64 = 20.0;

fn pow(x: &BigRational, k: usize) -> BigRational {
    (0..k).fold(BigRational::one(), |acc, _| acc * x)
}

fn sign(odd: bool) -> BigRational {
    if odd {
        -BigRational::one()
    } else {
        BigRational::one()
    }
}

/// Exact ingredients of a design: `a_k` and `α_k e^{−s0τ}` are rational
/// whenever `τ` and `s0` are.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExactCoefficients {
    #[serde(serialize_with = "ser_rat")]
    pub tau: BigRational,
    #[serde(serialize_with = "ser_rat")]
    pub s0: BigRational,
    #[serde(serialize_with = "ser_rats")]
    pub a: Vec<BigRational>,
    /// `α_k e^{−s0 τ}`.
    #[serde(serialize_with = "ser_rats")]
    pub alpha_reduced: Vec<BigRational>,
}

fn ser_rat<S: serde::Serializer>(x: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

fn ser_rats<S: serde::Serializer>(x: &[BigRational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(x.iter().map(|v| v.to_string()))
}

/// A synthesized maximal-multiplicity design.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MIDDesign {
    pub n: usize,
    pub m: usize,
    pub tau: f64,
    pub s0: f64,
    pub a: Vec<f64>,
    pub alpha: Vec<f64>,
    pub exact: ExactCoefficients,
}

fn validate(n: usize, m: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    if m > n {
        return Err(Error::InvalidParameter(format!("m = {m} exceeds n = {n}")));
    }
    Ok(())
}

/// Coefficients for exact rational `τ > 0` and `s0`.
pub fn synthesize_exact(n: usize, m: usize, tau: &BigRational, s0: &BigRational) -> Result<MIDDesign> {
    validate(n, m)?;
    if !tau.is_positive() {
        return Err(Error::InvalidParameter(format!("delay must be positive, got {tau}")));
    }
    let ni = n as i64;
    let mi = m as i64;
    let n_fact = BigRational::from_integer(factorial(n as u64));
    let s_pow: Vec<BigRational> = (0..=n).map(|k| pow(s0, k)).collect();
    let tau_pow: Vec<BigRational> = (0..=n).map(|k| pow(tau, k)).collect();

    let a: Vec<BigRational> = (0..n)
        .map(|k| {
            let sum = (k..=n).fold(BigRational::zero(), |acc, j| {
                let c = binomial(j as i64, k as i64) * binomial(mi + ni - j as i64, mi);
                let den = factorial(j as u64);
                acc + BigRational::new(c, den) * &s_pow[j - k] / &tau_pow[n - j]
            });
            sign((n - k) % 2 == 1) * &n_fact * sum
        })
        .collect();

    let alpha_reduced: Vec<BigRational> = (0..=m)
        .map(|k| {
            let sum = (k..=m).fold(BigRational::zero(), |acc, j| {
                let num = factorial((m + n - j) as u64);
                let den = factorial(k as u64) * factorial((j - k) as u64) * factorial((m - j) as u64);
                acc + sign((j - k) % 2 == 1) * BigRational::new(num, den) * &s_pow[j - k] / &tau_pow[n - j]
            });
            sign((n - 1) % 2 == 1) * sum
        })
        .collect();

    let tau_f = rat_to_f64(tau);
    let s0_f = rat_to_f64(s0);
    let growth = (s0_f * tau_f).exp();
    Ok(MIDDesign {
        n,
        m,
        tau: tau_f,
        s0: s0_f,
        a: a.iter().map(rat_to_f64).collect(),
        alpha: alpha_reduced.iter().map(|x| rat_to_f64(x) * growth).collect(),
        exact: ExactCoefficients {
            tau: tau.clone(),
            s0: s0.clone(),
            a,
            alpha_reduced,
        },
    })
}

/// Coefficients `a_k`, `α_k` placing a root of multiplicity `n + m + 1` at
/// `s0`. The float inputs are taken at their exact binary values.
pub fn synthesize_coeffs(n: usize, m: usize, tau: f64, s0: f64) -> Result<MIDDesign> {
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::InvalidParameter(format!("delay must be positive and finite, got {tau}")));
    }
    if !s0.is_finite() {
        return Err(Error::InvalidParameter(format!("s0 must be finite, got {s0}")));
    }
    synthesize_exact(n, m, &rat_from_f64(tau)?, &rat_from_f64(s0)?)
}

impl MIDDesign {
    pub fn quasipolynomial(&self) -> Quasipolynomial {
        Quasipolynomial::new(self.n, self.m, self.tau, self.a.clone(), self.alpha.clone())
            .expect("synthesized coefficients are finite")
    }

    pub fn degree_bound(&self) -> usize {
        self.n + self.m + 1
    }

    /// `Δ^{(j)}(s0)` in exact arithmetic (the exponential factors cancel).
    pub fn exact_derivative_at_s0(&self, j: usize) -> BigRational {
        let ex = &self.exact;
        let mut p = ex.a.clone();
        p.push(BigRational::one());
        let p = Polynomial::new(p);
        let q = Polynomial::new(ex.alpha_reduced.clone());
        let deriv = |poly: &Polynomial, i: usize| (0..i).fold(poly.clone(), |acc, _| acc.derivative());
        let minus_tau = -ex.tau.clone();
        let delayed = (0..=j).fold(BigRational::zero(), |acc, i| {
            acc + BigRational::from_integer(binomial(j as i64, i as i64))
                * pow(&minus_tau, j - i)
                * deriv(&q, i).eval_exact(&ex.s0)
        });
        deriv(&p, j).eval_exact(&ex.s0) + delayed
    }

    /// `n! τ^{m+1}`, the value of `Δ^{(n+m+1)}(s0)`.
    pub fn expected_top_derivative(&self) -> BigRational {
        BigRational::from_integer(factorial(self.n as u64)) * pow(&self.exact.tau, self.m + 1)
    }

    /// `−a_{n−1}/n − (m+1)/τ` in exact arithmetic.
    pub fn exact_s0_from_coeffs(&self) -> BigRational {
        -(&self.exact.a[self.n - 1]) / rat(self.n as i64) - rat(self.m as i64 + 1) / &self.exact.tau
    }

    /// `P̃` and `Q̃` in exact arithmetic.
    pub fn normalized(&self) -> NormalizedForm {
        let ex = &self.exact;
        let mut p = ex.a.clone();
        p.push(BigRational::one());
        let inv_tau = BigRational::one() / &ex.tau;
        let tau_n = pow(&ex.tau, self.n);
        NormalizedForm {
            p_tilde: Polynomial::new(p).compose_affine(&ex.s0, &inv_tau).scale(&tau_n),
            q_tilde: Polynomial::new(ex.alpha_reduced.clone())
                .compose_affine(&ex.s0, &inv_tau)
                .scale(&tau_n),
            n: self.n,
            m: self.m,
            tau: self.tau,
            s0: self.s0,
        }
    }

    /// The characteristic function evaluated from the design's structure
    /// rather than from its rounded coefficients.
    pub fn characteristic(&self) -> ExactCharacteristic {
        let nf = self.normalized();
        ExactCharacteristic {
            n: self.n,
            m: self.m,
            tau: self.tau,
            s0: self.s0,
            p_tilde: nf.p_tilde.to_f64(),
            q_tilde: nf.q_tilde.to_f64(),
            kummer: KummerParams::new((self.m + 1) as f64, (self.n + self.m + 2) as f64)
                .expect("b = n + m + 2 is positive"),
            lead: rat_to_f64(&BigRational::new(
                factorial(self.n as u64),
                factorial((self.n + self.m + 1) as u64),
            )),
        }
    }
}

/// `Δ̃(z) = P̃(z) + e^{−z} Q̃(z)` together with the point it came from.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormalizedForm {
    #[serde(serialize_with = "ser_poly")]
    pub p_tilde: Polynomial,
    #[serde(serialize_with = "ser_poly")]
    pub q_tilde: Polynomial,
    pub n: usize,
    pub m: usize,
    pub tau: f64,
    pub s0: f64,
}

fn ser_poly<S: serde::Serializer>(p: &Polynomial, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(p.coeffs().iter().map(|v| v.to_string()))
}

impl NormalizedForm {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.p_tilde.eval(z) + (-z).exp() * self.q_tilde.eval(z)
    }

    /// `Σ|p̃_k||z|^k + |e^{−z}| Σ|q̃_k||z|^k`.
    pub fn term_magnitude(&self, z: Complex64) -> f64 {
        let r = z.norm();
        let mag = |p: &Polynomial| p.to_f64().iter().rev().fold(0.0, |acc, c| acc * r + c.abs());
        mag(&self.p_tilde) + (-z.re).exp() * mag(&self.q_tilde)
    }
}

/// `Δ̃` of an arbitrary quasipolynomial at `s0`: `P̃(z) = τ^n P(s0 + z/τ)`,
/// `Q̃(z) = e^{−s0τ} τ^n Q(s0 + z/τ)`.
pub fn normalize(q: &Quasipolynomial, s0: f64) -> Result<NormalizedForm> {
    let tau = rat_from_f64(q.tau())?;
    let s0r = rat_from_f64(s0)?;
    let inv_tau = BigRational::one() / &tau;
    let tau_n = pow(&tau, q.n());
    let p = Polynomial::from_f64(&q.p_coeffs())?;
    let damp = rat_from_f64((-s0 * q.tau()).exp())?;
    let alpha = Polynomial::from_f64(q.alpha())?;
    Ok(NormalizedForm {
        p_tilde: p.compose_affine(&s0r, &inv_tau).scale(&tau_n),
        q_tilde: alpha.compose_affine(&s0r, &inv_tau).scale(&(tau_n * damp)),
        n: q.n(),
        m: q.m(),
        tau: q.tau(),
        s0,
    })
}

/// The characteristic function of a design, evaluated without the rounding
/// noise that splits a root of multiplicity `N = n + m + 1` into a cluster
/// of radius `~ε^{1/N}`.
///
/// With `z = τ(s − s0)`, `Δ(s) = τ^{−n} Δ̃(z)`. For `|z| ≤ 20` the value is
/// `τ^{−n} n!/N! z^N Φ(m+1, N+1, −z)`; farther out `P̃ + e^{−z}Q̃` is used,
/// whose terms no longer cancel.
#[derive(Clone, Debug)]
pub struct ExactCharacteristic {
    n: usize,
    m: usize,
    tau: f64,
    s0: f64,
    p_tilde: Vec<f64>,
    q_tilde: Vec<f64>,
    kummer: KummerParams,
    lead: f64,
}

impl ExactCharacteristic {
    fn z(&self, s: Complex64) -> Complex64 {
        (s - self.s0) * self.tau
    }

    /// `Δ̃^{(j)}(z)`.
    fn normalized_derivative(&self, z: Complex64, j: usize) -> Result<Complex64> {
        let big_n = self.n + self.m + 1;
        if z.norm() <= KUMMER_REGION {
            // Leibniz on z^N · Φ(−z)
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..=j {
                let d = j - i;
                if d > big_n {
                    continue;
                }
                let falling: f64 = ((big_n - d + 1)..=big_n).map(|x| x as f64).product();
                let zp = z.powu((big_n - d) as u32) * falling;
                if zp.norm() == 0.0 {
                    continue;
                }
                let phi = kummer_phi_derivative(&self.kummer, -z, i, DEFAULT_TOL)?;
                let s = if i % 2 == 1 { -1.0 } else { 1.0 };
                acc += zp * phi * (binom(j, i) * s);
            }
            Ok(acc * self.lead)
        } else {
            let (p, delayed) = self.exp_form_parts(z, j);
            Ok(p + (-z).exp() * delayed)
        }
    }

    /// `P̃^{(j)}(z)` and the factor multiplying `e^{−z}` in `Δ̃^{(j)}(z)`.
    fn exp_form_parts(&self, z: Complex64, j: usize) -> (Complex64, Complex64) {
        let p = crate::polycore::horner_derivative(&self.p_tilde, z, j);
        let mut delayed = Complex64::new(0.0, 0.0);
        for i in 0..=j.min(self.m) {
            let s = if (j - i) % 2 == 1 { -1.0 } else { 1.0 };
            delayed += crate::polycore::horner_derivative(&self.q_tilde, z, i) * (binom(j, i) * s);
        }
        (p, delayed)
    }

    fn poly_magnitude(&self, c: &[f64], r: f64) -> f64 {
        c.iter().rev().fold(0.0, |acc, x| acc * r + x.abs())
    }
}

fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

impl Analytic for ExactCharacteristic {
    fn derivative(&self, s: Complex64, order: usize) -> Result<Complex64> {
        let z = self.z(s);
        Ok(self.normalized_derivative(z, order)? * self.tau.powi(order as i32 - self.n as i32))
    }

    /// Near `s0` the Kummer form bounds the rounding noise by its own
    /// series; elsewhere the terms of `P̃ + e^{−z}Q̃` do. The smaller bound
    /// is used.
    fn scale(&self, s: Complex64) -> f64 {
        let z = self.z(s);
        let r = z.norm();
        let exp_form = self.poly_magnitude(&self.p_tilde, r) + (-z.re).exp() * self.poly_magnitude(&self.q_tilde, r);
        let mag = if r <= KUMMER_REGION {
            let big_n = (self.n + self.m + 1) as i32;
            let series = kummer_phi_detailed(&self.kummer, -z, DEFAULT_TOL)
                .map(|v| v.magnitude)
                .unwrap_or(1.0);
            exp_form.min(self.lead * r.powi(big_n) * series)
        } else {
            exp_form
        };
        (mag * self.tau.powi(-(self.n as i32))).max(f64::MIN_POSITIVE)
    }

    fn multiplicity_cap(&self) -> Option<usize> {
        Some(self.n + self.m + 1)
    }

    fn scaled_sample(&self, s: Complex64) -> Result<(Complex64, Complex64, f64)> {
        let z = self.z(s);
        if z.norm() <= KUMMER_REGION || z.re >= 0.0 {
            return Ok((self.value(s)?, self.derivative(s, 1)?, self.scale(s)));
        }
        let w = z.re.exp();
        let phase = Complex64::from_polar(1.0, -z.im);
        let (p0, q0) = self.exp_form_parts(z, 0);
        let (p1, q1) = self.exp_form_parts(z, 1);
        let r = z.norm();
        let unit = self.tau.powi(-(self.n as i32));
        let scale = (w * self.poly_magnitude(&self.p_tilde, r) + self.poly_magnitude(&self.q_tilde, r)) * unit;
        Ok((
            (w * p0 + phase * q0) * unit,
            (w * p1 + phase * q1) * (unit * self.tau),
            scale.max(f64::MIN_POSITIVE),
        ))
    }
}

/// Outcome of one item of the equivalence check.
#[derive(Clone, Debug, Serialize)]
pub struct ItemCheck {
    pub holds: bool,
    /// Worst observed error divided by its tolerance (≤ 1 when `holds`).
    pub worst_ratio: f64,
    pub detail: String,
}

impl ItemCheck {
    fn from_ratio(worst_ratio: f64, detail: String) -> Self {
        Self {
            holds: worst_ratio <= 1.0,
            worst_ratio,
            detail,
        }
    }
}

/// The four characterizations evaluated independently at `s0`.
#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceReport {
    pub n: usize,
    pub m: usize,
    pub tau: f64,
    pub s0: f64,
    /// Multiplicity `n + m + 1` at `s0` (derivative test).
    pub item_a: ItemCheck,
    /// `(P̃, Q̃)` equals the normalized Padé pair of `e^z`.
    pub item_b: ItemCheck,
    /// `Δ̃` equals its Kummer form on a grid in `|z| ≤ 5`.
    pub item_c: ItemCheck,
    /// The coefficients equal the synthesized ones.
    pub item_d: ItemCheck,
    /// All four items agree.
    pub consistent: bool,
}

impl EquivalenceReport {
    pub fn all_hold(&self) -> bool {
        self.item_a.holds && self.item_b.holds && self.item_c.holds && self.item_d.holds
    }

    pub fn none_hold(&self) -> bool {
        !(self.item_a.holds || self.item_b.holds || self.item_c.holds || self.item_d.holds)
    }
}

/// The 81-point grid: the origin and 16 angles on each of the radii
/// 1, 2, 3, 4, 5.
pub fn kummer_grid() -> Vec<Complex64> {
    let mut g = vec![Complex64::new(0.0, 0.0)];
    for r in 1..=5 {
        for k in 0..16 {
            g.push(Complex64::from_polar(r as f64, k as f64 * std::f64::consts::TAU / 16.0));
        }
    }
    g
}

fn coeff_ratio(x: &[f64], y: &[f64]) -> f64 {
    let len = x.len().max(y.len());
    (0..len)
        .map(|k| {
            let xk = x.get(k).copied().unwrap_or(0.0);
            let yk = y.get(k).copied().unwrap_or(0.0);
            (xk - yk).abs() / (COEFF_RTOL * yk.abs().max(1.0))
        })
        .fold(0.0, f64::max)
}

fn check_item_a(q: &Quasipolynomial, s0: f64) -> ItemCheck {
    let s = Complex64::new(s0, 0.0);
    let big_n = q.degree_bound();
    let worst = (0..big_n)
        .map(|j| q.eval(s, j).norm() / (MULTIPLICITY_RTOL * q.term_magnitude(s, j)))
        .fold(0.0, f64::max);
    let top = q.eval(s, big_n).norm();
    ItemCheck::from_ratio(
        worst,
        format!("|Δ^(j)(s0)| relative to term size, j < {big_n}; |Δ^({big_n})(s0)| = {top:e}"),
    )
}

fn check_item_b(nf: &NormalizedForm) -> ItemCheck {
    let pair = exp_pade_normalized(nf.n, nf.m);
    let worst = coeff_ratio(&nf.p_tilde.to_f64(), &pair.den.to_f64())
        .max(coeff_ratio(&nf.q_tilde.to_f64(), &pair.num.to_f64()));
    ItemCheck::from_ratio(worst, format!("normalized pair against Padé ({}, {}) of e^z", nf.m, nf.n))
}

fn check_item_c(nf: &NormalizedForm) -> Result<ItemCheck> {
    let big_n = nf.n + nf.m + 1;
    let kp = KummerParams::new((nf.m + 1) as f64, (big_n + 1) as f64)?;
    let lead = rat_to_f64(&BigRational::new(factorial(nf.n as u64), factorial(big_n as u64)));
    let grid = kummer_grid();
    let mut scale = 0.0f64;
    let mut worst = 0.0f64;
    for &z in &grid {
        let phi = crate::hyperfunc::kummer_phi(&kp, -z, DEFAULT_TOL)?;
        let rhs = z.powu(big_n as u32) * phi * lead;
        worst = worst.max((nf.eval(z) - rhs).norm());
        scale = scale.max(nf.term_magnitude(z));
    }
    Ok(ItemCheck::from_ratio(
        worst / (KUMMER_RTOL * scale),
        format!("max grid error {worst:e} against term scale {scale:e} over {} points", grid.len()),
    ))
}

fn check_item_d(q: &Quasipolynomial, s0: f64) -> Result<ItemCheck> {
    let d = synthesize_coeffs(q.n(), q.m(), q.tau(), s0)?;
    let worst = coeff_ratio(q.a(), &d.a).max(coeff_ratio(q.alpha(), &d.alpha));
    Ok(ItemCheck::from_ratio(worst, "coefficients against the synthesis formula".into()))
}

/// Evaluates the four characterizations of a maximal-multiplicity root at
/// `s0` independently of each other.
pub fn check_equivalences(q: &Quasipolynomial, s0: f64) -> Result<EquivalenceReport> {
    let nf = normalize(q, s0)?;
    let item_a = check_item_a(q, s0);
    let item_b = check_item_b(&nf);
    let item_c = check_item_c(&nf)?;
    let item_d = check_item_d(q, s0)?;
    let holds = [item_a.holds, item_b.holds, item_c.holds, item_d.holds];
    Ok(EquivalenceReport {
        n: q.n(),
        m: q.m(),
        tau: q.tau(),
        s0,
        consistent: holds.iter().all(|&h| h) || holds.iter().all(|&h| !h),
        item_a,
        item_b,
        item_c,
        item_d,
    })
}

/// `−a_{n−1}/n − (m+1)/τ`.
pub fn s0_from_coeffs(n: usize, m: usize, tau: f64, a_top: f64) -> f64 {
    -a_top / n as f64 - (m + 1) as f64 / tau
}

/// Exponential stability of a design: `a_{n−1} > −n(m+1)/τ`.
///
/// The coefficients are assumed to come from [`synthesize_coeffs`]; use
/// [`stability_criterion_strict`] to have that verified.
pub fn stability_criterion(n: usize, m: usize, tau: f64, a_top: f64) -> bool {
    a_top > -((n * (m + 1)) as f64) / tau
}

/// [`stability_criterion`] after confirming that `q` is a maximal
/// multiplicity design for the `s0` implied by its coefficients.
pub fn stability_criterion_strict(q: &Quasipolynomial) -> Result<bool> {
    let a_top = q.a()[q.n() - 1];
    let s0 = s0_from_coeffs(q.n(), q.m(), q.tau(), a_top);
    let report = check_equivalences(q, s0)?;
    if !report.all_hold() {
        return Err(Error::Precondition(format!(
            "coefficients do not place a root of multiplicity {} at s0 = {s0}",
            q.degree_bound()
        )));
    }
    Ok(stability_criterion(q.n(), q.m(), q.tau(), a_top))
}

/// Numerical corroboration that `s0` is the rightmost root of a design.
#[derive(Clone, Debug, Serialize)]
pub struct DominanceReport {
    pub s0: f64,
    pub right_bound: f64,
    pub im_cap: f64,
    /// Zeros counted in `[s0 + 1e−6, R] × [−im_cap, im_cap]`.
    pub right_count: usize,
    pub right_rect: Rect,
    pub strip: StripReport,
    pub dominant: bool,
    pub note: &'static str,
}

const DOMINANCE_NOTE: &str = "numerical corroboration within |Im s| <= im_cap; dominance for m <= n is a theorem";

/// Counts zeros of the design's characteristic function to the right of
/// `s0` and checks strip uniqueness.
pub fn verify_dominance(d: &MIDDesign, im_cap: f64) -> Result<DominanceReport> {
    let q = d.quasipolynomial();
    let f = d.characteristic();
    let right = q.right_bound().max(d.s0 + 1.0);
    let rect = Rect::new(d.s0 + DOMINANCE_OFFSET, right, -im_cap, im_cap)?;
    let count = count_zeros(&f, &rect)?;
    let strip = strip_uniqueness(&f, d.s0, d.tau, q.right_bound())?;
    Ok(DominanceReport {
        s0: d.s0,
        right_bound: right,
        im_cap,
        right_count: count.count,
        right_rect: count.rect,
        dominant: count.count == 0 && strip.unique,
        strip,
        note: DOMINANCE_NOTE,
    })
}

/// [`check_equivalences`] for a batch of designs, in parallel, results in
/// input order.
pub fn check_designs(designs: &[MIDDesign]) -> Vec<Result<EquivalenceReport>> {
    designs
        .par_iter()
        .map(|d| check_equivalences(&d.quasipolynomial(), d.s0))
        .collect()
}

/// `true` when `x` equals `y` to `rtol` relative.
pub fn rational_close(x: &BigRational, y: &BigRational, rtol: f64) -> bool {
    let diff = (x - y).abs();
    let bound = y.abs().to_f64().unwrap_or(f64::INFINITY).max(f64::MIN_POSITIVE) * rtol;
    rat_to_f64(&diff) <= bound
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::ratio;

    #[test]
    fn synthesis_examples() {
        let d = synthesize_coeffs(1, 0, 1.0, 0.0).unwrap();
        assert_eq!(d.a, vec![-1.0]);
        assert_eq!(d.alpha, vec![1.0]);
        let d = synthesize_coeffs(2, 1, 1.0, 0.0).unwrap();
        assert_eq!(d.a, vec![6.0, -4.0]);
        assert_eq!(d.alpha, vec![-6.0, -2.0]);
        let d = synthesize_coeffs(1, 0, 1.0, -1.0).unwrap();
        assert_eq!(d.a, vec![0.0]);
        assert!((d.alpha[0] - (-1.0f64).exp()).abs() < 1e-16);
    }

    #[test]
    fn synthesis_rejects_bad_parameters() {
        assert!(synthesize_coeffs(0, 0, 1.0, 0.0).is_err());
        assert!(synthesize_coeffs(1, 2, 1.0, 0.0).is_err());
        assert!(synthesize_coeffs(1, 0, 0.0, 0.0).is_err());
        assert!(synthesize_coeffs(1, 0, 1.0, f64::NAN).is_err());
    }

    #[test]
    fn exact_derivatives_at_s0() {
        let d = synthesize_exact(3, 2, &ratio(1, 2), &ratio(-2, 1)).unwrap();
        for j in 0..d.degree_bound() {
            assert!(d.exact_derivative_at_s0(j).is_zero(), "j = {j}");
        }
        assert_eq!(d.exact_derivative_at_s0(d.degree_bound()), d.expected_top_derivative());
        assert_eq!(d.exact_s0_from_coeffs(), ratio(-2, 1));
    }

    #[test]
    fn normalization_examples() {
        let d = synthesize_coeffs(1, 0, 1.0, 0.0).unwrap();
        let nf = normalize(&d.quasipolynomial(), 0.0).unwrap();
        assert_eq!(nf.p_tilde, Polynomial::from_i64(&[-1, 1]));
        assert_eq!(nf.q_tilde, Polynomial::from_i64(&[1]));
        let d = synthesize_coeffs(2, 1, 1.0, 0.0).unwrap();
        let nf = normalize(&d.quasipolynomial(), 0.0).unwrap();
        assert_eq!(nf.p_tilde, Polynomial::from_i64(&[6, -4, 1]));
        assert_eq!(nf.q_tilde, Polynomial::from_i64(&[-6, -2]));
        assert_eq!(d.normalized().p_tilde, nf.p_tilde);
    }

    #[test]
    fn normalized_form_reproduces_delta() {
        let d = synthesize_coeffs(3, 1, 0.7, -0.4).unwrap();
        let q = d.quasipolynomial();
        let nf = normalize(&q, d.s0).unwrap();
        for z in kummer_grid() {
            let direct = q.eval(Complex64::new(d.s0, 0.0) + z / d.tau, 0) * d.tau.powi(3);
            assert!((nf.eval(z) - direct).norm() <= 1e-10 * nf.term_magnitude(z));
        }
    }

    #[test]
    fn equivalences_on_designs() {
        for (n, m, tau, s0) in [(2, 1, 1.0, 0.0), (1, 0, 1.0, -1.0), (3, 3, 0.3, 1.5)] {
            let d = synthesize_coeffs(n, m, tau, s0).unwrap();
            let r = check_equivalences(&d.quasipolynomial(), s0).unwrap();
            assert!(r.all_hold(), "{r:?}");
            assert!(r.consistent);
        }
    }

    #[test]
    fn equivalences_fail_together_when_perturbed() {
        let q = Quasipolynomial::new(1, 0, 1.0, vec![-1.0], vec![0.9]).unwrap();
        let r = check_equivalences(&q, 0.0).unwrap();
        assert!(r.none_hold(), "{r:?}");
        assert!(r.consistent);
    }

    #[test]
    fn kummer_identity_at_one() {
        let d = synthesize_coeffs(1, 0, 1.0, -1.0).unwrap();
        let nf = d.normalized();
        let z = Complex64::new(1.0, 0.0);
        let kp = KummerParams::new(1.0, 3.0).unwrap();
        let rhs = crate::hyperfunc::kummer_phi(&kp, -z, DEFAULT_TOL).unwrap() * 0.5;
        assert!((nf.eval(z) - rhs).norm() < 1e-10);
    }

    #[test]
    fn relation_and_stability() {
        assert_eq!(s0_from_coeffs(2, 1, 1.0, -4.0), 0.0);
        assert_eq!(s0_from_coeffs(1, 0, 1.0, -1.0), 0.0);
        assert_eq!(s0_from_coeffs(1, 0, 1.0, 0.0), -1.0);
        assert!(stability_criterion(1, 0, 1.0, -0.5));
        assert!(!stability_criterion(1, 0, 1.0, -1.0));
        assert!(!stability_criterion(2, 1, 1.0, -4.0));
        let d = synthesize_coeffs(2, 1, 1.0, -0.5).unwrap();
        assert!(stability_criterion_strict(&d.quasipolynomial()).unwrap());
        let bad = Quasipolynomial::new(1, 0, 1.0, vec![-0.5], vec![0.3]).unwrap();
        assert!(matches!(stability_criterion_strict(&bad), Err(Error::Precondition(_))));
    }

    #[test]
    fn exact_characteristic_matches_float_form() {
        let d = synthesize_coeffs(2, 1, 0.8, -0.5).unwrap();
        let f = d.characteristic();
        let q = d.quasipolynomial();
        for s in [Complex64::new(1.0, 2.0), Complex64::new(-3.0, 7.0), Complex64::new(30.0, -1.0)] {
            for j in 0..3 {
                let a = f.derivative(s, j).unwrap();
                let b = q.eval(s, j);
                assert!((a - b).norm() <= 1e-9 * q.term_magnitude(s, j), "s = {s}, j = {j}");
            }
        }
        let s0 = Complex64::new(d.s0, 0.0);
        for j in 0..4 {
            assert_eq!(f.derivative(s0, j).unwrap(), Complex64::new(0.0, 0.0));
        }
        let top = f.derivative(s0, 4).unwrap();
        assert!((top.re - 2.0 * 0.8f64.powi(2)).abs() < 1e-12);
    }

    #[test]
    fn dominance_examples() {
        for (n, m, tau, s0) in [(1, 0, 1.0, 0.0), (2, 1, 1.0, 0.0), (3, 2, 0.5, -2.0)] {
            let d = synthesize_coeffs(n, m, tau, s0).unwrap();
            let r = verify_dominance(&d, 4.0 * std::f64::consts::TAU / tau).unwrap();
            assert!(r.dominant, "{r:?}");
            assert_eq!(r.strip.multiplicity, n + m + 1);
        }
    }
}
