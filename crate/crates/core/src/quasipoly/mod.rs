//! The characteristic quasipolynomial of a single-delay linear DDE,
//!
//! ```text
//! Δ(s) = s^n + Σ_{k<n} a_k s^k + e^{-sτ} Σ_{k≤m} α_k s^k,
//! ```
//!
//! its analytic derivatives, and zero location by the argument principle.

mod contour;

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polycore::horner_derivative;

pub use contour::{
    count_zeros, derivative_multiplicity, find_zeros, multiplicity_at, Analytic, FloatPolynomial,
    Rect, RootMethod, RootRecord, ZeroCount, ZeroSearch, BOUNDARY_TOL, INFLATION_STEP,
    MAX_INFLATIONS, MULT_TOL,
};

/// Inset of the strip `|Im s| < 2π/τ` used by the uniqueness check.
pub const STRIP_INSET: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DelayKind {
    /// `m < n`
    Retarded,
    /// `m = n`
    Neutral,
}

/// `Δ` with float coefficients. `a[k]` multiplies `s^k`, the coefficient of
/// `s^n` is 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Quasipolynomial {
    n: usize,
    m: usize,
    tau: f64,
    a: Vec<f64>,
    alpha: Vec<f64>,
}

impl Quasipolynomial {
    pub fn new(n: usize, m: usize, tau: f64, a: Vec<f64>, alpha: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("n must be at least 1".into()));
        }
        if m > n {
            return Err(Error::InvalidParameter(format!("m = {m} exceeds n = {n}")));
        }
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::InvalidParameter(format!("delay must be positive and finite, got {tau}")));
        }
        if a.len() != n {
            return Err(Error::InvalidParameter(format!("expected {n} coefficients a_k, got {}", a.len())));
        }
        if alpha.len() != m + 1 {
            return Err(Error::InvalidParameter(format!(
                "expected {} coefficients alpha_k, got {}",
                m + 1,
                alpha.len()
            )));
        }
        if a.iter().chain(&alpha).any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter("coefficients must be finite".into()));
        }
        Ok(Self { n, m, tau, a, alpha })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn kind(&self) -> DelayKind {
        if self.m < self.n {
            DelayKind::Retarded
        } else {
            DelayKind::Neutral
        }
    }

    pub fn is_retarded(&self) -> bool {
        self.kind() == DelayKind::Retarded
    }

    /// Coefficients of the undelayed polynomial, monic of degree `n`.
    pub fn p_coeffs(&self) -> Vec<f64> {
        let mut p = self.a.clone();
        p.push(1.0);
        p
    }

    /// The Pólya–Szegő bound `n + m + 1` on the multiplicity of any zero.
    pub fn degree_bound(&self) -> usize {
        self.n + self.m + 1
    }

    /// `Σ|a_k| + Σ|α_k| + 1`.
    pub fn coefficient_scale(&self) -> f64 {
        self.a.iter().chain(&self.alpha).map(|x| x.abs()).sum::<f64>() + 1.0
    }

    /// Sum of the moduli of the terms that make up `Δ^{(order)}(s)`.
    pub fn term_magnitude(&self, s: Complex64, order: usize) -> f64 {
        let r = s.norm();
        let p = self.p_coeffs();
        let falling = |k: usize, j: usize| ((k - j + 1)..=k).map(|i| i as f64).product::<f64>();
        let poly_part = |c: &[f64], j: usize| -> f64 {
            (j..c.len())
                .map(|k| c[k].abs() * falling(k, j) * r.powi((k - j) as i32))
                .sum()
        };
        let damping = (-s.re * self.tau).exp();
        let delayed: f64 = (0..=order)
            .map(|i| binom(order, i) * self.tau.powi((order - i) as i32) * poly_part(&self.alpha, i))
            .sum();
        poly_part(&p, order) + damping * delayed
    }

    /// `Δ^{(order)}(s)`, by the Leibniz rule on `e^{-sτ}Q(s)`.
    pub fn eval(&self, s: Complex64, order: usize) -> Complex64 {
        let (p, delayed) = self.parts(s, order);
        p + (-s * self.tau).exp() * delayed
    }

    /// The polynomial part of `Δ^{(order)}(s)` and the factor multiplying
    /// `e^{-sτ}` in it.
    fn parts(&self, s: Complex64, order: usize) -> (Complex64, Complex64) {
        let p = horner_derivative(&self.p_coeffs(), s, order);
        let mut delayed = Complex64::new(0.0, 0.0);
        for i in 0..=order.min(self.m) {
            let w = binom(order, i) * (-self.tau).powi((order - i) as i32);
            delayed += horner_derivative(&self.alpha, s, i) * w;
        }
        (p, delayed)
    }

    /// A right bound `R`: `Δ` has no zero with `Re s ≥ R`.
    ///
    /// Let `c_k = |a_k| + |α_k|` for `k < n`.
    ///
    /// *Retarded case.* For `Re s ≥ 0` we have `|e^{-sτ}| ≤ 1`, so
    /// `|Δ(s)| ≥ |s|^n − Σ c_k |s|^k = h(|s|)`. By Descartes' rule `h` has a
    /// single positive root `ρ` and `h > 0` beyond it, hence every zero with
    /// `Re s ≥ 0` has `|s| ≤ ρ`, and `R = ρ + 1` works.
    ///
    /// *Neutral case.* For `Re s ≥ σ₀ = max(0, ln(2|α_n|)/τ)` the delayed
    /// leading term obeys `|α_n e^{-sτ}| ≤ 1/2`, so
    /// `|Δ(s)| ≥ |s|^n/2 − Σ c_k|s|^k`, and the same argument applied to
    /// `x^n − 2Σ c_k x^k` gives a root `ρ₂`; `R = max(σ₀, ρ₂) + 1` works.
    ///
    /// Both bounds are never larger than `1 + Σ c_k` (resp. its neutral
    /// analogue) and are usually much smaller, which keeps `e^{-sτ}` within
    /// range on contours built from `R`.
    pub fn right_bound(&self) -> f64 {
        let mut c: Vec<f64> = (0..self.n)
            .map(|k| self.a[k].abs() + self.alpha.get(k).map_or(0.0, |x| x.abs()))
            .collect();
        let sigma0 = if self.kind() == DelayKind::Neutral {
            c.iter_mut().for_each(|x| *x *= 2.0);
            let lead = self.alpha[self.n].abs();
            if lead > 0.0 {
                ((2.0 * lead).ln() / self.tau).max(0.0)
            } else {
                0.0
            }
        } else {
            0.0
        };
        sigma0.max(positive_root(&c)) + 1.0
    }

    /// Default strip half-height `4·2π/τ` for the rightmost-root search.
    pub fn default_im_cap(&self) -> f64 {
        4.0 * TAU / self.tau
    }
}

impl Analytic for Quasipolynomial {
    fn derivative(&self, s: Complex64, order: usize) -> Result<Complex64> {
        Ok(self.eval(s, order))
    }

    fn scale(&self, s: Complex64) -> f64 {
        self.term_magnitude(s, 0).max(f64::MIN_POSITIVE)
    }

    fn multiplicity_cap(&self) -> Option<usize> {
        Some(self.degree_bound())
    }

    fn scaled_sample(&self, s: Complex64) -> Result<(Complex64, Complex64, f64)> {
        let x = s.re * self.tau;
        if x >= 0.0 {
            return Ok((self.eval(s, 0), self.eval(s, 1), self.scale(s)));
        }
        let w = x.exp();
        let phase = Complex64::from_polar(1.0, -s.im * self.tau);
        let (p0, q0) = self.parts(s, 0);
        let (p1, q1) = self.parts(s, 1);
        let r = s.norm();
        let mag = |c: &[f64]| c.iter().rev().fold(0.0, |acc, v| acc * r + v.abs());
        let scale = w * mag(&self.p_coeffs()) + mag(&self.alpha);
        Ok((w * p0 + phase * q0, w * p1 + phase * q1, scale.max(f64::MIN_POSITIVE)))
    }
}

fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Unique positive root of `x^n − Σ_{k<n} c_k x^k` (`c_k ≥ 0`), or 0 when all
/// `c_k` vanish.
fn positive_root(c: &[f64]) -> f64 {
    let n = c.len();
    let h = |x: f64| x.powi(n as i32) - c.iter().rev().fold(0.0, |acc, ck| acc * x + ck);
    let mut hi = 1.0 + c.iter().sum::<f64>();
    if c.iter().all(|&x| x == 0.0) {
        return 0.0;
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if h(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-14 * hi {
            break;
        }
    }
    hi
}

/// `Δ^{(order)}(s)`.
pub fn qp_eval(q: &Quasipolynomial, s: Complex64, order: usize) -> Complex64 {
    q.eval(s, order)
}

/// The Pólya–Szegő bound `n + m + 1`.
pub fn degree_bound(q: &Quasipolynomial) -> usize {
    q.degree_bound()
}

/// Number of zeros of `Δ` in `r`, with multiplicity.
pub fn count_zeros_in_rect(q: &Quasipolynomial, r: &Rect) -> Result<usize> {
    Ok(count_zeros(q, r)?.count)
}

/// All zeros of `Δ` in `r`. See [`find_zeros`].
pub fn find_zeros_in_rect(q: &Quasipolynomial, r: &Rect, tol: f64) -> Result<ZeroSearch> {
    find_zeros(q, r, tol)
}

/// Result of a rightmost-zero search. The search covers `|Im s| ≤ im_cap`
/// only; nothing is claimed about zeros outside that strip.
#[derive(Clone, Debug, Serialize)]
pub struct Rightmost {
    pub root: RootRecord,
    /// Every zero found in the final search rectangle.
    pub others: Vec<RootRecord>,
    pub right_bound: f64,
    pub im_cap: f64,
    pub searched: Rect,
    pub note: &'static str,
}

const STRIP_NOTE: &str = "rightmost within the strip |Im s| <= im_cap; zeros beyond the cap are not searched";

/// Rightmost zero of `f` in `|Im s| ≤ im_cap`, given that `f` has no zero with
/// `Re s ≥ right`.
///
/// Rectangles `[σ, right] × [−im_cap, im_cap]` are counted for `σ` moving
/// left by doubling steps until one contains a zero; its zeros are then
/// located and the one of largest real part returned.
pub fn rightmost_root_of<F: Analytic + ?Sized>(
    f: &F,
    right: f64,
    im_cap: f64,
    tol: f64,
) -> Result<Rightmost> {
    if !(im_cap > 0.0 && im_cap.is_finite()) {
        return Err(Error::InvalidParameter(format!("im_cap must be positive, got {im_cap}")));
    }
    let mut step = 1.0;
    let mut sigma = right - step;
    for _ in 0..40 {
        let rect = Rect::new(sigma, right, -im_cap, im_cap)?;
        let count = count_zeros(f, &rect)?;
        if count.count > 0 {
            let search = find_zeros(f, &rect, tol)?;
            let best = search
                .roots
                .iter()
                .max_by(|a, b| a.location.re.total_cmp(&b.location.re))
                .cloned();
            let Some(best) = best else {
                return Err(Error::NonConvergence {
                    what: "rightmost zero location",
                    iterations: search.unresolved.len(),
                    achieved: f64::NAN,
                });
            };
            if let Some((r, _)) = search.unresolved.iter().find(|(r, _)| r.re_max > best.location.re) {
                let c = r.center();
                return Err(Error::NonConvergence {
                    what: "rightmost zero location (unresolved cluster to the right)",
                    iterations: search.unresolved.len(),
                    achieved: c.re,
                });
            }
            return Ok(Rightmost {
                root: best,
                others: search.roots,
                right_bound: right,
                im_cap,
                searched: search.count.rect,
                note: STRIP_NOTE,
            });
        }
        step *= 2.0;
        sigma = right - step;
    }
    Err(Error::NonConvergence {
        what: "rightmost zero search",
        iterations: 40,
        achieved: sigma,
    })
}

/// Rightmost zero of `Δ` within `|Im s| ≤ im_cap`.
pub fn rightmost_root(q: &Quasipolynomial, im_cap: f64, tol: f64) -> Result<Rightmost> {
    rightmost_root_of(q, q.right_bound(), im_cap, tol)
}

/// Evidence that `s0` is the only zero (counted with multiplicity) of a
/// function on the strip box `[s0 − W, s0 + W] × (−2π/τ + ε, 2π/τ − ε)`.
#[derive(Clone, Debug, Serialize)]
pub struct StripReport {
    pub unique: bool,
    pub count: usize,
    pub multiplicity: usize,
    pub rect: Rect,
}

/// Strip uniqueness check for any analytic `f` standing for a
/// quasipolynomial with delay `tau`.
pub fn strip_uniqueness<F: Analytic + ?Sized>(f: &F, s0: f64, tau: f64, half_width: f64) -> Result<StripReport> {
    let h = TAU / tau - STRIP_INSET;
    let rect = Rect::new(s0 - half_width, s0 + half_width, -h, h)?;
    let count = count_zeros(f, &rect)?;
    let probe = 0.25 * (TAU / tau).min(half_width).min(1.0);
    let multiplicity = multiplicity_at(f, Complex64::new(s0, 0.0), probe)?;
    Ok(StripReport {
        unique: multiplicity > 0 && count.count == multiplicity,
        count: count.count,
        multiplicity,
        rect: count.rect,
    })
}

/// `true` iff the zeros of `Δ` in the strip box around `s0` (half-width
/// `R`, the right bound) are exactly the zero at `s0` with its multiplicity.
pub fn strip_uniqueness_check(q: &Quasipolynomial, s0: f64) -> Result<StripReport> {
    strip_uniqueness(q, s0, q.tau(), q.right_bound())
}
