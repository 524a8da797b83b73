//! Padé approximants of the exponential.
//!
//! Perron's closed-form pair, taken literally, approximates `e^{-z}`:
//!
//! ```text
//! den(z) = Σ_{k≤n} (n+m−k)! n! / (k! m! (n−k)!) z^k      (monic)
//! num(z) = Σ_{k≤m} (n+m−k)! / (k! (m−k)!) (−z)^k
//! den(z)·e^{−z} − num(z) = O(z^{n+m+1})
//! ```
//!
//! [`PadeConvention::PerronRaw`] keeps exactly those coefficients. Reflecting
//! `z → −z` and normalizing the denominator to be monic gives
//! [`PadeConvention::ExpNormalized`], the pair that appears in the normalized
//! characteristic function of a maximal-multiplicity design:
//!
//! ```text
//! den(z)·e^{z} + num(z) = O(z^{n+m+1})
//! ```
//!
//! Both contracts are verified in exact arithmetic every time a pair is built.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::polycore::{
    factorial, order_of_vanishing, series_mul_exp, ExpSign, Polynomial, TruncatedSeries,
};
use crate::quad;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PadeConvention {
    /// `den·e^{−z} − num = O(z^{n+m+1})`
    PerronRaw,
    /// `den·e^{z} + num = O(z^{n+m+1})`
    ExpNormalized,
}

/// Padé pair of the exponential with a monic denominator of degree `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadePair {
    pub num: Polynomial,
    pub den: Polynomial,
    pub n: usize,
    pub m: usize,
    pub convention: PadeConvention,
}

impl PadePair {
    /// Exact Taylor coefficients of the order-contract residual through
    /// `z^order`.
    pub fn residual_series(&self, order: usize) -> TruncatedSeries {
        let num = TruncatedSeries::from_polynomial(&self.num, order);
        match self.convention {
            PadeConvention::PerronRaw => series_mul_exp(&self.den, ExpSign::Minus, order).sub(&num),
            PadeConvention::ExpNormalized => series_mul_exp(&self.den, ExpSign::Plus, order).add(&num),
        }
    }

    /// Order of vanishing of the residual, computed exactly one order past the
    /// contract.
    pub fn contact_order(&self) -> usize {
        order_of_vanishing(&self.residual_series(self.n + self.m + 1), 0.0)
    }

    /// The rational function approximating `e^{z}`, evaluated in floating
    /// point.
    pub fn approximate_exp(&self, z: Complex64) -> Complex64 {
        match self.convention {
            PadeConvention::PerronRaw => self.den.eval(z) / self.num.eval(z),
            PadeConvention::ExpNormalized => -self.num.eval(z) / self.den.eval(z),
        }
    }

    fn assert_contract(&self) {
        let order = self.contact_order();
        assert!(
            self.den.is_monic() && self.den.degree() == Some(self.n),
            "Padé denominator must be monic of degree {}",
            self.n
        );
        assert!(
            order > self.n + self.m,
            "Padé order contract violated for (n, m) = ({}, {}): contact order {order}",
            self.n,
            self.m
        );
    }
}

/// Perron's closed-form pair, coefficients exactly as printed.
pub fn perron_pair(n: usize, m: usize) -> PadePair {
    let (n64, m64) = (n as u64, m as u64);
    let n_fact = factorial(n64);
    let m_fact = factorial(m64);
    let den = Polynomial::new(
        (0..=n64)
            .map(|k| {
                BigRational::new(
                    factorial(n64 + m64 - k) * &n_fact,
                    factorial(k) * &m_fact * factorial(n64 - k),
                )
            })
            .collect(),
    );
    let num = Polynomial::new(
        (0..=m64)
            .map(|k| {
                let sign = if k % 2 == 0 { BigInt::one() } else { -BigInt::one() };
                BigRational::new(sign * factorial(n64 + m64 - k), factorial(k) * factorial(m64 - k))
            })
            .collect(),
    );
    let pair = PadePair {
        num,
        den,
        n,
        m,
        convention: PadeConvention::PerronRaw,
    };
    pair.assert_contract();
    pair
}

/// The pair `den(z) = (−1)^n P(−z)`, `num(z) = (−1)^{n+1} Q(−z)` built from
/// Perron's `(Q, P)`.
pub fn exp_pade_normalized(n: usize, m: usize) -> PadePair {
    let raw = perron_pair(n, m);
    let sign = |odd: bool| {
        if odd {
            -BigRational::one()
        } else {
            BigRational::one()
        }
    };
    let pair = PadePair {
        den: raw.den.reflect().scale(&sign(n % 2 == 1)),
        num: raw.num.reflect().scale(&sign(n % 2 == 0)),
        n,
        m,
        convention: PadeConvention::ExpNormalized,
    };
    pair.assert_contract();
    pair
}

/// Exact leading coefficient `n!/(n+m+1)!` of the normalized remainder.
pub fn remainder_leading_coefficient(n: usize, m: usize) -> BigRational {
    BigRational::new(factorial(n as u64), factorial((n + m + 1) as u64))
}

/// Both sides of the remainder identity for the normalized pair.
#[derive(Clone, Copy, Debug)]
pub struct RemainderCheck {
    /// `den(z)e^z + num(z)`
    pub lhs: Complex64,
    /// `z^{n+m+1}/m! ∫₀¹ e^{tz}(1−t)^m t^n dt`
    pub rhs: Complex64,
    pub quadrature_error: f64,
}

impl RemainderCheck {
    pub fn discrepancy(&self) -> f64 {
        (self.lhs - self.rhs).norm()
    }
}

const REMAINDER_REL_TOL: f64 = 1e-12;
const REMAINDER_MAX_DEPTH: usize = 20;

pub fn remainder_identity(n: usize, m: usize, z: Complex64) -> Result<RemainderCheck> {
    let pair = exp_pade_normalized(n, m);
    let lhs = pair.den.eval(z) * z.exp() + pair.num.eval(z);
    if z.is_zero() {
        return Ok(RemainderCheck {
            lhs,
            rhs: Complex64::zero(),
            quadrature_error: 0.0,
        });
    }
    let q = quad::integrate(
        |t| (z * t).exp() * ((1.0 - t).powi(m as i32) * t.powi(n as i32)),
        0.0,
        1.0,
        REMAINDER_REL_TOL,
        REMAINDER_MAX_DEPTH,
    )?;
    let m_fact: f64 = (1..=m).map(|k| k as f64).product();
    let rhs = z.powu((n + m + 1) as u32) / m_fact * q.value;
    Ok(RemainderCheck {
        lhs,
        rhs,
        quadrature_error: q.error_estimate * z.norm().powi((n + m + 1) as i32) / m_fact,
    })
}
