//! Dense polynomials with exact rational coefficients and truncated power
//! series.
//!
//! Everything that is an exact identity (Padé order conditions, the
//! coefficient formulas of a maximal-multiplicity design) is checked here in
//! `BigRational` arithmetic. Floating point only appears when a polynomial is
//! evaluated at a complex point.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// `n!` as an arbitrary-precision integer.
pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Binomial coefficient, zero outside `0 ≤ k ≤ n`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Exact rational from an integer.
pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Exact rational `num/den`.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// The exact dyadic rational carried by a finite `f64`.
pub fn rat_from_f64(x: f64) -> Result<BigRational> {
    BigRational::from_float(x)
        .ok_or_else(|| Error::InvalidParameter(format!("non-finite value {x}")))
}

/// Nearest `f64` to a rational.
pub fn rat_to_f64(x: &BigRational) -> f64 {
    // BigRational::to_f64 rounds correctly even when numerator and
    // denominator individually overflow f64.
    x.to_f64().unwrap_or(f64::NAN)
}

/// Dense polynomial `Σ c_k z^k` with exact rational coefficients.
///
/// The highest stored coefficient is never zero; the zero polynomial stores
/// nothing and has no degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    coeffs: Vec<BigRational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::new(vec![BigRational::one()])
    }

    /// `c · z^k`
    pub fn monomial(k: usize, c: BigRational) -> Self {
        let mut coeffs = vec![BigRational::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| rat(c)).collect())
    }

    /// Exact conversion of floating-point coefficients.
    pub fn from_f64(coeffs: &[f64]) -> Result<Self> {
        coeffs
            .iter()
            .map(|&c| rat_from_f64(c))
            .collect::<Result<Vec<_>>>()
            .map(Self::new)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Coefficient of `z^k`, zero above the degree.
    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(rat_to_f64).collect()
    }

    pub fn eval_exact(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_exact_complex(&self, z: &Complex<BigRational>) -> Complex<BigRational> {
        self.coeffs.iter().rev().fold(Complex::zero(), |acc, c| {
            acc * z.clone() + Complex::new(c.clone(), BigRational::zero())
        })
    }

    /// Horner evaluation in double precision.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        horner(&self.to_f64(), z)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * rat(k as i64))
                .collect(),
        )
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// `p(−z)`
    pub fn reflect(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    /// `p(shift + scale·z)` by binomial expansion.
    pub fn compose_affine(&self, shift: &BigRational, scale: &BigRational) -> Self {
        let deg = match self.degree() {
            Some(d) => d,
            None => return Self::zero(),
        };
        let mut out = vec![BigRational::zero(); deg + 1];
        // powers of the shift, reused for every k
        let mut shift_pow = vec![BigRational::one(); deg + 1];
        for i in 1..=deg {
            shift_pow[i] = &shift_pow[i - 1] * shift;
        }
        let mut scale_pow = BigRational::one();
        for (j, slot) in out.iter_mut().enumerate() {
            let mut acc = BigRational::zero();
            for (k, c) in self.coeffs.iter().enumerate().skip(j) {
                if c.is_zero() {
                    continue;
                }
                let b = BigRational::from_integer(binomial(k as i64, j as i64));
                acc += c * b * &shift_pow[k - j];
            }
            *slot = acc * &scale_pow;
            scale_pow *= scale;
        }
        Self::new(out)
    }

    /// Largest absolute coefficient, as a float.
    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|c| rat_to_f64(&c.abs()))
            .fold(0.0, f64::max)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})z")?,
                _ => write!(f, "({c})z^{k}")?,
            }
        }
        Ok(())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..len).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..len).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

/// Horner evaluation of `Σ c_k z^k` for float coefficients.
pub fn horner(coeffs: &[f64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// Value of the `order`-th derivative of `Σ c_k z^k` at `z`.
pub fn horner_derivative(coeffs: &[f64], z: Complex64, order: usize) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for k in (order..coeffs.len()).rev() {
        // k!/(k-order)!
        let falling: f64 = ((k - order + 1)..=k).map(|i| i as f64).product();
        acc = acc * z + coeffs[k] * falling;
    }
    acc
}

/// Evaluation of a polynomial at a complex point.
pub fn poly_eval(p: &Polynomial, z: Complex64) -> Complex64 {
    p.eval(z)
}

/// Sign of the exponent in `e^{±z}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpSign {
    Plus,
    Minus,
}

impl ExpSign {
    fn value(self) -> i64 {
        match self {
            ExpSign::Plus => 1,
            ExpSign::Minus => -1,
        }
    }
}

/// Power series truncated after the `z^order` term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<BigRational>,
    order: usize,
}

impl TruncatedSeries {
    /// Coefficients past `order` are dropped, missing ones are zero.
    pub fn new(mut coeffs: Vec<BigRational>, order: usize) -> Self {
        coeffs.resize(order + 1, BigRational::zero());
        Self { coeffs, order }
    }

    pub fn from_polynomial(p: &Polynomial, order: usize) -> Self {
        Self::new(p.coeffs().to_vec(), order)
    }

    /// Taylor series of `e^{±z}`.
    pub fn exp(sign: ExpSign, order: usize) -> Self {
        let s = rat(sign.value());
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut term = BigRational::one();
        for k in 0..=order {
            coeffs.push(term.clone());
            term = term * &s / rat(k as i64 + 1);
        }
        Self { coeffs, order }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, index: usize) -> Result<&BigRational> {
        self.coeffs.get(index).ok_or(Error::BeyondOrder {
            index,
            order: self.order,
        })
    }

    fn combine(&self, rhs: &Self, f: impl Fn(&BigRational, &BigRational) -> BigRational) -> Self {
        let order = self.order.min(rhs.order);
        Self {
            coeffs: (0..=order).map(|k| f(&self.coeffs[k], &rhs.coeffs[k])).collect(),
            order,
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.combine(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.combine(rhs, |a, b| a - b)
    }

    /// Cauchy product, truncated at the smaller of the two orders.
    pub fn mul(&self, rhs: &Self) -> Self {
        let order = self.order.min(rhs.order);
        let coeffs = (0..=order)
            .map(|k| {
                (0..=k).fold(BigRational::zero(), |acc, i| {
                    acc + &self.coeffs[i] * &rhs.coeffs[k - i]
                })
            })
            .collect();
        Self { coeffs, order }
    }
}

/// Taylor coefficients of `p(z)·e^{±z}` through `z^order`.
pub fn series_mul_exp(p: &Polynomial, sign: ExpSign, order: usize) -> TruncatedSeries {
    TruncatedSeries::from_polynomial(p, order).mul(&TruncatedSeries::exp(sign, order))
}

/// Index of the first coefficient with `|c_k| > tol`, or `order + 1` when
/// every stored coefficient is within the tolerance.
pub fn order_of_vanishing(s: &TruncatedSeries, tol: f64) -> usize {
    let threshold = if tol > 0.0 {
        rat_from_f64(tol).unwrap_or_else(|_| BigRational::zero())
    } else {
        BigRational::zero()
    };
    s.coeffs
        .iter()
        .position(|c| c.abs() > threshold)
        .unwrap_or(s.order + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rats(xs: &[(i64, i64)]) -> Vec<BigRational> {
        xs.iter().map(|&(n, d)| ratio(n, d)).collect()
    }

    #[test]
    fn eval_examples() {
        let p = Polynomial::from_i64(&[6, -4, 1]);
        assert_eq!(poly_eval(&p, Complex64::new(0.0, 0.0)), Complex64::new(6.0, 0.0));
        let p = Polynomial::from_i64(&[2, 1]);
        assert_eq!(poly_eval(&p, Complex64::new(-2.0, 0.0)), Complex64::new(0.0, 0.0));
        let p = Polynomial::from_i64(&[6, 4, 1]);
        assert_eq!(poly_eval(&p, Complex64::new(1.0, 1.0)), Complex64::new(10.0, 6.0));
        let exact = p.eval_exact_complex(&Complex::new(rat(1), rat(1)));
        assert_eq!(exact, Complex::new(rat(10), rat(6)));
    }

    #[test]
    fn trailing_zeros_are_trimmed() {
        let p = Polynomial::from_i64(&[1, 2, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert!(Polynomial::from_i64(&[0, 0]).is_zero());
        assert_eq!(Polynomial::zero().degree(), None);
    }

    #[test]
    fn series_mul_exp_examples() {
        let s = series_mul_exp(&Polynomial::one(), ExpSign::Plus, 3);
        assert_eq!(s.coeffs(), rats(&[(1, 1), (1, 1), (1, 2), (1, 6)]).as_slice());
        let s = series_mul_exp(&Polynomial::from_i64(&[2, 1]), ExpSign::Minus, 3);
        assert_eq!(s.coeffs(), rats(&[(2, 1), (-1, 1), (0, 1), (1, 6)]).as_slice());
        let s = series_mul_exp(&Polynomial::from_i64(&[-2, 1]), ExpSign::Plus, 3);
        assert_eq!(s.coeffs(), rats(&[(-2, 1), (-1, 1), (0, 1), (1, 6)]).as_slice());
    }

    #[test]
    fn order_of_vanishing_examples() {
        let s = TruncatedSeries::new(rats(&[(0, 1), (0, 1), (0, 1), (1, 6)]), 3);
        assert_eq!(order_of_vanishing(&s, 0.0), 3);
        let s = TruncatedSeries::new(rats(&[(1, 1), (1, 1), (1, 2)]), 2);
        assert_eq!(order_of_vanishing(&s, 0.0), 0);
        // (z − 2)e^z + (z + 2) = z³/6 + O(z⁴)
        let s = series_mul_exp(&Polynomial::from_i64(&[-2, 1]), ExpSign::Plus, 4)
            .add(&TruncatedSeries::from_polynomial(&Polynomial::from_i64(&[2, 1]), 4));
        assert_eq!(order_of_vanishing(&s, 0.0), 3);
        assert_eq!(s.coeff(3).unwrap(), &ratio(1, 6));
        let zero = TruncatedSeries::new(vec![], 4);
        assert_eq!(order_of_vanishing(&zero, 0.0), 5);
    }

    #[test]
    fn coefficient_beyond_order_is_an_error() {
        let s = TruncatedSeries::exp(ExpSign::Plus, 2);
        assert!(s.coeff(2).is_ok());
        assert_eq!(s.coeff(3), Err(Error::BeyondOrder { index: 3, order: 2 }));
    }

    #[test]
    fn series_arithmetic_keeps_order() {
        let a = TruncatedSeries::exp(ExpSign::Plus, 5);
        let b = TruncatedSeries::exp(ExpSign::Minus, 5);
        let prod = a.mul(&b);
        assert_eq!(prod.order(), 5);
        assert_eq!(order_of_vanishing(&prod.sub(&TruncatedSeries::new(vec![rat(1)], 5)), 0.0), 6);
    }

    #[test]
    fn compose_affine_matches_direct_evaluation() {
        let p = Polynomial::from_i64(&[3, -1, 4, 2]);
        let shift = ratio(-3, 2);
        let scale = ratio(5, 7);
        let q = p.compose_affine(&shift, &scale);
        for x in [-2i64, 0, 1, 5] {
            let x = rat(x);
            assert_eq!(q.eval_exact(&x), p.eval_exact(&(&shift + &scale * &x)));
        }
    }

    #[test]
    fn combinatorics() {
        assert_eq!(factorial(0), BigInt::from(1));
        assert_eq!(factorial(10), BigInt::from(3_628_800));
        assert_eq!(binomial(10, 3), BigInt::from(120));
        assert_eq!(binomial(3, 5), BigInt::zero());
        assert_eq!(binomial(-1, 0), BigInt::zero());
    }

    #[test]
    fn horner_derivative_matches_exact_derivative() {
        let p = Polynomial::from_i64(&[1, -2, 3, 4, -5]);
        let z = Complex64::new(0.3, -1.2);
        let mut d = p.clone();
        for order in 0..6 {
            let expect = d.eval(z);
            let got = horner_derivative(&p.to_f64(), z, order);
            assert!((expect - got).norm() < 1e-12 * (1.0 + expect.norm()));
            d = d.derivative();
        }
    }
}
