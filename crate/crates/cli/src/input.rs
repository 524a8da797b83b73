//! Numeric arguments and JSON problem files.

use std::path::Path;
use std::str::FromStr;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Pow};
use qpmid::polycore::rat_to_f64;
use qpmid::quasipoly::{Quasipolynomial, Rect};
use serde::Deserialize;

use crate::error::CliError;

/// A real number given on the command line or in a file, kept exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct Real {
    pub exact: BigRational,
    pub value: f64,
}

impl FromStr for Real {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let exact = parse_rational(s.trim())?;
        Ok(Real {
            value: rat_to_f64(&exact),
            exact,
        })
    }
}

/// `p/q`, an integer, or a decimal with optional exponent, all exact.
pub fn parse_rational(s: &str) -> Result<BigRational, String> {
    if s.contains('/') {
        let r = BigRational::from_str(s).map_err(|e| format!("invalid rational '{s}': {e}"))?;
        return Ok(r);
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| format!("invalid exponent in '{s}'"))?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    let all_digits = |p: &str| p.chars().all(|c| c.is_ascii_digit());
    if int_part.is_empty() && frac_part.is_empty() || !all_digits(int_part) || !all_digits(frac_part) {
        return Err(format!("invalid number '{s}'"));
    }
    if exponent.unsigned_abs() > 400 {
        return Err(format!("exponent out of range in '{s}'"));
    }
    let numer: num_bigint::BigInt = format!("{int_part}{frac_part}").parse().map_err(|_| format!("invalid number '{s}'"))?;
    let ten = BigRational::from_integer(10.into());
    let scale_exp = exponent - frac_part.len() as i32;
    let scale = if scale_exp >= 0 {
        Pow::pow(&ten, scale_exp as u32)
    } else {
        BigRational::one() / Pow::pow(&ten, scale_exp.unsigned_abs())
    };
    let r = BigRational::from_integer(numer) * scale;
    Ok(if negative { -r } else { r })
}

/// `RE,IM` or `RE`.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').collect();
    let re = |p: &str| p.parse::<Real>().map(|r| r.value);
    match parts.as_slice() {
        [x] => Ok(Complex64::new(re(x)?, 0.0)),
        [x, y] => Ok(Complex64::new(re(x)?, re(y)?)),
        _ => Err(format!("expected RE,IM, got '{s}'")),
    }
}

/// `re_min,re_max,im_min,im_max`.
pub fn parse_rect(s: &str) -> Result<Rect, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|p| p.parse::<Real>().map(|r| r.value))
        .collect::<Result<_, _>>()?;
    match v.as_slice() {
        &[a, b, c, d] => Rect::new(a, b, c, d).map_err(|e| e.to_string()),
        _ => Err(format!("expected four comma-separated bounds, got '{s}'")),
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Float(f64),
    Text(String),
}

impl Number {
    fn to_f64(&self) -> Result<f64, CliError> {
        match self {
            Number::Float(x) => Ok(*x),
            Number::Text(s) => s.parse::<Real>().map(|r| r.value).map_err(CliError::Input),
        }
    }
}

fn floats(v: &[Number]) -> Result<Vec<f64>, CliError> {
    v.iter().map(Number::to_f64).collect()
}

/// `{"version", "n", "m", "tau", "a", "alpha"}`.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuasipolynomialSpec {
    #[serde(default)]
    pub version: Option<String>,
    pub n: usize,
    pub m: usize,
    pub tau: Number,
    pub a: Vec<Number>,
    pub alpha: Vec<Number>,
}

/// A quasipolynomial plus the initial function of the simulation, as
/// polynomial coefficients in `t` (default: the constant 1).
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationSpec {
    #[serde(default)]
    pub version: Option<String>,
    pub n: usize,
    pub m: usize,
    pub tau: Number,
    pub a: Vec<Number>,
    pub alpha: Vec<Number>,
    #[serde(default)]
    pub history: Option<Vec<Number>>,
}

pub const SCHEMA_VERSION: &str = "1";

fn check_version(v: &Option<String>) -> Result<(), CliError> {
    match v.as_deref() {
        None | Some(SCHEMA_VERSION) => Ok(()),
        Some(other) => Err(CliError::Input(format!(
            "unsupported schema version '{other}', expected '{SCHEMA_VERSION}'"
        ))),
    }
}

fn build(n: usize, m: usize, tau: &Number, a: &[Number], alpha: &[Number]) -> Result<Quasipolynomial, CliError> {
    Ok(Quasipolynomial::new(n, m, tau.to_f64()?, floats(a)?, floats(alpha)?)?)
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn read_quasipolynomial(path: &Path) -> Result<Quasipolynomial, CliError> {
    let spec: QuasipolynomialSpec = read_json(path)?;
    check_version(&spec.version)?;
    build(spec.n, spec.m, &spec.tau, &spec.a, &spec.alpha)
}

pub fn read_simulation(path: &Path) -> Result<(Quasipolynomial, Vec<f64>), CliError> {
    let spec: SimulationSpec = read_json(path)?;
    check_version(&spec.version)?;
    let q = build(spec.n, spec.m, &spec.tau, &spec.a, &spec.alpha)?;
    let history = match &spec.history {
        Some(h) if h.is_empty() => return Err(CliError::Input("history must not be empty".into())),
        Some(h) => floats(h)?,
        None => vec![1.0],
    };
    Ok((q, history))
}
