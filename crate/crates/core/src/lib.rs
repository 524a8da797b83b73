//! Quasipolynomials with a root of maximal multiplicity.
//!
//! The characteristic function of a scalar linear delay-differential equation
//! with a single delay,
//!
//! ```text
//! Δ(s) = s^n + Σ_{k<n} a_k s^k + e^{-sτ} Σ_{k≤m} α_k s^k,
//! ```
//!
//! has a real root of the maximal admissible multiplicity `n + m + 1` exactly
//! when its normalized polynomials form the Padé approximant of order `(m, n)`
//! of `e^z`, and then it factors through the Kummer function
//! `Φ(m + 1, n + m + 2, −z)`. This crate builds each side of that picture with
//! independent numerical routes so that they can be checked against each
//! other:
//!
//! * [`polycore`] exact rational polynomials and truncated power series,
//! * [`pade`] Padé pairs of the exponential and their remainder,
//! * [`hyperfunc`] Kummer and Whittaker functions,
//! * [`quasipoly`] evaluation and argument-principle zero location for Δ,
//! * [`mid`] coefficient synthesis and the equivalence checks,
//! * [`zerogeometry`] zero-location predicates, the Whittaker root curves and
//!   the `Ξ_n` sets,
//! * [`ddesim`] a method-of-steps simulator for the time domain.

pub mod ddesim;
pub mod error;
pub mod hyperfunc;
pub mod mid;
pub mod pade;
pub mod polycore;
pub mod quad;
pub mod quasipoly;
pub mod zerogeometry;

pub use error::{Error, Result};
pub use num_complex::Complex64;
