use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter violates the documented domain of an operation.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The inputs are valid but fall outside the region where the method applies.
    #[error("domain error: {0}")]
    Domain(String),

    /// An iterative method did not reach its tolerance.
    #[error("no convergence in {what} after {iterations} iterations (achieved error {achieved:e})")]
    NonConvergence {
        what: &'static str,
        iterations: usize,
        achieved: f64,
    },

    /// A zero of the function lies on (or too close to) a counting contour.
    #[error("zero on contour boundary near {re:+.6e}{im:+.6e}i after {retries} retries")]
    BoundaryZero { re: f64, im: f64, retries: usize },

    /// Phase tracking along a contour could not be resolved.
    #[error("unresolved phase jump of {jump:.3} rad near {re:+.6e}{im:+.6e}i")]
    PhaseJump { jump: f64, re: f64, im: f64 },

    /// A function value or derivative was not finite.
    #[error("non-finite value near {re:+.6e}{im:+.6e}i")]
    Overflow { re: f64, im: f64 },

    /// A caller-side precondition was not met.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// The requested case is deliberately not implemented.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A coefficient was requested beyond the truncation order of a series.
    #[error("coefficient {index} requested beyond truncation order {order}")]
    BeyondOrder { index: usize, order: usize },
}

impl Error {
    /// `true` for errors caused by bad input rather than numerical trouble.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter(_)
                | Error::Domain(_)
                | Error::Precondition(_)
                | Error::Unsupported(_)
                | Error::BeyondOrder { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
