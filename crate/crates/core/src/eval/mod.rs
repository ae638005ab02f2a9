//! Arbitrary-precision evaluation with rigorous error tracking.

pub mod at_one;
pub mod ball;
pub mod checks;
pub mod complex;
pub mod f1f2;
pub mod power;
pub mod quad;
pub mod series;

use thiserror::Error;

use crate::arith::Rational;

pub use at_one::{pfq_at_1, pfq_at_1_capped, AtOneResult};
pub use ball::{Ball, MAX_PREC, MIN_PREC};
pub use checks::{euler_integral_check, gauss_derivative_check, EulerCheck};
pub use complex::ComplexBall;
pub use f1f2::f1f2;
pub use power::{rational_power, real_power, BranchPolicy};
pub use quad::{de_quad, BetaIntegrand};
pub use series::{partial_sum, pfq, pfq_derivative, pfq_truncated, SeriesSpec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("argument outside the disk of convergence: {0}")]
    DivergentArgument(String),
    #[error("lower parameter {0} is a non-positive integer")]
    BadLowerParameter(Rational),
    #[error("3F2(1,1,{q};{a},{b};1) diverges: a+b−q−2 = {excess} is not positive")]
    NotConvergentAt1 { q: Rational, a: Rational, b: Rational, excess: Rational },
    #[error("branch cut: {0}")]
    BranchCut(String),
    #[error("zero base raised to a negative or ambiguous power")]
    ZeroBase,
    #[error("no convergence: {0}")]
    NoConvergence(String),
    #[error("outside the implemented domain: {0}")]
    DomainError(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("precision {0} outside [{MIN_PREC}, {MAX_PREC}]")]
    BadPrecision(u32),
    #[error("enclosure lost: {0}")]
    Indeterminate(String),
    #[error("invalid series specification: {0}")]
    BadSeries(String),
}

pub(crate) fn check_prec(prec: u32) -> Result<(), EvalError> {
    if (MIN_PREC..=MAX_PREC).contains(&prec) {
        Ok(())
    } else {
        Err(EvalError::BadPrecision(prec))
    }
}

/// Whether `r` lies in `{0, −1, −2, …}`.
pub(crate) fn is_nonpositive_integer(r: &Rational) -> bool {
    r.is_integer() && !r.is_positive()
}
