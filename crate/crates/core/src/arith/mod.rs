//! Exact kernel: rationals, unit classes, Pochhammer symbols, and the field Q(x).

pub mod mat2;
pub mod poly;
pub mod ratfunc;
pub mod rational;
pub mod units;

use thiserror::Error;

pub use mat2::{det2, Mat2};
pub use poly::Poly;
pub use ratfunc::RationalFunction;
pub use rational::{frac, lcm_denominators, pochhammer, q, Rational};
pub use units::{unit_classes, UnitClass};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("cannot parse {0:?} as a rational (expected p or p/q)")]
    Parse(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
    #[error("modulus must be positive")]
    ZeroModulus,
    #[error("{residue} is not a unit modulo {modulus}")]
    NotAUnit { residue: i64, modulus: u64 },
    #[error("modulus {0} does not fit in 64 bits")]
    ModulusTooLarge(String),
}

/// Parses a comma-separated list of rationals such as `1,1,1/2`. The empty string is the empty list.
pub fn parse_rational_list(s: &str) -> Result<Vec<Rational>, ArithError> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(str::parse).collect()
}
