//! Gauss-type fibration data, Hodge numbers of the weight-2 part, and the Gauss–Manin
//! connection with its canonical-extension frames.

pub mod connection;
pub mod gauss_type;
pub mod numbers;

use thiserror::Error;

use crate::arith::ArithError;

pub use connection::{
    canonical_frame, connection_matrix, residue_eigenvalues_in_frame, residue_in_frame, Eigenvalues,
    SingularPoint,
};
pub use gauss_type::{gauss_type_data, GaussTypeData, RiemannScheme};
pub use numbers::{d_chi, d_chi_all, delta_decomposition, hodge_triple, tate_check, tate_check_bracketing, HodgeInput, HodgeTriple};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HodgeError {
    #[error("not of Gauss type: a·d or b·d vanishes mod N (N={n}, a={a}, b={b}, d={d})")]
    NotGaussType { n: u64, a: u64, b: u64, d: u64 },
    #[error("invalid fibration data: {0}")]
    InvalidFibration(String),
    #[error("integrality violation: {0}")]
    IntegralInput(String),
    #[error("d_chi = {0} is outside {{0, 1, 2}}")]
    DOutOfRange(u8),
    #[error("singular point must be 0 or 1, got {0:?}")]
    BadPoint(String),
    #[error("frame matrix is singular")]
    SingularFrame,
    #[error("connection has a non-logarithmic pole at t = {0}")]
    NotLogarithmic(connection::SingularPoint),
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
}
