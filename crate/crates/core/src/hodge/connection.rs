//! Gauss–Manin connection on the `(ω_n, η_n)` frame and Deligne canonical-extension frames.
//!
//! With `(∇ω, ∇η) = dt ⊗ (ω, η)·M` and a new frame `(ω, η)·G`, the connection matrix in the
//! new frame is `G⁻¹(M G + G′)`. The canonical extension is the frame in which every
//! residue has eigenvalues in `[0, 1)`.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use super::HodgeError;
use crate::arith::{Mat2, Poly, Rational, RationalFunction};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SingularPoint {
    Zero,
    One,
}

impl SingularPoint {
    pub fn value(self) -> Rational {
        match self {
            SingularPoint::Zero => Rational::zero(),
            SingularPoint::One => Rational::one(),
        }
    }
}

impl fmt::Display for SingularPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SingularPoint::Zero => "0",
            SingularPoint::One => "1",
        })
    }
}

impl FromStr for SingularPoint {
    type Err = HodgeError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "0" => Ok(SingularPoint::Zero),
            "1" => Ok(SingularPoint::One),
            other => Err(HodgeError::BadPoint(other.to_string())),
        }
    }
}

fn check_betas(beta1: &Rational, beta2: &Rational) -> Result<(), HodgeError> {
    for (i, b) in [beta1, beta2].into_iter().enumerate() {
        if b.is_integer() {
            return Err(HodgeError::IntegralInput(format!("beta{} = {b} is an integer", i + 1)));
        }
    }
    Ok(())
}

fn check_unit_interval(beta1: &Rational, beta2: &Rational) -> Result<(), HodgeError> {
    check_betas(beta1, beta2)?;
    for (i, b) in [beta1, beta2].into_iter().enumerate() {
        if !b.is_positive() || *b >= Rational::one() {
            return Err(HodgeError::IntegralInput(format!("beta{} = {b} is not in (0,1)", i + 1)));
        }
    }
    Ok(())
}

fn t() -> RationalFunction {
    RationalFunction::var()
}

fn c(r: Rational) -> RationalFunction {
    RationalFunction::constant(r)
}

/// `[[0, β₂/t], [β₁/(1−t), −(β₁+β₂)/t]]`.
pub fn connection_matrix(beta1: &Rational, beta2: &Rational) -> Result<Mat2, HodgeError> {
    check_betas(beta1, beta2)?;
    let inv_t = t().recip();
    let inv_one_minus_t = RationalFunction::from_poly(Poly::linear(Rational::one(), Rational::from(-1))).recip();
    Ok(Mat2::new(
        RationalFunction::zero(),
        inv_t.scale(beta2),
        inv_one_minus_t.scale(beta1),
        inv_t.scale(&-(beta1 + beta2)),
    ))
}

/// Change of basis from `(ω_n, η_n)` to a frame of the canonical extension near `point`.
///
/// At `t = 0` the frame depends on whether `β₁+β₂ ≤ 1`; at `t = 1` it is `(ω_n, η_n)` itself.
pub fn canonical_frame(beta1: &Rational, beta2: &Rational, point: SingularPoint) -> Result<Mat2, HodgeError> {
    check_unit_interval(beta1, beta2)?;
    let sum = beta1 + beta2;
    Ok(match point {
        SingularPoint::One => Mat2::identity(),
        SingularPoint::Zero if sum <= Rational::one() => {
            // columns (1, 0) and (tβ₂, t(β₁+β₂))
            Mat2::new(RationalFunction::one(), t().scale(beta2), RationalFunction::zero(), t().scale(&sum))
        }
        SingularPoint::Zero => {
            // columns (t, 0) and (β₁+β₂−1, tβ₁)
            Mat2::new(t(), c(sum - Rational::one()), RationalFunction::zero(), t().scale(beta1))
        }
    })
}

/// `G⁻¹(M G + G′)`.
pub fn transformed_connection(m: &Mat2, g: &Mat2) -> Result<Mat2, HodgeError> {
    let inv = g.inverse().ok_or(HodgeError::SingularFrame)?;
    Ok(&inv * &(&(m * g) + &g.derivative()))
}

/// Eigenvalues of a constant 2×2 matrix, decided exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Eigenvalues {
    /// Both eigenvalues rational, in ascending order.
    Rational([Rational; 2]),
    /// Characteristic polynomial `x² − trace·x + det` without rational roots.
    Irrational { trace: Rational, det: Rational },
}

impl Eigenvalues {
    pub fn of(m: &[[Rational; 2]; 2]) -> Eigenvalues {
        let trace = &m[0][0] + &m[1][1];
        let det = &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0];
        let disc = &trace * &trace - &det * Rational::from(4);
        match disc.sqrt_exact() {
            Some(root) => {
                let half = Rational::new(1, 2);
                let lo = (&trace - &root) * &half;
                let hi = (&trace + &root) * &half;
                Eigenvalues::Rational([lo, hi])
            }
            None => Eigenvalues::Irrational { trace, det },
        }
    }

    /// Whether both eigenvalues lie in `[0, 1)`.
    pub fn in_unit_interval(&self) -> bool {
        match self {
            Eigenvalues::Rational(ev) => ev.iter().all(|e| !e.is_negative() && *e < Rational::one()),
            Eigenvalues::Irrational { trace, det } => {
                let disc = trace * trace - det * Rational::from(4);
                if disc.is_negative() {
                    return false;
                }
                // Real roots r1 < r2 of p(x) = x² − trace·x + det:
                // r1 ≥ 0 ⇔ det ≥ 0 and trace ≥ 0; r2 < 1 ⇔ p(1) > 0 and trace/2 < 1.
                let p1 = Rational::one() - trace + det;
                !det.is_negative() && !trace.is_negative() && p1.is_positive() && *trace < Rational::from(2)
            }
        }
    }
}

impl Serialize for Eigenvalues {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Eigenvalues::Rational(ev) => ev.serialize(serializer),
            Eigenvalues::Irrational { trace, det } => {
                #[derive(Serialize)]
                struct CharPoly<'a> {
                    trace: &'a Rational,
                    det: &'a Rational,
                }
                CharPoly { trace, det }.serialize(serializer)
            }
        }
    }
}

/// Residue of the connection written in the canonical frame at `point`.
pub fn residue_in_frame(beta1: &Rational, beta2: &Rational, point: SingularPoint) -> Result<[[Rational; 2]; 2], HodgeError> {
    let m = connection_matrix(beta1, beta2)?;
    let g = canonical_frame(beta1, beta2, point)?;
    let conn = transformed_connection(&m, &g)?;
    conn.residue_at(&point.value()).ok_or(HodgeError::NotLogarithmic(point))
}

/// Eigenvalues of the residue in the canonical frame; both must lie in `[0, 1)`.
pub fn residue_eigenvalues_in_frame(beta1: &Rational, beta2: &Rational, point: SingularPoint) -> Result<Eigenvalues, HodgeError> {
    Ok(Eigenvalues::of(&residue_in_frame(beta1, beta2, point)?))
}

/// Residue of the connection in the original `(ω_n, η_n)` frame.
pub fn residue_of_connection(beta1: &Rational, beta2: &Rational, point: SingularPoint) -> Result<[[Rational; 2]; 2], HodgeError> {
    connection_matrix(beta1, beta2)?
        .residue_at(&point.value())
        .ok_or(HodgeError::NotLogarithmic(point))
}

/// Rank of a constant 2×2 matrix.
pub fn rank2(m: &[[Rational; 2]; 2]) -> usize {
    let det = &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0];
    if !det.is_zero() {
        2
    } else if m.iter().flatten().any(|e| !e.is_zero()) {
        1
    } else {
        0
    }
}
