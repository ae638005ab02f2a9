use serde::{Deserialize, Serialize};

use super::ball::Ball;
use super::complex::ComplexBall;
use super::EvalError;
use crate::arith::Rational;

/// How a non-integral power picks its branch.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum BranchPolicy {
    /// `exp(e · Log z)` with the principal logarithm, argument in `(−π, π]`.
    #[default]
    Principal,
    /// For a real base and an exponent with odd denominator, the real root `sign(z)^p |z|^e`.
    RealRoot,
}

fn integer_power(base: &ComplexBall, e: i64) -> Result<ComplexBall, EvalError> {
    let mut result = ComplexBall::one(base.prec());
    let mut b = base.clone();
    let mut k = e.unsigned_abs();
    while k > 0 {
        if k & 1 == 1 {
            result = &result * &b;
        }
        k >>= 1;
        if k > 0 {
            b = &b * &b;
        }
    }
    if e < 0 {
        if base.contains_zero() {
            return Err(EvalError::ZeroBase);
        }
        result = result.recip();
    }
    Ok(result)
}

/// `base^exponent` under an explicit branch policy.
pub fn rational_power(base: &ComplexBall, exponent: &Rational, policy: BranchPolicy) -> Result<ComplexBall, EvalError> {
    if let Some(e) = exponent.is_integer().then(|| exponent.to_i64()).flatten() {
        return integer_power(base, e);
    }
    match policy {
        BranchPolicy::Principal => {
            if base.contains_zero() {
                if exponent.is_positive() && base.re.is_exact_zero() && base.im.is_exact_zero() {
                    return Ok(ComplexBall::zero(base.prec()));
                }
                return Err(EvalError::ZeroBase);
            }
            if base.is_real_exactly() && base.re.lower().is_sign_positive() {
                let p = real_positive_power(&base.re, exponent);
                return Ok(ComplexBall::real(p));
            }
            let l = base.ln()?;
            Ok(l.mul_rational(exponent).exp())
        }
        BranchPolicy::RealRoot => {
            if !base.is_real_exactly() {
                return Err(EvalError::DomainError(format!("real-root policy needs a real base, got {base}")));
            }
            real_power(&base.re, exponent, BranchPolicy::RealRoot).map(ComplexBall::real)
        }
    }
}

fn real_positive_power(base: &Ball, exponent: &Rational) -> Ball {
    base.ln().mul_rational(exponent).exp()
}

/// Real-valued power. Under the principal policy the base must be positive; under the
/// real-root policy a negative base is allowed when the exponent has an odd denominator.
pub fn real_power(base: &Ball, exponent: &Rational, policy: BranchPolicy) -> Result<Ball, EvalError> {
    if let Some(e) = exponent.is_integer().then(|| exponent.to_i64()).flatten() {
        return integer_power(&ComplexBall::real(base.clone()), e).map(|z| z.re);
    }
    let positive = base.lower().is_sign_positive() && !base.lower().is_zero();
    if positive {
        return Ok(real_positive_power(base, exponent));
    }
    match policy {
        BranchPolicy::Principal => Err(EvalError::BranchCut(format!(
            "principal power {exponent} of {base} is not real on the whole ball"
        ))),
        BranchPolicy::RealRoot => {
            if exponent.denom().is_even() {
                return Err(EvalError::DomainError(format!(
                    "exponent {exponent} has an even denominator; no real root of a negative base"
                )));
            }
            let negative = base.upper().is_sign_negative() && !base.upper().is_zero();
            if negative {
                let mag = real_positive_power(&-base, exponent);
                return Ok(if exponent.numer().is_odd() { -mag } else { mag });
            }
            // The ball contains zero: only x^(1/3) is handled, through the monotone real cube root.
            if *exponent == Rational::new(1, 3) {
                return Ok(base.cbrt());
            }
            Err(EvalError::ZeroBase)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q;
    use rug::Float;

    #[test]
    fn examples() {
        let v = real_power(&Ball::from_rational(&q(-1, 8), 64), &q(1, 3), BranchPolicy::RealRoot).unwrap();
        assert!(v.contains_float(&Float::with_val(64, -0.5)));
        let v = real_power(&Ball::from_i64(4, 64), &q(1, 2), BranchPolicy::Principal).unwrap();
        assert!(v.contains_float(&Float::with_val(64, 2)));
        // (1−λ)^(k/l−1) at λ = −1, k/l = 1/2 is 2^(−1/2).
        let v = real_power(&Ball::from_i64(2, 128), &q(-1, 2), BranchPolicy::Principal).unwrap();
        let oracle = Float::with_val(256, 2).sqrt().recip();
        assert!(v.contains_float(&oracle));
    }

    #[test]
    fn principal_complex_root_of_negative() {
        // (−8)^(1/3) = 2 e^{iπ/3} = 1 + i√3.
        let z = ComplexBall::real(Ball::from_i64(-8, 128));
        let w = rational_power(&z, &q(1, 3), BranchPolicy::Principal).unwrap();
        assert!(w.re.contains_float(&Float::with_val(128, 1)));
        assert!(w.im.contains_float(&Float::with_val(256, 3).sqrt()));
        let w = rational_power(&z, &q(1, 3), BranchPolicy::RealRoot).unwrap();
        assert!(w.re.contains_float(&Float::with_val(128, -2)));
    }

    #[test]
    fn branch_errors() {
        let straddle = ComplexBall::new(Ball::from_i64(-2, 64), Ball::new(Float::new(64), &Float::with_val(64, 0.1)));
        assert!(matches!(rational_power(&straddle, &q(1, 2), BranchPolicy::Principal), Err(EvalError::BranchCut(_))));
        assert!(matches!(
            real_power(&Ball::from_i64(-2, 64), &q(1, 2), BranchPolicy::Principal),
            Err(EvalError::BranchCut(_))
        ));
        assert!(matches!(
            real_power(&Ball::from_i64(-2, 64), &q(1, 2), BranchPolicy::RealRoot),
            Err(EvalError::DomainError(_))
        ));
        assert!(matches!(
            rational_power(&ComplexBall::zero(64), &q(-1, 1), BranchPolicy::Principal),
            Err(EvalError::ZeroBase)
        ));
    }

    #[test]
    fn integer_powers_are_exact_products() {
        let z = ComplexBall::from_rationals(&q(1, 2), &q(-3, 4), 128);
        let cube = rational_power(&z, &q(3, 1), BranchPolicy::Principal).unwrap();
        let direct = &(&z * &z) * &z;
        assert!(cube.re.overlaps(&direct.re) && cube.im.overlaps(&direct.im));
        let inv = rational_power(&z, &q(-2, 1), BranchPolicy::Principal).unwrap();
        let one = &inv * &(&z * &z);
        assert!(one.re.contains_float(&Float::with_val(64, 1)) && one.im.contains_zero());
    }
}
