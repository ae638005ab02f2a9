use serde::Serialize;

use super::ball::Ball;
use super::quad::{de_quad, BetaIntegrand};
use super::series::{pfq, pfq_derivative};
use super::{check_prec, EvalError};
use crate::arith::Rational;
use crate::hodge::GaussTypeData;

/// Components of the Euler integral check `I(t)/I(0) − ₂F₁(α, β; α+β; t)`.
#[derive(Clone, Debug, Serialize)]
pub struct EulerCheck {
    pub integral_t: Ball,
    pub integral_0: Ball,
    pub ratio: Ball,
    pub series: Ball,
    pub residual: Ball,
}

/// Compares `∫₀¹ x^(α−1)(1−x)^(β−1)(1−tx)^(−β) dx / B(α, β)` with the Gauss series,
/// where `α, β` are the local exponents at infinity of the character.
///
/// The quadrature is heuristic, so the residual is too.
pub fn euler_integral_check(g: &GaussTypeData, t: &Rational, prec: u32) -> Result<EulerCheck, EvalError> {
    check_prec(prec)?;
    if t.is_negative() || *t >= Rational::one() {
        return Err(EvalError::Precondition(format!("need 0 ≤ t < 1, got {t}")));
    }
    let (alpha, beta) = (&g.alpha_n, &g.beta_n);
    let integral_0 = de_quad(&BetaIntegrand::beta(alpha.clone(), beta.clone()), prec)?;
    let integral_t = if t.is_zero() {
        integral_0.clone()
    } else {
        de_quad(&BetaIntegrand::new(alpha.clone(), beta.clone(), beta.clone(), t.clone()), prec)?
    };
    let ratio = if t.is_zero() { Ball::one(prec) } else { &integral_t / &integral_0 };
    let series = pfq(&[alpha.clone(), beta.clone()], &[alpha + beta], &Ball::from_rational(t, prec), prec)?;
    let residual = &ratio - &series;
    Ok(EulerCheck { integral_t, integral_0, ratio, series, residual })
}

/// Residuals of `(1−t) F'(a,b;a+b;t) − ab/(a+b) F(a,b;a+b+1;t)` and
/// `t F'(a,b;a+b+1;t) − (a+b)(F(a,b;a+b;t) − F(a,b;a+b+1;t))` at `a = β₁, b = β₂`.
pub fn gauss_derivative_check(beta1: &Rational, beta2: &Rational, t: &Rational, prec: u32) -> Result<(Ball, Ball), EvalError> {
    check_prec(prec)?;
    if !t.is_positive() || *t >= Rational::one() {
        return Err(EvalError::Precondition(format!("need 0 < t < 1, got {t}")));
    }
    for b in [beta1, beta2] {
        if b.is_integer() {
            return Err(EvalError::Precondition(format!("β = {b} is an integer")));
        }
    }
    let (a, b) = (beta1.clone(), beta2.clone());
    let c = &a + &b;
    if c.is_zero() {
        return Err(EvalError::Precondition("β₁ + β₂ = 0".into()));
    }
    let c1 = &c + Rational::one();
    let wp = prec + 16;
    let tb = Ball::from_rational(t, wp);
    let upper = [a.clone(), b.clone()];
    let f_c = pfq(&upper, &[c.clone()], &tb, wp)?;
    let f_c1 = pfq(&upper, &[c1.clone()], &tb, wp)?;
    let df_c = pfq_derivative(&upper, &[c.clone()], &tb, 1, wp)?;
    let df_c1 = pfq_derivative(&upper, &[c1], &tb, 1, wp)?;

    let one_minus_t = Ball::from_rational(&(Rational::one() - t), wp);
    let lhs1 = &one_minus_t * &df_c;
    let rhs1 = f_c1.mul_rational(&(&a * &b / &c));
    let lhs2 = &tb * &df_c1;
    let rhs2 = (&f_c - &f_c1).mul_rational(&c);
    Ok(((lhs1 - rhs1).round_to(prec), (lhs2 - rhs2).round_to(prec)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q;
    use crate::hodge::gauss_type_data;
    use rug::Float;

    #[test]
    fn euler_examples() {
        let tol = Float::with_val(64, 1e-15);
        for (n, a, b, t) in [(5, 1, 2, q(1, 3)), (6, 1, 2, q(1, 2))] {
            let g = gauss_type_data(n, a, b, 1, 1).unwrap();
            let c = euler_integral_check(&g, &t, 64).unwrap();
            assert!(c.residual.is_heuristic());
            assert!(c.residual.abs_below(&tol), "{}", c.residual);
        }
        let g = gauss_type_data(5, 1, 2, 1, 1).unwrap();
        let c = euler_integral_check(&g, &Rational::zero(), 64).unwrap();
        assert!(c.residual.contains_zero());
    }

    #[test]
    fn derivative_examples() {
        for (b1, b2, t, prec) in [
            (q(1, 6), q(2, 3), q(1, 3), 128),
            (q(1, 6), q(2, 3), q(1, 10), 192),
            (q(1, 2), q(1, 2), q(1, 2), 128),
        ] {
            let (r1, r2) = gauss_derivative_check(&b1, &b2, &t, prec).unwrap();
            assert!(r1.contains_zero() && r2.contains_zero(), "{r1} {r2}");
            assert!(!r1.is_heuristic());
        }
        assert!(gauss_derivative_check(&q(1, 1), &q(1, 2), &q(1, 2), 64).is_err());
    }
}
