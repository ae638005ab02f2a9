use super::ball::Ball;
use super::power::{real_power, BranchPolicy};
use super::series::pfq;
use super::{check_prec, EvalError};
use crate::arith::Rational;

/// `ℱ₁(λ), ℱ₂(λ) = (1−λ)^(mu−1) ₃F₂(1, 1, c; 2−β₁, 2−β₂; 1/(1−λ))` with `c = 1−mu` and `c = 2−mu`.
///
/// Only `λ < 0` is implemented: there `1/(1−λ)` lies in `(0, 1)` and the prefactor has a
/// positive real base, so no branch choice is involved.
pub fn f1f2(mu: &Rational, beta1: &Rational, beta2: &Rational, lambda: &Rational, prec: u32) -> Result<(Ball, Ball), EvalError> {
    check_prec(prec)?;
    if !lambda.is_negative() {
        return Err(EvalError::DomainError(format!("λ = {lambda}; only λ < 0 is implemented")));
    }
    let checks = [
        (mu.clone(), "mu"),
        (mu - beta1, "mu − β₁"),
        (mu - beta2, "mu − β₂"),
        (mu - beta1 - beta2, "mu − β₁ − β₂"),
    ];
    for (v, name) in checks {
        if v.is_integer() {
            return Err(EvalError::Precondition(format!("{name} = {v} is an integer")));
        }
    }
    let wp = prec + 16;
    let base = Rational::one() - lambda;
    let z = Ball::from_rational(&base.recip(), wp);
    let prefactor = real_power(&Ball::from_rational(&base, wp), &(mu - Rational::one()), BranchPolicy::Principal)?;
    let two = Rational::from(2);
    let lower = [&two - beta1, &two - beta2];
    let one = Rational::one();
    let f1 = pfq(&[one.clone(), one.clone(), &one - mu], &lower, &z, wp)?;
    let f2 = pfq(&[one.clone(), one, &two - mu], &lower, &z, wp)?;
    Ok(((&prefactor * &f1).round_to(prec), (&prefactor * &f2).round_to(prec)))
}
