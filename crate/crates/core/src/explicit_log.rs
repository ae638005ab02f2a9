//! The closed form of `₃F₂(1,1,1/2; 7/6,11/6; x)` on `(0, 1)` in terms of the roots of a cubic.
//!
//! With `r± = x⁻¹(−1/4 + x/8 ± √(1−x)/4)`, let `u`, `v` be the real cube roots of `r₊`, `r₋`
//! (both radicands are negative on `(0, 1)`, and `uv = 1/4`). Then
//!
//! ```text
//! e₁ = 1/2 + u + v,   e₂ = 1/2 + ω̄u + ωv,   e₃ = 1/2 + ωu + ω̄v      (ω = e^{2πi/3})
//! p± = ((1 ± √(1−x))/√x)^{2/3},   q_j = (1 − √(3x)e_j)/(1 + √(3x)e_j)
//! ₃F₂ = (5√3/36) x^{−1/2} [ (p₊+p₋)·L₁₂ + (e^{iπ/3}p₊ + e^{−iπ/3}p₋)·L₂₃ ]
//! ```
//!
//! where `L_{jk}` is a logarithm of `q_j/q_k`. Each `t_j = e_j − 1/2` is a root of
//! `4x t³ − 3x t − (x−2) = 0`.
//!
//! The choice of logarithm matters. `q₁` is real and positive while `q₂ = q̄₃` sits in the upper
//! half plane with argument above `π/2` over most of `(0, 1)`, so `arg(q₂/q₃) = 2 arg q₂` leaves
//! `(−π, π]`. [`LogPolicy::SplitPrincipal`] takes `L_{jk} = log q_j − log q_k` with principal
//! logarithms of the factors and satisfies the identity. [`LogPolicy::RatioPrincipal`] takes the
//! principal logarithm of the ratio and does not.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::arith::{q, Rational};
use crate::eval::{pfq, real_power, Ball, BranchPolicy, ComplexBall, EvalError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExplicitLogError {
    #[error("x must lie strictly inside (0, 1), got {0}")]
    Domain(String),
    #[error("1 + √(3x)·e_{0} may vanish on the ball")]
    DegenerateDenominator(usize),
    #[error("cube roots fail the consistency check u·v = 1/4: {0}")]
    BranchGuard(String),
    #[error("unknown log policy {0:?} (expected split or ratio)")]
    UnknownPolicy(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// How `L₁₂` and `L₂₃` are formed from the `q_j`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub enum LogPolicy {
    /// `log q_j − log q_k` with principal logarithms of each factor.
    #[default]
    SplitPrincipal,
    /// Principal logarithm of the single complex ratio `q_j/q_k`.
    RatioPrincipal,
}

impl LogPolicy {
    pub const ALL: [LogPolicy; 2] = [LogPolicy::SplitPrincipal, LogPolicy::RatioPrincipal];
}

impl fmt::Display for LogPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LogPolicy::SplitPrincipal => "split",
            LogPolicy::RatioPrincipal => "ratio",
        })
    }
}

impl FromStr for LogPolicy {
    type Err = ExplicitLogError;
    fn from_str(s: &str) -> Result<LogPolicy, ExplicitLogError> {
        match s {
            "split" => Ok(LogPolicy::SplitPrincipal),
            "ratio" => Ok(LogPolicy::RatioPrincipal),
            _ => Err(ExplicitLogError::UnknownPolicy(s.to_string())),
        }
    }
}

/// Assignment of the three roots `τ_k = 1/2 + ω^k u + ω^{−k} v` to `(e₁, e₂, e₃)`.
///
/// Every `τ_k` keeps the product of the cube-root terms equal to `uv = 1/4`; the formula above
/// is the assignment `[0, 2, 1]`.
pub type RootAssignment = [usize; 3];

pub const LITERAL_ASSIGNMENT: RootAssignment = [0, 2, 1];

/// All six assignments, literal first.
pub const ALL_ASSIGNMENTS: [RootAssignment; 6] = [[0, 2, 1], [0, 1, 2], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

/// Every derived quantity at one point `x`.
#[derive(Clone, Debug, Serialize)]
pub struct CubicRootData {
    pub x: Ball,
    pub u: Ball,
    pub v: Ball,
    pub e: [ComplexBall; 3],
    pub p_plus: Ball,
    pub p_minus: Ball,
    pub q: [ComplexBall; 3],
}

/// `e^{iθ}` for `θ = kπ/3`, built from `√3/2` so the components are tight.
fn sixth_root(k: i64, prec: u32) -> ComplexBall {
    let h = Ball::from_i64(3, prec).sqrt().mul_2exp(-1);
    let half = Ball::from_rational(&q(1, 2), prec);
    let one = Ball::one(prec);
    let (re, im) = match k.rem_euclid(6) {
        0 => (one, Ball::zero(prec)),
        1 => (half, h),
        2 => (-&half, h),
        3 => (-&one, Ball::zero(prec)),
        4 => (-&half, -&h),
        _ => (half, -&h),
    };
    ComplexBall::new(re, im)
}

fn check_domain(x: &Ball) -> Result<(), ExplicitLogError> {
    let inside = x.is_finite() && x.lower().is_sign_positive() && !x.lower().is_zero() && x.upper() < 1;
    if inside {
        Ok(())
    } else {
        Err(ExplicitLogError::Domain(x.to_string()))
    }
}

/// Builds `u, v, e_j, p±, q_j` with the root assignment `assign`.
pub fn build_roots_with(x: &Ball, prec: u32, assign: RootAssignment) -> Result<CubicRootData, ExplicitLogError> {
    check_domain(x)?;
    let x = x.round_to(prec);
    let one = Ball::one(prec);
    let s = (&one - &x).sqrt();
    let base = &Ball::from_rational(&q(-1, 4), prec) + &x.mul_2exp(-3);
    let quarter_s = s.mul_2exp(-2);
    let third = q(1, 3);
    let u = real_power(&(&(&base + &quarter_s) / &x), &third, BranchPolicy::RealRoot)?;
    let v = real_power(&(&(&base - &quarter_s) / &x), &third, BranchPolicy::RealRoot)?;
    let uv = &(&u * &v) - &Ball::from_rational(&q(1, 4), prec);
    if !uv.contains_zero() {
        return Err(ExplicitLogError::BranchGuard(uv.to_string()));
    }

    let half = ComplexBall::from_rationals(&q(1, 2), &Rational::zero(), prec);
    let (uc, vc) = (ComplexBall::real(u.clone()), ComplexBall::real(v.clone()));
    let tau: Vec<ComplexBall> = (0..3)
        .map(|k| &(&half + &(&sixth_root(2 * k, prec) * &uc)) + &(&sixth_root(-2 * k, prec) * &vc))
        .collect();
    let e = assign.map(|k| tau[k].clone());

    let sqrt_x = x.sqrt();
    let two_thirds = q(2, 3);
    let p_plus = real_power(&(&(&one + &s) / &sqrt_x), &two_thirds, BranchPolicy::Principal)?;
    let p_minus = real_power(&(&(&one - &s) / &sqrt_x), &two_thirds, BranchPolicy::Principal)?;

    let r3x = ComplexBall::real(x.mul_rational(&Rational::from(3)).sqrt());
    let onec = ComplexBall::one(prec);
    let mut qs = Vec::with_capacity(3);
    for (j, ej) in e.iter().enumerate() {
        let t = &r3x * ej;
        let den = &onec + &t;
        if den.contains_zero() {
            return Err(ExplicitLogError::DegenerateDenominator(j + 1));
        }
        qs.push(&(&onec - &t) / &den);
    }
    let q: [ComplexBall; 3] = qs.try_into().expect("three roots");
    Ok(CubicRootData { x, u, v, e, p_plus, p_minus, q })
}

/// [`build_roots_with`] using the literal assignment.
pub fn build_roots(x: &Ball, prec: u32) -> Result<CubicRootData, ExplicitLogError> {
    build_roots_with(x, prec, LITERAL_ASSIGNMENT)
}

impl CubicRootData {
    /// `u·v − 1/4`.
    pub fn uv_defect(&self) -> Ball {
        &(&self.u * &self.v) - &Ball::from_rational(&q(1, 4), self.u.prec())
    }

    /// `e₁ + e₂ + e₃ − 3/2`.
    pub fn sum_defect(&self) -> ComplexBall {
        let p = self.x.prec();
        let s = &(&self.e[0] + &self.e[1]) + &self.e[2];
        &s - &ComplexBall::from_rationals(&q(3, 2), &Rational::zero(), p)
    }

    /// `4x t³ − 3x t − (x − 2)` at `t = e_j − 1/2`, for each `j`.
    pub fn cubic_defects(&self) -> [ComplexBall; 3] {
        let p = self.x.prec();
        let x = ComplexBall::real(self.x.clone());
        let half = ComplexBall::from_rationals(&q(1, 2), &Rational::zero(), p);
        let c = ComplexBall::real(&self.x - &Ball::from_i64(2, p));
        self.e.clone().map(|e| {
            let t = &e - &half;
            let t3 = &(&t * &t) * &t;
            let lhs = &(&x * &t3).mul_rational(&Rational::from(4)) - &(&x * &t).mul_rational(&Rational::from(3));
            &lhs - &c
        })
    }

    /// `p₊p₋ − 1`.
    pub fn p_defect(&self) -> Ball {
        &(&self.p_plus * &self.p_minus) - &Ball::one(self.x.prec())
    }
}

fn log_ratio(a: &ComplexBall, b: &ComplexBall, policy: LogPolicy) -> Result<ComplexBall, EvalError> {
    match policy {
        LogPolicy::SplitPrincipal => Ok(&a.ln()? - &b.ln()?),
        LogPolicy::RatioPrincipal => (a / b).ln(),
    }
}

/// The right-hand side as a complex ball, for any assignment and policy.
pub fn explicit_rhs_with(x: &Ball, prec: u32, assign: RootAssignment, policy: LogPolicy) -> Result<ComplexBall, ExplicitLogError> {
    let wp = prec + 32;
    let d = build_roots_with(&x.round_to(wp), wp, assign)?;
    let l12 = log_ratio(&d.q[0], &d.q[1], policy)?;
    let l23 = log_ratio(&d.q[1], &d.q[2], policy)?;
    let pp = ComplexBall::real(d.p_plus.clone());
    let pm = ComplexBall::real(d.p_minus.clone());
    let first = &(&pp + &pm) * &l12;
    let second = &(&(&sixth_root(1, wp) * &pp) + &(&sixth_root(-1, wp) * &pm)) * &l23;
    let bracket = &first + &second;
    // (5√3/36) x^{−1/2}
    let scale = &Ball::from_i64(3, wp).sqrt().mul_rational(&q(5, 36)) / &d.x.sqrt();
    let v = bracket.scale(&scale);
    Ok(ComplexBall::new(v.re.round_to(prec), v.im.round_to(prec)))
}

/// The right-hand side with the literal assignment and split logarithms.
///
/// Fails with [`EvalError::Indeterminate`] if the imaginary part is not compatible with zero.
pub fn explicit_rhs(x: &Ball, prec: u32) -> Result<Ball, ExplicitLogError> {
    let v = explicit_rhs_with(x, prec, LITERAL_ASSIGNMENT, LogPolicy::default())?;
    if !v.im.contains_zero() {
        return Err(EvalError::Indeterminate(format!("right-hand side has imaginary part {}", v.im)).into());
    }
    Ok(v.re)
}

/// `₃F₂(1,1,1/2; 7/6,11/6; x)` as a ball.
pub fn explicit_lhs(x: &Ball, prec: u32) -> Result<Ball, ExplicitLogError> {
    check_domain(x)?;
    let upper = [Rational::one(), Rational::one(), q(1, 2)];
    let lower = [q(7, 6), q(11, 6)];
    Ok(pfq(&upper, &lower, x, prec)?)
}

/// Left side minus right side, as a complex ball, for any assignment and policy.
pub fn explicit_residual_with(x: &Ball, prec: u32, assign: RootAssignment, policy: LogPolicy) -> Result<ComplexBall, ExplicitLogError> {
    let lhs = explicit_lhs(x, prec + 16)?;
    let rhs = explicit_rhs_with(x, prec + 16, assign, policy)?;
    let d = &ComplexBall::real(lhs) - &rhs;
    Ok(ComplexBall::new(d.re.round_to(prec), d.im.round_to(prec)))
}

/// Real residual `₃F₂ − RHS` under the default branch choices. Should contain 0.
pub fn explicit_residual(x: &Ball, prec: u32) -> Result<Ball, ExplicitLogError> {
    let lhs = explicit_lhs(x, prec + 16)?;
    let rhs = explicit_rhs(x, prec + 16)?;
    Ok((&lhs - &rhs).round_to(prec))
}

/// One row of the branch diagnostic.
#[derive(Clone, Debug, Serialize)]
pub struct BranchOutcome {
    pub assignment: RootAssignment,
    pub policy: LogPolicy,
    pub residual: Option<ComplexBall>,
    pub error: Option<String>,
    /// Both components of the residual contain zero.
    pub satisfied: bool,
}

/// Residuals for all six root assignments under both log policies.
pub fn branch_diagnostic(x: &Ball, prec: u32) -> Vec<BranchOutcome> {
    let mut out = Vec::with_capacity(12);
    for policy in LogPolicy::ALL {
        for assignment in ALL_ASSIGNMENTS {
            match explicit_residual_with(x, prec, assignment, policy) {
                Ok(r) => {
                    let satisfied = r.re.contains_zero() && r.im.contains_zero();
                    out.push(BranchOutcome { assignment, policy, residual: Some(r), error: None, satisfied });
                }
                Err(e) => out.push(BranchOutcome { assignment, policy, residual: None, error: Some(e.to_string()), satisfied: false }),
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Float;

    fn ball(n: i64, d: i64) -> Ball {
        Ball::from_rational(&q(n, d), 192)
    }

    #[test]
    fn invariants_at_half() {
        let d = build_roots(&ball(1, 2), 128).unwrap();
        assert!(d.uv_defect().contains_zero());
        assert!(d.sum_defect().contains_zero());
        for c in d.cubic_defects() {
            assert!(c.contains_zero(), "{c}");
        }
        // e₂ and e₃ are conjugate.
        assert!((&d.e[1] - &d.e[2].conj()).contains_zero());
        assert!(d.e[0].im.is_exact_zero() || d.e[0].im.contains_zero());
    }

    #[test]
    fn p_product_is_one() {
        let d = build_roots(&ball(1, 3), 128).unwrap();
        assert!(d.p_defect().contains_zero());
    }

    #[test]
    fn near_one_limit() {
        // At x = 1: u = v = −1/2 and q₁ = 7 + 4√3.
        let x = Ball::from_rational(&(Rational::one() - q(1, 1 << 40)), 128);
        let d = build_roots(&x, 128).unwrap();
        assert!((d.u.to_f64() + 0.5).abs() < 1e-5);
        let q1 = d.q[0].re.to_f64();
        assert!((q1 - (7.0 + 4.0 * 3f64.sqrt())).abs() < 1e-4, "{q1}");
    }

    #[test]
    fn identity_holds_at_half() {
        let r = explicit_residual(&ball(1, 2), 192).unwrap();
        assert!(r.contains_zero(), "{r}");
        assert!(r.rad() < &Float::with_val(64, Float::i_exp(1, -80)));
    }

    #[test]
    fn rhs_is_real() {
        for (n, d) in [(1, 4), (1, 2)] {
            let v = explicit_rhs_with(&ball(n, d), 128, LITERAL_ASSIGNMENT, LogPolicy::SplitPrincipal).unwrap();
            assert!(v.im.contains_zero());
        }
    }

    #[test]
    fn ratio_policy_fails_where_argument_wraps() {
        // arg q₂ > π/2 at x = 1/2, so the principal log of q₂/q₃ loses 2πi.
        let r = explicit_residual_with(&ball(1, 2), 128, LITERAL_ASSIGNMENT, LogPolicy::RatioPrincipal).unwrap();
        assert!(!(r.re.contains_zero() && r.im.contains_zero()));
    }

    #[test]
    fn diagnostic_singles_out_literal() {
        let rows = branch_diagnostic(&ball(1, 2), 128);
        assert_eq!(rows.len(), 12);
        let good: Vec<_> = rows.iter().filter(|r| r.satisfied).collect();
        assert_eq!(good.len(), 1, "{good:?}");
        assert_eq!(good[0].assignment, LITERAL_ASSIGNMENT);
        assert_eq!(good[0].policy, LogPolicy::SplitPrincipal);
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(build_roots(&ball(1, 1), 64), Err(ExplicitLogError::Domain(_))));
        assert!(matches!(build_roots(&ball(0, 1), 64), Err(ExplicitLogError::Domain(_))));
        assert!(matches!(build_roots(&ball(3, 2), 64), Err(ExplicitLogError::Domain(_))));
    }
}
