use rug::float::Constant;
use rug::Float;
use serde::{Deserialize, Serialize};

use super::ball::Ball;
use super::{check_prec, EvalError};
use crate::arith::Rational;

/// Finest level tried before giving up; the step is `2^{-level-1}`.
pub const MAX_LEVEL: u32 = 12;

/// `x^(α−1) (1−x)^(β−1) (1−tx)^(−γ)` on `(0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BetaIntegrand {
    pub alpha: Rational,
    pub beta: Rational,
    pub gamma: Rational,
    pub t: Rational,
}

impl BetaIntegrand {
    pub fn new(alpha: Rational, beta: Rational, gamma: Rational, t: Rational) -> BetaIntegrand {
        BetaIntegrand { alpha, beta, gamma, t }
    }

    /// The Beta integrand `x^(α−1)(1−x)^(β−1)`.
    pub fn beta(alpha: Rational, beta: Rational) -> BetaIntegrand {
        BetaIntegrand::new(alpha, beta, Rational::zero(), Rational::zero())
    }

    fn validate(&self) -> Result<(), EvalError> {
        if !self.alpha.is_positive() || !self.beta.is_positive() {
            return Err(EvalError::Precondition(format!(
                "quadrature needs α, β > 0, got α = {}, β = {}",
                self.alpha, self.beta
            )));
        }
        if self.t.is_negative() || self.t >= Rational::one() {
            return Err(EvalError::Precondition(format!("quadrature needs 0 ≤ t < 1, got t = {}", self.t)));
        }
        Ok(())
    }
}

/// Integrand times tanh-sinh weight, evaluated in the log domain at a node `τ`.
///
/// With `u = π sinh τ`, `x = 1/(1+e^{−u})` and `1−x = 1/(1+e^{u})`, and `dx/dτ = π cosh τ · x(1−x)`.
/// Both `ln x` and `ln(1−x)` are formed from `ln(1+e^{−|u|})` so neither endpoint loses accuracy.
struct Node<'a> {
    f: &'a BetaIntegrand,
    alpha: Float,
    beta: Float,
    gamma: Float,
    t: Float,
    one_minus_t: Float,
    ln_pi: Float,
    pi: Float,
}

impl<'a> Node<'a> {
    fn new(f: &'a BetaIntegrand, wp: u32) -> Node<'a> {
        let pi = Float::with_val(wp, Constant::Pi);
        Node {
            f,
            alpha: Float::with_val(wp, f.alpha.as_rug()),
            beta: Float::with_val(wp, f.beta.as_rug()),
            gamma: Float::with_val(wp, f.gamma.as_rug()),
            t: Float::with_val(wp, f.t.as_rug()),
            one_minus_t: Float::with_val(wp, (Rational::one() - &f.t).as_rug()),
            ln_pi: Float::with_val(wp, pi.ln_ref()),
            pi,
        }
    }

    fn value(&self, tau: &Float) -> Float {
        let wp = self.pi.prec();
        let u = Float::with_val(wp, tau.sinh_ref()) * &self.pi;
        let neg_abs = -Float::with_val(wp, &*u.as_abs());
        let l = Float::with_val(wp, neg_abs.exp_ref()).ln_1p();
        let (ln_x, ln_1mx) = if u.is_sign_positive() {
            (-l.clone(), -Float::with_val(wp, &u + &l))
        } else {
            (Float::with_val(wp, &u - &l), -l.clone())
        };
        let mut log = Float::with_val(wp, tau.cosh_ref()).ln() + &self.ln_pi;
        log += Float::with_val(wp, &self.alpha * &ln_x);
        log += Float::with_val(wp, &self.beta * &ln_1mx);
        if !self.f.gamma.is_zero() && !self.f.t.is_zero() {
            // 1 − t x = (1 − t) + t (1 − x)
            let one_mx = Float::with_val(wp, ln_1mx.exp_ref());
            let inner = Float::with_val(wp, &self.t * &one_mx) + &self.one_minus_t;
            log -= Float::with_val(wp, &self.gamma * &inner.ln());
        }
        log.exp()
    }
}

/// Tanh-sinh quadrature of an endpoint-singular integrand over `(0, 1)`.
///
/// Levels halve the step until two successive estimates agree to `2^{-prec}` relative;
/// the returned radius is the last level difference, so the ball is flagged heuristic.
pub fn de_quad(f: &BetaIntegrand, prec: u32) -> Result<Ball, EvalError> {
    check_prec(prec)?;
    f.validate()?;
    let wp = prec + 24;
    let node = Node::new(f, wp);
    // Past τ_max the integrand times weight is below 2^{-wp-20} relative: it decays like
    // exp(−min(α, β) π sinh τ) at both ends.
    let decay = f.alpha.clone().min(f.beta.clone()).to_f64() * std::f64::consts::PI;
    let tau_max = ((wp as f64 * std::f64::consts::LN_2 + 20.0) / decay).asinh() + 1.0;

    let mut h = Float::with_val(wp, 0.5);
    let mut raw = node.value(&Float::new(wp));
    let mut k: i64 = 1;
    loop {
        let tau = Float::with_val(wp, &h * k);
        if tau.to_f64() > tau_max {
            break;
        }
        raw += node.value(&tau);
        raw += node.value(&Float::with_val(wp, -&tau));
        k += 1;
    }
    let mut estimate = Float::with_val(wp, &raw * &h);
    for level in 1..=MAX_LEVEL {
        h >>= 1;
        let mut k: i64 = 1;
        loop {
            let tau = Float::with_val(wp, &h * k);
            if tau.to_f64() > tau_max {
                break;
            }
            raw += node.value(&tau);
            raw += node.value(&Float::with_val(wp, -&tau));
            k += 2;
        }
        let next = Float::with_val(wp, &raw * &h);
        let diff = Float::with_val(wp, &next - &estimate).abs();
        let mut target = Float::with_val(64, &*next.as_abs());
        target >>= prec;
        estimate = next;
        if level >= 3 && diff <= target {
            let mut floor = Float::with_val(64, &*estimate.as_abs());
            floor >>= wp - 4;
            let rad = Float::with_val(64, &diff + &floor);
            return Ok(Ball::new(estimate, &rad).round_to(prec).into_heuristic());
        }
    }
    Err(EvalError::NoConvergence(format!("tanh-sinh quadrature did not settle by level {MAX_LEVEL}")))
}
