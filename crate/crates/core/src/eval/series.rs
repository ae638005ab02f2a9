use rug::Float;
use serde::{Deserialize, Serialize};

use super::ball::{up, Ball};
use super::{check_prec, is_nonpositive_integer, EvalError};
use crate::arith::{pochhammer, Rational};

/// Extra bits carried through a summation beyond the requested precision.
const GUARD_BITS: u32 = 32;

/// Default cap on the number of summed terms.
pub const DEFAULT_MAX_TERMS: u64 = 200_000;

/// Parameters of a generalized hypergeometric series truncated at order `M`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesSpec {
    pub upper: Vec<Rational>,
    pub lower: Vec<Rational>,
    pub order: usize,
}

impl SeriesSpec {
    pub fn new(upper: Vec<Rational>, lower: Vec<Rational>, order: usize) -> Result<SeriesSpec, EvalError> {
        if order < 1 {
            return Err(EvalError::BadSeries("truncation order must be at least 1".into()));
        }
        check_lower(&lower)?;
        Ok(SeriesSpec { upper, lower, order })
    }

    /// Exact coefficients `c_0, …, c_M` of `x^n`.
    pub fn coefficients(&self) -> Vec<Rational> {
        let mut out = Vec::with_capacity(self.order + 1);
        let mut c = Rational::one();
        out.push(c.clone());
        for n in 0..self.order as u64 {
            c *= term_ratio(&self.upper, &self.lower, n);
            out.push(c.clone());
        }
        out
    }

    /// Coefficient of `x^n` in closed form, independent of [`SeriesSpec::coefficients`].
    pub fn coefficient(&self, n: u32) -> Rational {
        let num: Rational = self.upper.iter().map(|a| pochhammer(a, n)).product();
        let den: Rational = self.lower.iter().map(|b| pochhammer(b, n)).product();
        num / (den * pochhammer(&Rational::one(), n))
    }
}

pub(crate) fn check_lower(lower: &[Rational]) -> Result<(), EvalError> {
    match lower.iter().find(|b| is_nonpositive_integer(b)) {
        Some(b) => Err(EvalError::BadLowerParameter(b.clone())),
        None => Ok(()),
    }
}

/// `t_{n+1}/(t_n x) = Π(α_i+n) / (Π(β_j+n)·(n+1))`.
pub(crate) fn term_ratio(upper: &[Rational], lower: &[Rational], n: u64) -> Rational {
    let nr = Rational::from(n);
    let num: Rational = upper.iter().map(|a| a + &nr).product();
    let den: Rational = lower.iter().map(|b| b + &nr).product::<Rational>() * Rational::from(n + 1);
    num / den
}

/// Index of the last nonzero term when some upper parameter is a non-positive integer.
fn termination_index(upper: &[Rational]) -> Option<u64> {
    upper
        .iter()
        .filter(|a| is_nonpositive_integer(a))
        .map(|a| a.to_i64().expect("small integer parameter").unsigned_abs())
        .min()
}

/// Provable bound `ρ ≥ |t_{n+1}/t_n|` valid for every `n ≥ m`, or `None` if none is available at `m`.
///
/// Each upper parameter is paired with a lower one (the factorial contributes the lower
/// parameter 1). For `n` past every parameter's sign change, `(α+n)/(β+n)` is at most 1 when
/// `α ≤ β` and decreases in `n` otherwise, so its supremum over `n ≥ m` is `max(1, (α+m)/(β+m))`.
/// Unpaired lower parameters contribute the decreasing factor `1/(β+n)`.
fn ratio_bound(upper: &[Rational], lower: &[Rational], x_abs: &Rational, m: u64) -> Option<Rational> {
    let mr = Rational::from(m);
    let mut ups: Vec<Rational> = upper.iter().map(|a| a + &mr).collect();
    let mut lows: Vec<Rational> = lower.iter().map(|b| b + &mr).collect();
    lows.push(Rational::from(m + 1));
    if ups.len() > lows.len() || ups.iter().any(Rational::is_negative) || lows.iter().any(|b| !b.is_positive()) {
        return None;
    }
    ups.sort();
    lows.sort();
    let offset = lows.len() - ups.len();
    let mut rho = x_abs.clone();
    for (i, b) in lows.iter().enumerate() {
        if i < offset {
            rho = rho / b;
        } else {
            let f = &ups[i - offset] / b;
            if f > Rational::one() {
                rho *= f;
            }
        }
    }
    Some(rho)
}

fn float_to_rational(f: &Float) -> Rational {
    Rational::from(f.to_rational().expect("finite radius"))
}

enum Stop {
    Adaptive { eps: Float, max_terms: u64 },
    Fixed(u64),
}

/// Summation kernel shared by [`pfq`] and [`pfq_truncated`].
fn sum_series(upper: &[Rational], lower: &[Rational], x: &Ball, wp: u32, stop: Stop) -> Result<(Ball, u64), EvalError> {
    let last = termination_index(upper);
    let mut sum = Ball::zero(wp);
    let mut term = Ball::one(wp);
    let mut x_abs: Option<Rational> = None;
    let mut n: u64 = 0;
    loop {
        if let Some(l) = last {
            if n > l {
                return Ok((sum, n));
            }
        }
        let at_cap = match &stop {
            Stop::Fixed(m) => n == *m,
            Stop::Adaptive { max_terms, .. } => n >= *max_terms,
        };
        let small = match &stop {
            Stop::Adaptive { eps, .. } if last.is_none() && n > 0 => {
                let s = sum.abs_lower();
                let scale = if s.is_zero() { Float::with_val(wp, 1) } else { s };
                term.abs_upper() <= up(&scale * eps)
            }
            _ => false,
        };
        if (at_cap || small) && last.is_none() {
            let xa = x_abs.get_or_insert_with(|| float_to_rational(&x.abs_upper()));
            match ratio_bound(upper, lower, xa, n) {
                Some(rho) if rho < Rational::one() => {
                    let factor = up((Rational::one() - &rho).recip().as_rug());
                    let tail = up(&term.abs_upper() * &factor);
                    let accept = match &stop {
                        Stop::Adaptive { eps, .. } => {
                            let s = sum.abs_lower();
                            let scale = if s.is_zero() { Float::with_val(wp, 1) } else { s };
                            at_cap || tail <= up(&scale * eps)
                        }
                        Stop::Fixed(_) => true,
                    };
                    if accept {
                        return Ok((sum.add_error(&tail), n));
                    }
                }
                _ if at_cap => {
                    return Err(EvalError::NoConvergence(format!(
                        "no tail bound with ratio below 1 after {n} terms"
                    )));
                }
                _ => {}
            }
        }
        if !term.is_finite() || !sum.is_finite() {
            return Err(EvalError::Indeterminate(format!("series enclosure lost at term {n}")));
        }
        sum = &sum + &term;
        let r = Ball::from_rational(&term_ratio(upper, lower, n), wp);
        term = &(&term * x) * &r;
        n += 1;
    }
}

fn classify_argument(upper: &[Rational], lower: &[Rational], x: &Ball) -> Result<(), EvalError> {
    check_lower(lower)?;
    if termination_index(upper).is_some() || x.is_exact_zero() {
        return Ok(());
    }
    let p = upper.len();
    let q = lower.len();
    if p > q + 1 {
        return Err(EvalError::DivergentArgument(format!(
            "{p}F{q} has zero radius of convergence and x = {x} is not zero"
        )));
    }
    if p == q + 1 && x.abs_upper() >= Float::with_val(64, 1) {
        return Err(EvalError::DivergentArgument(format!("|x| + radius ≥ 1 for x = {x}")));
    }
    if !x.is_finite() {
        return Err(EvalError::DivergentArgument("argument ball is unbounded".into()));
    }
    Ok(())
}

/// Rigorous enclosure of `pFq(upper; lower; x)`.
///
/// Terms are summed until the first omitted term and the geometric tail bound are both
/// below `2^{-prec}` relative to the partial sum. Terminating series are summed exactly.
pub fn pfq(upper: &[Rational], lower: &[Rational], x: &Ball, prec: u32) -> Result<Ball, EvalError> {
    pfq_capped(upper, lower, x, prec, DEFAULT_MAX_TERMS).map(|(b, _)| b)
}

/// [`pfq`] with an explicit term cap; also reports the number of terms summed.
///
/// When the cap is reached with a valid tail bound the (wider) enclosure is still returned.
pub fn pfq_capped(
    upper: &[Rational],
    lower: &[Rational],
    x: &Ball,
    prec: u32,
    max_terms: u64,
) -> Result<(Ball, u64), EvalError> {
    check_prec(prec)?;
    classify_argument(upper, lower, x)?;
    let wp = prec + GUARD_BITS;
    let mut eps = Float::with_val(64, 1);
    eps >>= prec + 2;
    let (b, n) = sum_series(upper, lower, &x.round_to(wp.max(x.prec())), wp, Stop::Adaptive { eps, max_terms })?;
    Ok((b.round_to(prec), n))
}

/// Enclosure using exactly `m` terms plus the rigorous tail bound at `m`.
pub fn pfq_truncated(upper: &[Rational], lower: &[Rational], x: &Ball, prec: u32, m: u64) -> Result<Ball, EvalError> {
    check_prec(prec)?;
    classify_argument(upper, lower, x)?;
    sum_series(upper, lower, x, prec + GUARD_BITS, Stop::Fixed(m)).map(|(b, _)| b)
}

/// Enclosure of the finite partial sum `Σ_{n<m} t_n x^n`.
pub fn partial_sum(upper: &[Rational], lower: &[Rational], x: &Ball, prec: u32, m: u64) -> Result<Ball, EvalError> {
    check_prec(prec)?;
    check_lower(lower)?;
    let wp = prec + GUARD_BITS;
    let mut sum = Ball::zero(wp);
    let mut term = Ball::one(wp);
    for n in 0..m {
        sum = &sum + &term;
        term = &(&term * x) * &Ball::from_rational(&term_ratio(upper, lower, n), wp);
    }
    Ok(sum)
}

/// `d^k/dx^k pFq = (Π(α)_k / Π(β)_k) · pFq(α+k; β+k; x)`.
pub fn pfq_derivative(upper: &[Rational], lower: &[Rational], x: &Ball, k: u32, prec: u32) -> Result<Ball, EvalError> {
    check_lower(lower)?;
    let kr = Rational::from(k);
    let factor: Rational = upper.iter().map(|a| pochhammer(a, k)).product::<Rational>()
        / lower.iter().map(|b| pochhammer(b, k)).product::<Rational>();
    if factor.is_zero() {
        return Ok(Ball::zero(prec));
    }
    let up_k: Vec<Rational> = upper.iter().map(|a| a + &kr).collect();
    let lo_k: Vec<Rational> = lower.iter().map(|b| b + &kr).collect();
    let f = pfq(&up_k, &lo_k, x, prec + 8)?;
    Ok(f.mul_rational(&factor).round_to(prec))
}
