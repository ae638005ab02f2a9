use rug::{Float, Integer};
use serde::Serialize;

use super::ball::{up, Ball};
use super::series::{check_lower, pfq};
use super::{check_prec, is_nonpositive_integer, EvalError};
use crate::arith::Rational;

/// Default cap on the number of terms summed at `x = 1`.
pub const DEFAULT_AT_ONE_TERMS: u64 = 1 << 17;

/// Enclosure of `₃F₂(1,1,q;a,b;1)` together with the summation bookkeeping.
#[derive(Clone, Debug, Serialize)]
pub struct AtOneResult {
    pub value: Ball,
    /// Number of terms summed before the tail bound was applied.
    pub terms: u64,
    /// Bound on the omitted tail that was folded into the radius.
    #[serde(serialize_with = "float_string")]
    pub tail_bound: Float,
}

fn float_string<S: serde::Serializer>(f: &Float, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&f.to_string_radix(10, Some(6)))
}

/// First index `M` such that every later term ratio satisfies `t_{n+1}/t_n ≤ 1 − σ/n`.
///
/// With `S = a+b−1−q` and `σ = (1+S)/2`, the inequality
/// `n(n+1)(n+q) ≤ (n−σ)(n+a)(n+b)` reduces to
/// `(S−σ)n² + (ab−q−σ(a+b))n − σab ≥ 0`, which holds beyond the Cauchy root bound.
fn ratio_start(q: &Rational, a: &Rational, b: &Rational, sigma: &Rational, s: &Rational) -> u64 {
    let c2 = s - sigma;
    let c1 = a * b - q - sigma * &(a + b);
    let c0 = -(sigma * &(a * b));
    let cauchy = Rational::one() + c1.abs().max(c0.abs()) / &c2;
    let past = |r: &Rational| -> u64 {
        // Smallest non-negative integer n with n > r.
        let f: Integer = r.floor() + 1;
        if f < 0 {
            0
        } else {
            f.to_u64().expect("moderate parameter")
        }
    };
    [past(&cauchy), past(sigma), past(&-a), past(&-b), past(&-q), 2].into_iter().max().unwrap()
}

/// Enclosure of `₃F₂(1,1,q;a,b;1)`, defined when `a+b−q−2 > 0`.
pub fn pfq_at_1(q: &Rational, a: &Rational, b: &Rational, prec: u32) -> Result<Ball, EvalError> {
    pfq_at_1_capped(q, a, b, prec, DEFAULT_AT_ONE_TERMS).map(|r| r.value)
}

/// [`pfq_at_1`] with an explicit term cap.
///
/// Terms decay like `n^{1+q−a−b}`, so convergence is algebraic. Past the index `M` of
/// [`ratio_start`], `t_n ≤ t_N ((N−1)/(n−1))^σ` for `n > N ≥ M`, and comparing the sum with
/// an integral gives the tail bound `t_N (1 + (N−1)/(σ−1))`. Summation stops when that bound
/// drops below `2^{-prec}` of the partial sum or when the cap is reached; the returned ball
/// is rigorous either way.
pub fn pfq_at_1_capped(q: &Rational, a: &Rational, b: &Rational, prec: u32, max_terms: u64) -> Result<AtOneResult, EvalError> {
    check_prec(prec)?;
    check_lower(&[a.clone(), b.clone()])?;
    let excess = a + b - q - Rational::from(2);
    if !excess.is_positive() {
        return Err(EvalError::NotConvergentAt1 { q: q.clone(), a: a.clone(), b: b.clone(), excess });
    }
    if is_nonpositive_integer(q) {
        let one = Ball::one(prec);
        let value = pfq(&[Rational::one(), Rational::one(), q.clone()], &[a.clone(), b.clone()], &one, prec)?;
        let terms = q.to_i64().map_or(0, |v| v.unsigned_abs() + 1);
        return Ok(AtOneResult { value, terms, tail_bound: Float::new(64) });
    }
    let s = a + b - Rational::one() - q;
    let sigma = (Rational::one() + &s) / Rational::from(2);
    let start = ratio_start(q, a, b, &sigma, &s);
    if start > max_terms {
        return Err(EvalError::NoConvergence(format!(
            "tail bound only available after {start} terms, cap is {max_terms}"
        )));
    }
    let inv_sigma_minus_one = up((&sigma - Rational::one()).recip().as_rug());
    let wp = prec + 32;
    let mut eps = Float::with_val(64, 1);
    eps >>= prec + 2;
    let mut sum = Ball::zero(wp);
    let mut term = Ball::one(wp);
    let mut n: u64 = 0;
    loop {
        if n >= start {
            // tail ≤ |t_n| (1 + (n−1)/(σ−1))
            let factor = up(&up(&inv_sigma_minus_one * (n - 1)) + 1u32);
            let tail = up(&term.abs_upper() * &factor);
            let scale = sum.abs_lower();
            if n >= max_terms || tail <= up(&scale * &eps) {
                let value = sum.add_error(&tail).round_to(prec);
                return Ok(AtOneResult { value, terms: n, tail_bound: tail });
            }
        }
        sum = &sum + &term;
        let nr = Rational::from(n);
        let ratio = (&nr + Rational::one()) * (&nr + q) / ((&nr + a) * (&nr + b));
        term = &term * &Ball::from_rational(&ratio, wp);
        if !term.is_finite() {
            return Err(EvalError::Indeterminate(format!("term {n} at x = 1")));
        }
        n += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q;
    use crate::eval::series::partial_sum;

    #[test]
    fn reference_triple_converges() {
        let r = pfq_at_1_capped(&q(1, 2), &q(7, 6), &q(11, 6), 64, 4096).unwrap();
        assert!(r.value.is_finite());
        // The partial sum with twice as many terms lies inside the first enclosure.
        let p = partial_sum(&[q(1, 1), q(1, 1), q(1, 2)], &[q(7, 6), q(11, 6)], &Ball::one(64), 64, 2 * r.terms).unwrap();
        assert!(r.value.contains_float(p.mid()), "{} vs {}", r.value, p);
        let r2 = pfq_at_1_capped(&q(1, 2), &q(7, 6), &q(11, 6), 64, 8192).unwrap();
        assert!(r.value.overlaps(&r2.value));
        assert!(r2.value.rad() < r.value.rad());
    }

    #[test]
    fn divergent_and_boundary() {
        assert!(matches!(
            pfq_at_1(&q(1, 2), &q(1, 6), &q(1, 4), 64),
            Err(EvalError::NotConvergentAt1 { .. })
        ));
        // a+b−q−2 = 0 exactly.
        assert!(matches!(pfq_at_1(&q(1, 1), &q(3, 2), &q(3, 2), 64), Err(EvalError::NotConvergentAt1 { .. })));
        // 3 − 1/2 − 2 = 1/2 > 0.
        assert!(pfq_at_1_capped(&q(1, 2), &q(3, 2), &q(3, 2), 64, 2048).is_ok());
    }

    #[test]
    fn closed_form_case() {
        // 3F2(1,1,1;2,3;1) = Σ 2/((n+1)²(n+2)) = 2(π²/6) − 2 = π²/3 − 2.
        let r = pfq_at_1_capped(&q(1, 1), &q(2, 1), &q(3, 1), 64, 1 << 14).unwrap();
        let pi = Float::with_val(200, rug::float::Constant::Pi);
        let oracle = Float::with_val(200, pi.square_ref()) / 3u32 - 2u32;
        assert!(r.value.contains_float(&oracle), "{}", r.value);
        assert!(r.value.rad().to_f64() < 1e-3);
    }

    #[test]
    fn terminating_case() {
        // 3F2(1,1,−1;2,2;1) = 1 − 1/4.
        let v = pfq_at_1(&q(-1, 1), &q(2, 1), &q(2, 1), 64).unwrap();
        assert!(v.contains_float(&Float::with_val(64, 0.75)));
    }
}
