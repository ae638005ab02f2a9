use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::float::{Constant, Round};
use rug::ops::AssignRound;
use rug::Float;
use serde::{Serialize, Serializer};

use crate::arith::Rational;

/// Precision of radii. Radii are always rounded away from zero.
pub const RAD_PREC: u32 = 64;

/// Smallest and largest working precision accepted by the evaluators.
pub const MIN_PREC: u32 = 16;
pub const MAX_PREC: u32 = 1 << 16;

pub(crate) fn up<T>(val: T) -> Float
where
    Float: AssignRound<T, Round = Round, Ordering = Ordering>,
{
    Float::with_val_round(RAD_PREC, val, Round::Up).0
}

pub(crate) fn down<T>(val: T) -> Float
where
    Float: AssignRound<T, Round = Round, Ordering = Ordering>,
{
    Float::with_val_round(RAD_PREC, val, Round::Down).0
}

/// Upper bound on the error of a correctly rounded result `mid`.
fn rounding_error(mid: &Float, ord: Ordering) -> Float {
    if ord == Ordering::Equal {
        return Float::new(RAD_PREC);
    }
    let mut e = up(&*mid.as_abs());
    e >>= mid.prec() - 1;
    e
}

/// Real midpoint-radius ball `[mid − rad, mid + rad]`.
///
/// Every operation returns a ball containing the image of its operands unless the result
/// is marked heuristic. Undefined results (division by a ball containing zero, logarithm of
/// a ball reaching zero) come back with an infinite radius rather than panicking.
#[derive(Clone, Debug)]
pub struct Ball {
    mid: Float,
    rad: Float,
    heuristic: bool,
}

impl Ball {
    /// Ball from a midpoint and a radius; the radius is rounded up to [`RAD_PREC`] bits.
    pub fn new(mid: Float, rad: &Float) -> Ball {
        assert!(!rad.is_sign_negative() || rad.is_zero(), "negative radius");
        Ball { mid, rad: up(rad), heuristic: false }
    }

    pub fn exact(mid: Float) -> Ball {
        Ball { mid, rad: Float::new(RAD_PREC), heuristic: false }
    }

    pub fn zero(prec: u32) -> Ball {
        Ball::exact(Float::new(prec))
    }

    pub fn one(prec: u32) -> Ball {
        Ball::exact(Float::with_val(prec, 1))
    }

    pub fn from_i64(v: i64, prec: u32) -> Ball {
        let (mid, ord) = Float::with_val_round(prec, v, Round::Nearest);
        let rad = rounding_error(&mid, ord);
        Ball { mid, rad, heuristic: false }
    }

    pub fn from_rational(r: &Rational, prec: u32) -> Ball {
        let (mid, ord) = Float::with_val_round(prec, r.as_rug(), Round::Nearest);
        let rad = rounding_error(&mid, ord);
        Ball { mid, rad, heuristic: false }
    }

    pub fn pi(prec: u32) -> Ball {
        let (mid, ord) = Float::with_val_round(prec, Constant::Pi, Round::Nearest);
        let rad = rounding_error(&mid, ord);
        Ball { mid, rad, heuristic: false }
    }

    /// The whole real line: the result of an undefined operation.
    pub fn indeterminate(prec: u32) -> Ball {
        let mut rad = Float::new(RAD_PREC);
        rad.assign_round(rug::float::Special::Infinity, Round::Up);
        Ball { mid: Float::new(prec), rad, heuristic: false }
    }

    /// Smallest ball at `prec` containing `[lo, hi]`.
    pub fn from_endpoints(lo: &Float, hi: &Float, prec: u32) -> Ball {
        if !lo.is_finite() || !hi.is_finite() {
            return Ball::indeterminate(prec);
        }
        let (mut mid, _) = Float::with_val_round(prec, lo + hi, Round::Nearest);
        mid >>= 1;
        let r1 = up(hi - &mid);
        let r2 = up(&mid - lo);
        let rad = if r1 > r2 { r1 } else { r2 };
        Ball { mid, rad, heuristic: false }
    }

    pub fn mid(&self) -> &Float {
        &self.mid
    }

    pub fn rad(&self) -> &Float {
        &self.rad
    }

    pub fn prec(&self) -> u32 {
        self.mid.prec()
    }

    pub fn is_heuristic(&self) -> bool {
        self.heuristic
    }

    /// Marks the ball as a heuristic estimate rather than a proven enclosure.
    pub fn into_heuristic(mut self) -> Ball {
        self.heuristic = true;
        self
    }

    pub fn is_finite(&self) -> bool {
        self.mid.is_finite() && self.rad.is_finite()
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.mid.is_zero() && self.rad.is_zero()
    }

    /// Widens the radius by `err`.
    pub fn add_error(mut self, err: &Float) -> Ball {
        self.rad = up(&self.rad + &*err.as_abs());
        self
    }

    /// Rounds the midpoint to `prec` bits, absorbing the rounding error into the radius.
    pub fn round_to(&self, prec: u32) -> Ball {
        let (mid, ord) = Float::with_val_round(prec, &self.mid, Round::Nearest);
        let err = rounding_error(&mid, ord);
        Ball { mid, rad: up(&self.rad + &err), heuristic: self.heuristic }
    }

    /// Lower endpoint, rounded down at the midpoint precision.
    pub fn lower(&self) -> Float {
        Float::with_val_round(self.prec(), &self.mid - &self.rad, Round::Down).0
    }

    /// Upper endpoint, rounded up at the midpoint precision.
    pub fn upper(&self) -> Float {
        Float::with_val_round(self.prec(), &self.mid + &self.rad, Round::Up).0
    }

    /// Upper bound for `|x|` over the ball.
    pub fn abs_upper(&self) -> Float {
        up(&*self.mid.as_abs() + &self.rad)
    }

    /// Lower bound for `|x|` over the ball; zero when the ball contains zero.
    pub fn abs_lower(&self) -> Float {
        let v = down(&*self.mid.as_abs() - &self.rad);
        if v.is_sign_negative() {
            Float::new(RAD_PREC)
        } else {
            v
        }
    }

    pub fn contains_zero(&self) -> bool {
        *self.mid.as_abs() <= self.rad
    }

    /// Whether `x` provably lies in the ball.
    pub fn contains_float(&self, x: &Float) -> bool {
        self.is_finite() && abs_diff_upper(x, &self.mid) <= self.rad
    }

    /// Whether `other` provably lies inside `self`.
    pub fn contains(&self, other: &Ball) -> bool {
        self.is_finite() && other.is_finite() && up(&abs_diff_upper(&other.mid, &self.mid) + &other.rad) <= self.rad
    }

    /// Whether the two balls might share a point.
    pub fn overlaps(&self, other: &Ball) -> bool {
        let p = self.prec().max(other.prec()) + 8;
        let d = Float::with_val(p, &other.mid - &self.mid);
        down(&*d.as_abs()) <= up(&self.rad + &other.rad)
    }

    /// Absolute width bound `|x|` for every `x` in the ball compared against `eps`.
    pub fn abs_below(&self, eps: &Float) -> bool {
        self.is_finite() && self.abs_upper() < *eps
    }

    pub fn to_f64(&self) -> f64 {
        self.mid.to_f64()
    }

    fn binary_prec(&self, other: &Ball) -> u32 {
        self.prec().max(other.prec())
    }

    fn flagged(mut self, a: &Ball, b: &Ball) -> Ball {
        self.heuristic = a.heuristic || b.heuristic;
        self
    }

    pub fn add_ball(&self, other: &Ball) -> Ball {
        let p = self.binary_prec(other);
        let (mid, ord) = Float::with_val_round(p, &self.mid + &other.mid, Round::Nearest);
        let err = rounding_error(&mid, ord);
        let rad = up(&up(&self.rad + &other.rad) + &err);
        Ball { mid, rad, heuristic: false }.flagged(self, other)
    }

    pub fn sub_ball(&self, other: &Ball) -> Ball {
        let p = self.binary_prec(other);
        let (mid, ord) = Float::with_val_round(p, &self.mid - &other.mid, Round::Nearest);
        let err = rounding_error(&mid, ord);
        let rad = up(&up(&self.rad + &other.rad) + &err);
        Ball { mid, rad, heuristic: false }.flagged(self, other)
    }

    pub fn mul_ball(&self, other: &Ball) -> Ball {
        let p = self.binary_prec(other);
        let (mid, ord) = Float::with_val_round(p, &self.mid * &other.mid, Round::Nearest);
        let err = rounding_error(&mid, ord);
        let a_abs = up(&*self.mid.as_abs());
        let b_abs = up(&*other.mid.as_abs());
        let t1 = up(&a_abs * &other.rad);
        let t2 = up(&b_abs * &self.rad);
        let t3 = up(&self.rad * &other.rad);
        let rad = up(&up(&up(&t1 + &t2) + &t3) + &err);
        let out = if rad.is_nan() { Ball::indeterminate(p) } else { Ball { mid, rad, heuristic: false } };
        out.flagged(self, other)
    }

    pub fn div_ball(&self, other: &Ball) -> Ball {
        if other.is_exact() && !other.mid.is_zero() {
            // Exact divisor: divide midpoint and radius directly.
            let p = self.binary_prec(other);
            let (mid, ord) = Float::with_val_round(p, &self.mid / &other.mid, Round::Nearest);
            let err = rounding_error(&mid, ord);
            let rad = up(&up(&self.rad / &down(&*other.mid.as_abs())) + &err);
            return Ball { mid, rad, heuristic: false }.flagged(self, other);
        }
        self.mul_ball(&other.recip())
    }

    pub fn neg_ball(&self) -> Ball {
        Ball { mid: Float::with_val(self.prec(), -&self.mid), rad: self.rad.clone(), heuristic: self.heuristic }
    }

    pub fn mul_rational(&self, r: &Rational) -> Ball {
        self.mul_ball(&Ball::from_rational(r, self.prec()))
    }

    pub fn add_rational(&self, r: &Rational) -> Ball {
        self.add_ball(&Ball::from_rational(r, self.prec()))
    }

    /// Multiplication by `2^k`, exact.
    pub fn mul_2exp(&self, k: i32) -> Ball {
        let mut mid = self.mid.clone();
        let mut rad = self.rad.clone();
        if k >= 0 {
            mid <<= k as u32;
            rad <<= k as u32;
        } else {
            mid >>= k.unsigned_abs();
            rad >>= k.unsigned_abs();
        }
        Ball { mid, rad, heuristic: self.heuristic }
    }

    pub fn sqr(&self) -> Ball {
        // |x² − m²| ≤ 2|m|r + r².
        let (mid, ord) = Float::with_val_round(self.prec(), self.mid.square_ref(), Round::Nearest);
        let err = rounding_error(&mid, ord);
        let m = up(&*self.mid.as_abs());
        let lin = up(&up(&m * &self.rad) * 2u32);
        let rad = up(&up(&lin + &up(self.rad.square_ref())) + &err);
        Ball { mid, rad, heuristic: self.heuristic }
    }

    pub fn pow_u(&self, n: u32) -> Ball {
        let mut result = Ball::one(self.prec());
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul_ball(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.sqr();
            }
        }
        result
    }

    /// Applies a monotone function through the endpoints of the ball.
    fn monotone<F>(&self, increasing: bool, f: F) -> Ball
    where
        F: Fn(&mut Float, Round) -> Ordering,
    {
        let p = self.prec();
        let mut lo = self.lower();
        let mut hi = self.upper();
        let (lo_round, hi_round) = if increasing { (Round::Down, Round::Up) } else { (Round::Up, Round::Down) };
        f(&mut lo, lo_round);
        f(&mut hi, hi_round);
        let out = if increasing { Ball::from_endpoints(&lo, &hi, p) } else { Ball::from_endpoints(&hi, &lo, p) };
        Ball { heuristic: self.heuristic, ..out }
    }

    fn guard(&self) -> Option<Ball> {
        if self.is_finite() {
            None
        } else {
            Some(Ball { heuristic: self.heuristic, ..Ball::indeterminate(self.prec()) })
        }
    }

    pub fn recip(&self) -> Ball {
        if let Some(b) = self.guard() {
            return b;
        }
        if self.contains_zero() {
            return Ball { heuristic: self.heuristic, ..Ball::indeterminate(self.prec()) };
        }
        self.monotone(false, |x, r| x.recip_round(r))
    }

    /// Square root on the non-negative part of the ball.
    pub fn sqrt(&self) -> Ball {
        if let Some(b) = self.guard() {
            return b;
        }
        if self.upper().is_sign_negative() {
            return Ball { heuristic: self.heuristic, ..Ball::indeterminate(self.prec()) };
        }
        let p = self.prec();
        let mut lo = self.lower();
        if lo.is_sign_negative() {
            lo = Float::new(p);
        }
        let mut hi = self.upper();
        lo.sqrt_round(Round::Down);
        hi.sqrt_round(Round::Up);
        Ball { heuristic: self.heuristic, ..Ball::from_endpoints(&lo, &hi, p) }
    }

    /// Natural logarithm; indeterminate unless the ball is strictly positive.
    pub fn ln(&self) -> Ball {
        if let Some(b) = self.guard() {
            return b;
        }
        if !self.lower().is_sign_positive() || self.lower().is_zero() {
            return Ball { heuristic: self.heuristic, ..Ball::indeterminate(self.prec()) };
        }
        self.monotone(true, |x, r| x.ln_round(r))
    }

    pub fn exp(&self) -> Ball {
        if let Some(b) = self.guard() {
            return b;
        }
        self.monotone(true, |x, r| x.exp_round(r))
    }

    /// Real cube root, defined on the whole line.
    pub fn cbrt(&self) -> Ball {
        if let Some(b) = self.guard() {
            return b;
        }
        self.monotone(true, |x, r| x.cbrt_round(r))
    }

    pub fn atan(&self) -> Ball {
        if let Some(b) = self.guard() {
            return b;
        }
        self.monotone(true, |x, r| x.atan_round(r))
    }

    /// Sine and cosine, each with Lipschitz constant 1.
    pub fn sin_cos(&self) -> (Ball, Ball) {
        if let Some(b) = self.guard() {
            return (b.clone(), b);
        }
        let p = self.prec();
        let mut s = self.mid.clone();
        let mut c = Float::new(p);
        let (os, oc) = s.sin_cos_round(&mut c, Round::Nearest);
        let es = up(&self.rad + &rounding_error(&s, os));
        let ec = up(&self.rad + &rounding_error(&c, oc));
        (
            Ball { mid: s, rad: es, heuristic: self.heuristic },
            Ball { mid: c, rad: ec, heuristic: self.heuristic },
        )
    }

    /// Midpoint as a decimal string with enough digits for the working precision.
    pub fn mid_string(&self) -> String {
        let digits = (self.prec() as f64 * std::f64::consts::LOG10_2).ceil() as usize + 1;
        decimal(&self.mid, digits)
    }

    pub fn rad_string(&self) -> String {
        decimal(&self.rad, 6)
    }

    /// Radius as a double, rounded up so it remains a valid bound.
    pub fn rad_f64_upper(&self) -> f64 {
        self.rad.to_f64_round(Round::Up)
    }
}

/// Upper bound for `|x − y|` at radius precision.
fn abs_diff_upper(x: &Float, y: &Float) -> Float {
    let p = x.prec().max(y.prec()) + 8;
    let hi = Float::with_val_round(p, x - y, Round::Up).0;
    let lo = Float::with_val_round(p, x - y, Round::Down).0;
    let d = if *hi.as_abs() > *lo.as_abs() { hi } else { lo };
    up(&*d.as_abs())
}

fn decimal(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    if !x.is_finite() {
        return if x.is_nan() { "nan".to_string() } else if x.is_sign_negative() { "-inf".to_string() } else { "inf".to_string() };
    }
    x.to_string_radix(10, Some(digits))
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} +/- {}]", self.mid_string(), self.rad_string())
    }
}

impl Serialize for Ball {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            mid: String,
            rad: String,
            bits: u32,
            heuristic: bool,
        }
        Repr { mid: self.mid_string(), rad: self.rad_string(), bits: self.prec(), heuristic: self.heuristic }
            .serialize(serializer)
    }
}

macro_rules! ball_ops {
    ($($tr:ident $method:ident $inner:ident;)*) => {$(
        impl $tr<&Ball> for &Ball {
            type Output = Ball;
            fn $method(self, rhs: &Ball) -> Ball {
                self.$inner(rhs)
            }
        }
        impl $tr<Ball> for Ball {
            type Output = Ball;
            fn $method(self, rhs: Ball) -> Ball {
                self.$inner(&rhs)
            }
        }
        impl $tr<&Ball> for Ball {
            type Output = Ball;
            fn $method(self, rhs: &Ball) -> Ball {
                self.$inner(rhs)
            }
        }
    )*};
}

ball_ops! {
    Add add add_ball;
    Sub sub sub_ball;
    Mul mul mul_ball;
    Div div div_ball;
}

impl Neg for &Ball {
    type Output = Ball;
    fn neg(self) -> Ball {
        self.neg_ball()
    }
}

impl Neg for Ball {
    type Output = Ball;
    fn neg(self) -> Ball {
        self.neg_ball()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q;
    use proptest::prelude::*;

    fn reference(v: f64) -> Float {
        Float::with_val(53, v)
    }

    #[test]
    fn rational_enclosure() {
        let b = Ball::from_rational(&q(1, 3), 64);
        let third = Float::with_val(512, rug::Rational::from((1, 3)));
        assert!(b.contains_float(&third));
        assert!(!b.is_exact());
        assert!(Ball::from_rational(&q(3, 4), 64).is_exact());
    }

    #[test]
    fn ln2_enclosure() {
        for prec in [64, 128, 256] {
            let two = Ball::from_i64(2, prec);
            let l = two.ln();
            let oracle = Float::with_val(prec + 200, Constant::Log2);
            assert!(l.contains_float(&oracle), "{l}");
            assert!(l.rad() < &Float::with_val(53, 2f64.powi(-(prec as i32) + 4)));
        }
    }

    #[test]
    fn undefined_operations_are_indeterminate() {
        let around_zero = Ball::new(Float::with_val(64, 0.1), &reference(0.5));
        assert!(!around_zero.recip().is_finite());
        assert!(!around_zero.ln().is_finite());
        assert!(!Ball::from_i64(-4, 64).sqrt().is_finite());
        assert!(Ball::zero(64).sqrt().contains_float(&Float::new(64)));
    }

    #[test]
    fn trig_identity() {
        let x = Ball::from_rational(&q(7, 5), 128);
        let (s, c) = x.sin_cos();
        let one = s.sqr() + c.sqr();
        assert!(one.contains_float(&Float::with_val(128, 1)));
    }

    #[test]
    fn cube_root_of_negative() {
        let r = Ball::from_rational(&q(-1, 8), 64).cbrt();
        assert!(r.contains_float(&Float::with_val(64, -0.5)));
    }

    #[test]
    fn serialization_shape() {
        let v = serde_json::to_value(Ball::from_i64(2, 64)).unwrap();
        assert_eq!(v["bits"], 64);
        assert_eq!(v["heuristic"], false);
        assert_eq!(v["rad"], "0");
    }

    fn arb_ball() -> impl Strategy<Value = (f64, f64)> {
        (-50.0f64..50.0, 0.0f64..0.5)
    }

    proptest! {
        #[test]
        fn binary_ops_enclose_samples((m1, r1) in arb_ball(), (m2, r2) in arb_ball(), u in -1.0f64..1.0, v in -1.0f64..1.0) {
            let a = Ball::new(Float::with_val(64, m1), &reference(r1));
            let b = Ball::new(Float::with_val(64, m2), &reference(r2));
            let x = Float::with_val(300, m1) + Float::with_val(300, u * r1);
            let y = Float::with_val(300, m2) + Float::with_val(300, v * r2);
            prop_assert!((&a + &b).contains_float(&Float::with_val(300, &x + &y)));
            prop_assert!((&a - &b).contains_float(&Float::with_val(300, &x - &y)));
            prop_assert!((&a * &b).contains_float(&Float::with_val(300, &x * &y)));
            let q = &a / &b;
            if q.is_finite() {
                prop_assert!(q.contains_float(&Float::with_val(300, &x / &y)));
            }
            let e = (&a * &Ball::from_rational(&Rational::new(1, 10), 64)).exp();
            prop_assert!(e.contains_float(&Float::with_val(300, &x / 10u32).exp()));
        }

        #[test]
        fn unary_ops_enclose_samples(m in 0.6f64..40.0, r in 0.0f64..0.5, u in -1.0f64..1.0) {
            let a = Ball::new(Float::with_val(80, m), &reference(r));
            let x = Float::with_val(300, m) + Float::with_val(300, u * r);
            prop_assert!(a.ln().contains_float(&Float::with_val(300, x.ln_ref())));
            prop_assert!(a.sqrt().contains_float(&Float::with_val(300, x.sqrt_ref())));
            prop_assert!(a.cbrt().contains_float(&Float::with_val(300, x.cbrt_ref())));
            prop_assert!(a.atan().contains_float(&Float::with_val(300, x.atan_ref())));
            prop_assert!(a.recip().contains_float(&Float::with_val(300, x.recip_ref())));
            let (s, c) = a.sin_cos();
            prop_assert!(s.contains_float(&Float::with_val(300, x.sin_ref())));
            prop_assert!(c.contains_float(&Float::with_val(300, x.cos_ref())));
        }

        #[test]
        fn round_to_keeps_enclosure(num in -1000i64..1000, den in 1i64..1000) {
            let r = Rational::new(num, den);
            let exact = Float::with_val(400, r.as_rug());
            let b = Ball::from_rational(&r, 200).round_to(24);
            prop_assert!(b.contains_float(&exact));
        }
    }
}
