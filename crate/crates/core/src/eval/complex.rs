use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::Float;
use serde::Serialize;

use super::ball::{up, Ball};
use super::EvalError;
use crate::arith::Rational;

/// Rectangular complex ball: a pair of real balls.
#[derive(Clone, Debug, Serialize)]
pub struct ComplexBall {
    pub re: Ball,
    pub im: Ball,
}

impl ComplexBall {
    pub fn new(re: Ball, im: Ball) -> ComplexBall {
        ComplexBall { re, im }
    }

    pub fn real(re: Ball) -> ComplexBall {
        let p = re.prec();
        ComplexBall { re, im: Ball::zero(p) }
    }

    pub fn from_rationals(re: &Rational, im: &Rational, prec: u32) -> ComplexBall {
        ComplexBall { re: Ball::from_rational(re, prec), im: Ball::from_rational(im, prec) }
    }

    pub fn zero(prec: u32) -> ComplexBall {
        ComplexBall::real(Ball::zero(prec))
    }

    pub fn one(prec: u32) -> ComplexBall {
        ComplexBall::real(Ball::one(prec))
    }

    /// `e^{iθ}` for a real ball `θ`.
    pub fn expi(theta: &Ball) -> ComplexBall {
        let (s, c) = theta.sin_cos();
        ComplexBall { re: c, im: s }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn is_heuristic(&self) -> bool {
        self.re.is_heuristic() || self.im.is_heuristic()
    }

    pub fn is_real_exactly(&self) -> bool {
        self.im.is_exact_zero()
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    /// Larger of the two component radii.
    pub fn rad_max(&self) -> Float {
        let (a, b) = (self.re.rad(), self.im.rad());
        if a > b {
            a.clone()
        } else {
            b.clone()
        }
    }

    /// Upper bound for `|z|`.
    pub fn abs_upper(&self) -> Float {
        let a = self.re.abs_upper();
        let b = self.im.abs_upper();
        let mut s = up(&up(a.square_ref()) + &up(b.square_ref()));
        s.sqrt_round(rug::float::Round::Up);
        s
    }

    pub fn conj(&self) -> ComplexBall {
        ComplexBall { re: self.re.clone(), im: -&self.im }
    }

    pub fn scale(&self, k: &Ball) -> ComplexBall {
        ComplexBall { re: &self.re * k, im: &self.im * k }
    }

    pub fn mul_rational(&self, r: &Rational) -> ComplexBall {
        self.scale(&Ball::from_rational(r, self.prec()))
    }

    pub fn add_complex(&self, o: &ComplexBall) -> ComplexBall {
        ComplexBall { re: &self.re + &o.re, im: &self.im + &o.im }
    }

    pub fn sub_complex(&self, o: &ComplexBall) -> ComplexBall {
        ComplexBall { re: &self.re - &o.re, im: &self.im - &o.im }
    }

    pub fn mul_complex(&self, o: &ComplexBall) -> ComplexBall {
        if o.is_real_exactly() {
            return self.scale(&o.re);
        }
        if self.is_real_exactly() {
            return o.scale(&self.re);
        }
        ComplexBall {
            re: &(&self.re * &o.re) - &(&self.im * &o.im),
            im: &(&self.re * &o.im) + &(&self.im * &o.re),
        }
    }

    /// `|z|²` as a real ball.
    pub fn norm_sqr(&self) -> Ball {
        self.re.sqr() + self.im.sqr()
    }

    pub fn recip(&self) -> ComplexBall {
        if self.is_real_exactly() {
            return ComplexBall::real(self.re.recip());
        }
        let n = self.norm_sqr().recip();
        self.conj().scale(&n)
    }

    pub fn div_complex(&self, o: &ComplexBall) -> ComplexBall {
        if o.is_real_exactly() {
            return ComplexBall { re: &self.re / &o.re, im: &self.im / &o.re };
        }
        self.mul_complex(&o.recip())
    }

    pub fn exp(&self) -> ComplexBall {
        let r = self.re.exp();
        if self.im.is_exact_zero() {
            return ComplexBall::real(r);
        }
        ComplexBall::expi(&self.im).scale(&r)
    }

    /// Principal argument in `(−π, π]`.
    ///
    /// Fails with [`EvalError::BranchCut`] when the box meets the closed negative real axis,
    /// except for exactly real negative input whose argument is `π`.
    pub fn arg(&self) -> Result<Ball, EvalError> {
        let p = self.prec();
        let pi = Ball::pi(p);
        let positive = |b: &Ball| b.lower().is_sign_positive() && !b.lower().is_zero();
        let negative = |b: &Ball| b.upper().is_sign_negative() && !b.upper().is_zero();
        if positive(&self.re) {
            if self.im.is_exact_zero() {
                return Ok(Ball::zero(p));
            }
            return Ok((&self.im / &self.re).atan());
        }
        if positive(&self.im) {
            return Ok(pi.mul_2exp(-1) - (&self.re / &self.im).atan());
        }
        if negative(&self.im) {
            return Ok(-pi.mul_2exp(-1) - (&self.re / &self.im).atan());
        }
        if self.im.is_exact_zero() && negative(&self.re) {
            return Ok(pi);
        }
        Err(EvalError::BranchCut(format!("argument of {self} is not continuous on the ball")))
    }

    /// Principal logarithm `ln|z| + i·arg z`.
    pub fn ln(&self) -> Result<ComplexBall, EvalError> {
        let im = self.arg()?;
        let re = if self.im.is_exact_zero() {
            let a = if self.re.lower().is_sign_negative() { -&self.re } else { self.re.clone() };
            a.ln()
        } else {
            self.norm_sqr().ln().mul_2exp(-1)
        };
        if !re.is_finite() {
            return Err(EvalError::BranchCut(format!("logarithm of {self}, which may vanish")));
        }
        Ok(ComplexBall { re, im })
    }
}

impl fmt::Display for ComplexBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}i", self.re, self.im)
    }
}

macro_rules! complex_ops {
    ($($tr:ident $method:ident $inner:ident;)*) => {$(
        impl $tr<&ComplexBall> for &ComplexBall {
            type Output = ComplexBall;
            fn $method(self, rhs: &ComplexBall) -> ComplexBall {
                self.$inner(rhs)
            }
        }
        impl $tr<ComplexBall> for ComplexBall {
            type Output = ComplexBall;
            fn $method(self, rhs: ComplexBall) -> ComplexBall {
                self.$inner(&rhs)
            }
        }
    )*};
}

complex_ops! {
    Add add add_complex;
    Sub sub sub_complex;
    Mul mul mul_complex;
    Div div div_complex;
}

impl Neg for &ComplexBall {
    type Output = ComplexBall;
    fn neg(self) -> ComplexBall {
        ComplexBall { re: -&self.re, im: -&self.im }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q;
    use rug::float::Constant;

    #[test]
    fn log_of_i() {
        let i = ComplexBall::from_rationals(&q(0, 1), &q(1, 1), 128);
        let l = i.ln().unwrap();
        assert!(l.re.contains_zero());
        let half_pi = Float::with_val(256, Constant::Pi) / 2u32;
        assert!(l.im.contains_float(&half_pi));
    }

    #[test]
    fn negative_axis() {
        let z = ComplexBall::from_rationals(&q(-2, 1), &q(0, 1), 128);
        let l = z.ln().unwrap();
        assert!(l.im.contains_float(&Float::with_val(256, Constant::Pi)));
        let straddle = ComplexBall::new(Ball::from_i64(-2, 64), Ball::from_rational(&q(1, 3), 64));
        assert!(straddle.ln().is_ok());
        let fuzzy = ComplexBall::new(Ball::from_i64(-2, 64), Ball::from_rational(&q(1, 3), 64).sub_ball(&Ball::from_rational(&q(1, 3), 64)));
        assert!(matches!(fuzzy.ln(), Err(EvalError::BranchCut(_))));
    }

    #[test]
    fn exp_log_roundtrip() {
        let z = ComplexBall::from_rationals(&q(-3, 7), &q(5, 4), 160);
        let back = z.ln().unwrap().exp();
        let d = &back - &z;
        assert!(d.re.contains_zero() && d.im.contains_zero());
        assert!(d.rad_max() < Float::with_val(53, 1e-40));
    }

    #[test]
    fn division() {
        let a = ComplexBall::from_rationals(&q(1, 2), &q(3, 1), 128);
        let b = ComplexBall::from_rationals(&q(-2, 3), &q(1, 5), 128);
        let d = &(&a / &b) * &b - a;
        assert!(d.re.contains_zero() && d.im.contains_zero());
    }
}
