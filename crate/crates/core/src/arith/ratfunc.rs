use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::poly::Poly;
use super::rational::Rational;

/// A reduced quotient of polynomials in one indeterminate over Q.
///
/// The denominator is monic and coprime to the numerator, so structural equality is
/// equality of functions.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    /// Panics if `den` is the zero polynomial.
    pub fn new(num: Poly, den: Poly) -> RationalFunction {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return RationalFunction::zero();
        }
        let g = Poly::gcd(&num, &den);
        let (num, den) = if g.is_constant() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        let lc = den.leading();
        if lc.is_one() {
            RationalFunction { num, den }
        } else {
            let inv = lc.recip();
            RationalFunction {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn zero() -> RationalFunction {
        RationalFunction {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> RationalFunction {
        RationalFunction::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> RationalFunction {
        RationalFunction {
            num: Poly::constant(c),
            den: Poly::one(),
        }
    }

    /// The indeterminate.
    pub fn var() -> RationalFunction {
        RationalFunction::from_poly(Poly::x())
    }

    pub fn from_poly(p: Poly) -> RationalFunction {
        RationalFunction {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    /// The constant value, if this function is constant.
    pub fn as_constant(&self) -> Option<Rational> {
        self.is_constant().then(|| self.num.coeff(0))
    }

    pub fn scale(&self, c: &Rational) -> RationalFunction {
        if c.is_zero() {
            return RationalFunction::zero();
        }
        RationalFunction {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    /// Panics on the zero function.
    pub fn recip(&self) -> RationalFunction {
        assert!(!self.is_zero(), "reciprocal of the zero rational function");
        RationalFunction::new(self.den.clone(), self.num.clone())
    }

    /// Value at a point, `None` at a pole.
    pub fn eval(&self, x: &Rational) -> Option<Rational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(x) / d)
        }
    }

    pub fn derivative(&self) -> RationalFunction {
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        RationalFunction::new(n, &self.den * &self.den)
    }

    pub fn pow(&self, n: u32) -> RationalFunction {
        RationalFunction {
            num: self.num.pow(n),
            den: self.den.pow(n),
        }
    }

    /// Order of the pole at `point` (0 when the function is regular there).
    pub fn pole_order(&self, point: &Rational) -> usize {
        self.den.root_multiplicity(point)
    }

    /// Coefficient of `(x − point)^{-1}` provided the pole there is at most simple.
    ///
    /// Returns `None` for a pole of order two or more.
    pub fn simple_residue(&self, point: &Rational) -> Option<Rational> {
        let (rest, k) = self.den.split_root(point);
        match k {
            0 => Some(Rational::zero()),
            1 => Some(self.num.eval(point) / rest.eval(point)),
            _ => None,
        }
    }

    pub fn display_in(&self, var: &str) -> String {
        if self.den.is_constant() {
            return self.num.display_in(var);
        }
        format!("({})/({})", self.num.display_in(var), self.den.display_in(var))
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_in("x"))
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_in("x"))
    }
}

impl From<Rational> for RationalFunction {
    fn from(c: Rational) -> RationalFunction {
        RationalFunction::constant(c)
    }
}

impl From<Poly> for RationalFunction {
    fn from(p: Poly) -> RationalFunction {
        RationalFunction::from_poly(p)
    }
}

impl Add<&RationalFunction> for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RationalFunction::new(&self.num + &rhs.num, self.den.clone());
        }
        let n = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RationalFunction::new(n, &self.den * &rhs.den)
    }
}

impl Sub<&RationalFunction> for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl Mul<&RationalFunction> for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero();
        }
        // Cross-cancel first so the products stay small.
        let g1 = Poly::gcd(&self.num, &rhs.den);
        let g2 = Poly::gcd(&rhs.num, &self.den);
        let cancel = |p: &Poly, g: &Poly| {
            if g.is_constant() {
                p.clone()
            } else {
                p.div_exact(g).expect("gcd divides")
            }
        };
        let num = &cancel(&self.num, &g1) * &cancel(&rhs.num, &g2);
        let den = &cancel(&self.den, &g2) * &cancel(&rhs.den, &g1);
        let lc = den.leading();
        let inv = lc.recip();
        RationalFunction {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }
}

impl Div<&RationalFunction> for &RationalFunction {
    type Output = RationalFunction;
    fn div(self, rhs: &RationalFunction) -> RationalFunction {
        self * &rhs.recip()
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<RationalFunction> for RationalFunction {
            type Output = RationalFunction;
            fn $m(self, rhs: RationalFunction) -> RationalFunction {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&RationalFunction> for RationalFunction {
            type Output = RationalFunction;
            fn $m(self, rhs: &RationalFunction) -> RationalFunction {
                (&self).$m(rhs)
            }
        }
        impl $tr<RationalFunction> for &RationalFunction {
            type Output = RationalFunction;
            fn $m(self, rhs: RationalFunction) -> RationalFunction {
                self.$m(&rhs)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul, Div div);

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        -&self
    }
}
