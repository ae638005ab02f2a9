use std::cmp::Ordering;
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use rug::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::ArithError;

/// An exact rational number in lowest terms with a positive denominator.
///
/// Prints as `p/q`, or `p` when the denominator is one.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(rug::Rational);

impl Rational {
    /// Builds `num/den`. Panics if `den` is zero.
    pub fn new(num: impl Into<Integer>, den: impl Into<Integer>) -> Rational {
        let den = den.into();
        assert!(den != 0, "zero denominator");
        Rational(rug::Rational::from((num.into(), den)))
    }

    pub fn from_int(n: impl Into<Integer>) -> Rational {
        Rational(rug::Rational::from(n.into()))
    }

    pub fn zero() -> Rational {
        Rational::default()
    }

    pub fn one() -> Rational {
        Rational::from_int(1)
    }

    pub fn numer(&self) -> &Integer {
        self.0.numer()
    }

    pub fn denom(&self) -> &Integer {
        self.0.denom()
    }

    pub fn as_rug(&self) -> &rug::Rational {
        &self.0
    }

    pub fn into_rug(self) -> rug::Rational {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.cmp0() == Ordering::Equal
    }

    pub fn is_one(&self) -> bool {
        *self.0.numer() == 1 && *self.0.denom() == 1
    }

    pub fn is_integer(&self) -> bool {
        *self.0.denom() == 1
    }

    pub fn is_negative(&self) -> bool {
        self.0.cmp0() == Ordering::Less
    }

    pub fn is_positive(&self) -> bool {
        self.0.cmp0() == Ordering::Greater
    }

    pub fn signum(&self) -> Ordering {
        self.0.cmp0()
    }

    pub fn abs(&self) -> Rational {
        Rational(self.0.clone().abs())
    }

    /// Largest integer not exceeding `self`.
    pub fn floor(&self) -> Integer {
        let f = self.0.clone().floor();
        f.numer().clone()
    }

    /// Fractional part `self − ⌊self⌋`, always in `[0, 1)`.
    pub fn frac(&self) -> Rational {
        let fl = Rational::from_int(self.floor());
        self - &fl
    }

    /// Panics on zero.
    pub fn recip(&self) -> Rational {
        assert!(!self.is_zero(), "reciprocal of zero");
        Rational(self.0.clone().recip())
    }

    pub fn pow(&self, n: u32) -> Rational {
        let mut acc = Rational::one();
        for _ in 0..n {
            acc *= self;
        }
        acc
    }

    /// Integer exponent; negative exponents invert first (panics on zero).
    pub fn powi(&self, n: i64) -> Rational {
        if n >= 0 {
            self.pow(n as u32)
        } else {
            self.recip().pow(n.unsigned_abs() as u32)
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    /// Returns `Some(n)` when the value is an integer fitting in `i64`.
    pub fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.numer().to_i64()
        } else {
            None
        }
    }

    /// Exact square root when both numerator and denominator are perfect squares.
    pub fn sqrt_exact(&self) -> Option<Rational> {
        if self.is_negative() {
            return None;
        }
        let n = self.numer();
        let d = self.denom();
        if n.is_perfect_square() && d.is_perfect_square() {
            Some(Rational::new(n.clone().sqrt(), d.clone().sqrt()))
        } else {
            None
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_integer(s: &str, whole: &str) -> Result<Integer, ArithError> {
    let body = s.strip_prefix(['-', '+']).unwrap_or(s);
    if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
        return Err(ArithError::Parse(whole.to_string()));
    }
    Integer::from_str_radix(s, 10).map_err(|_| ArithError::Parse(whole.to_string()))
}

impl FromStr for Rational {
    type Err = ArithError;

    /// Accepts `p` or `p/q` with ASCII digits and an optional sign on `p`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.split_once('/') {
            None => Ok(Rational::from_int(parse_integer(s, s)?)),
            Some((p, q)) => {
                let num = parse_integer(p, s)?;
                if q.starts_with(['-', '+']) {
                    return Err(ArithError::Parse(s.to_string()));
                }
                let den = parse_integer(q, s)?;
                if den == 0 {
                    return Err(ArithError::ZeroDenominator(s.to_string()));
                }
                Ok(Rational::new(num, den))
            }
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! from_prim {
    ($($t:ty),*) => {$(
        impl From<$t> for Rational {
            fn from(v: $t) -> Rational {
                Rational::from_int(v)
            }
        }
    )*};
}
from_prim!(i32, i64, u32, u64, usize);

impl From<Integer> for Rational {
    fn from(v: Integer) -> Rational {
        Rational::from_int(v)
    }
}

impl From<rug::Rational> for Rational {
    fn from(v: rug::Rational) -> Rational {
        Rational(v)
    }
}

impl From<(i64, i64)> for Rational {
    fn from((n, d): (i64, i64)) -> Rational {
        Rational::new(n, d)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $asg:ident, $am:ident) => {
        impl $tr<&Rational> for &Rational {
            type Output = Rational;
            fn $m(self, rhs: &Rational) -> Rational {
                Rational(rug::Rational::from((&self.0).$m(&rhs.0)))
            }
        }
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $m(mut self, rhs: Rational) -> Rational {
                self.0.$am(rhs.0);
                self
            }
        }
        impl $tr<&Rational> for Rational {
            type Output = Rational;
            fn $m(mut self, rhs: &Rational) -> Rational {
                self.0.$am(&rhs.0);
                self
            }
        }
        impl $tr<Rational> for &Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational {
                self.$m(&rhs)
            }
        }
        impl $asg<&Rational> for Rational {
            fn $am(&mut self, rhs: &Rational) {
                self.0.$am(&rhs.0);
            }
        }
        impl $asg<Rational> for Rational {
            fn $am(&mut self, rhs: Rational) {
                self.0.$am(rhs.0);
            }
        }
    };
}
binop!(Add, add, AddAssign, add_assign);
binop!(Sub, sub, SubAssign, sub_assign);
binop!(Mul, mul, MulAssign, mul_assign);

impl Div<&Rational> for &Rational {
    type Output = Rational;
    fn div(self, rhs: &Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero");
        Rational(rug::Rational::from(&self.0 / &rhs.0))
    }
}

impl Div<Rational> for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        &self / &rhs
    }
}

impl Div<&Rational> for Rational {
    type Output = Rational;
    fn div(self, rhs: &Rational) -> Rational {
        &self / rhs
    }
}

impl Div<Rational> for &Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        self / &rhs
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(rug::Rational::from(-&self.0))
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl Product for Rational {
    fn product<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::one(), |acc, x| acc * x)
    }
}

impl<'a> Product<&'a Rational> for Rational {
    fn product<I: Iterator<Item = &'a Rational>>(iter: I) -> Rational {
        iter.fold(Rational::one(), |acc, x| acc * x)
    }
}

/// Shorthand for `Rational::new(n, d)` with machine integers.
pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

/// Fractional part `{r} = r − ⌊r⌋`.
pub fn frac(r: &Rational) -> Rational {
    r.frac()
}

/// Rising factorial `(alpha)_n = alpha (alpha+1) ... (alpha+n-1)`, with `(alpha)_0 = 1`.
pub fn pochhammer(alpha: &Rational, n: u32) -> Rational {
    let mut acc = Rational::one();
    let mut term = alpha.clone();
    let one = Rational::one();
    for _ in 0..n {
        if term.is_zero() {
            return Rational::zero();
        }
        acc *= &term;
        term += &one;
    }
    acc
}

/// Least common multiple of the denominators; 1 for an empty slice.
pub fn lcm_denominators<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Integer {
    values
        .into_iter()
        .fold(Integer::from(1), |acc, r| acc.lcm(r.denom()))
}
