//! Dense univariate polynomials with exact rational coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::rational::Rational;

/// Coefficients stored lowest degree first with no trailing zeros; the zero
/// polynomial is the empty vector.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Poly {
        Poly::from_coeffs(vec![c])
    }

    /// The indeterminate itself.
    pub fn x() -> Poly {
        Poly::from_coeffs(vec![Rational::zero(), Rational::one()])
    }

    /// `c0 + c1 x`, used for linear factors like `1 − λ`.
    pub fn linear(c0: Rational, c1: Rational) -> Poly {
        Poly::from_coeffs(vec![c0, c1])
    }

    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Poly {
        while coeffs.last().is_some_and(Rational::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Divides by the leading coefficient. Zero stays zero.
    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let lc = self.leading();
        if lc.is_one() {
            return self.clone();
        }
        self.scale(&lc.recip())
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        Poly::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from(i))
                .collect(),
        )
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Euclidean division: `self = q·d + r` with `deg r < deg d`. Panics when `d` is zero.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let inv_lc = d.leading().recip();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &inv_lc;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    let t = &c * dc;
                    rem[k + j] -= t;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Poly::from_coeffs(quot), Poly::from_coeffs(rem))
    }

    /// Exact quotient when `d` divides `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    /// Divides by `(x − root)` if it is a factor (synthetic division).
    fn deflate(&self, root: &Rational) -> Option<Poly> {
        let n = self.coeffs.len();
        if n < 2 {
            return None;
        }
        let mut out = vec![Rational::zero(); n - 1];
        let mut carry = Rational::zero();
        for i in (1..n).rev() {
            carry = &carry * root + &self.coeffs[i];
            out[i - 1] = carry.clone();
        }
        let rem = carry * root + &self.coeffs[0];
        rem.is_zero().then(|| Poly::from_coeffs(out))
    }

    /// Multiplicity of `root` as a zero of the polynomial (0 for the zero polynomial).
    pub fn root_multiplicity(&self, root: &Rational) -> usize {
        let mut p = self.clone();
        let mut k = 0;
        while let Some(next) = p.deflate(root) {
            p = next;
            k += 1;
        }
        k
    }

    /// Strips `(x − root)^m` and returns the cofactor together with `m`.
    pub fn split_root(&self, root: &Rational) -> (Poly, usize) {
        let mut p = self.clone();
        let mut k = 0;
        while let Some(next) = p.deflate(root) {
            p = next;
            k += 1;
        }
        (p, k)
    }

    /// Monic greatest common divisor. `gcd(0, 0) = 0`.
    ///
    /// Common factors at 0 and ±1 are removed by synthetic division first, then a
    /// modular test detects coprime cofactors before falling back to Euclid over Q.
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() {
            return b.monic();
        }
        if b.is_zero() {
            return a.monic();
        }
        if a.is_constant() || b.is_constant() {
            return Poly::one();
        }
        let mut common = Poly::one();
        let mut a = a.clone();
        let mut b = b.clone();
        for root in [Rational::zero(), Rational::one(), Rational::from(-1)] {
            let (ca, ka) = a.split_root(&root);
            let (cb, kb) = b.split_root(&root);
            let k = ka.min(kb);
            if k > 0 {
                let factor = Poly::linear(-root.clone(), Rational::one()).pow(k as u32);
                common = &common * &factor;
            }
            // Leftover powers on one side cannot divide the other cofactor.
            a = ca;
            b = cb;
        }
        if a.is_constant() || b.is_constant() || modular::certainly_coprime(&a, &b) {
            return common;
        }
        &common * &Poly::euclid(a, b)
    }

    fn euclid(mut a: Poly, mut b: Poly) -> Poly {
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        a = a.monic();
        b = b.monic();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a
    }

    /// Human-readable form in the given variable name, highest degree first.
    pub fn display_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            if i == 0 {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&mono);
            } else if mag.is_integer() {
                out.push_str(&format!("{mag}*{mono}"));
            } else {
                out.push_str(&format!("({mag})*{mono}"));
            }
        }
        out
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_in("x"))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_in("x"))
    }
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::from_coeffs((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::from_coeffs((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::from_coeffs(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

mod modular {
    use super::Poly;

    // Primes just below 2^62.
    const PRIMES: [u64; 3] = [4611686018427387847, 4611686018427387817, 4611686018427387787];

    fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
        ((a as u128 * b as u128) % p as u128) as u64
    }

    fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = mul_mod(r, a, p);
            }
            a = mul_mod(a, a, p);
            e >>= 1;
        }
        r
    }

    fn inv_mod(a: u64, p: u64) -> u64 {
        pow_mod(a, p - 2, p)
    }

    fn reduce(poly: &Poly, p: u64) -> Option<Vec<u64>> {
        let mut out = Vec::with_capacity(poly.coeffs.len());
        for c in &poly.coeffs {
            let den = rug::Integer::from(c.denom() % p);
            let num = rug::Integer::from(c.numer() % p);
            let den = den.to_u64()?;
            if den == 0 {
                return None;
            }
            let num = if num < 0 { num + p } else { num };
            let num = num.to_u64()?;
            out.push(mul_mod(num, inv_mod(den, p), p));
        }
        Some(out)
    }

    fn trim(v: &mut Vec<u64>) {
        while v.last() == Some(&0) {
            v.pop();
        }
    }

    fn gcd_degree(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> usize {
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            let inv = inv_mod(*b.last().unwrap(), p);
            while a.len() >= b.len() {
                let shift = a.len() - b.len();
                let c = mul_mod(*a.last().unwrap(), inv, p);
                for (j, &bj) in b.iter().enumerate() {
                    let t = mul_mod(c, bj, p);
                    a[shift + j] = (a[shift + j] + p - t) % p;
                }
                trim(&mut a);
                if a.is_empty() {
                    break;
                }
            }
            std::mem::swap(&mut a, &mut b);
        }
        a.len().saturating_sub(1)
    }

    /// True only when a prime with good reduction shows the gcd is constant.
    pub(super) fn certainly_coprime(a: &Poly, b: &Poly) -> bool {
        for &p in &PRIMES {
            let (Some(ra), Some(rb)) = (reduce(a, p), reduce(b, p)) else {
                continue;
            };
            // Leading coefficients must survive reduction for the degree bound to hold.
            if ra.last() == Some(&0) || rb.last() == Some(&0) {
                continue;
            }
            return gcd_degree(ra, rb, p) == 0;
        }
        false
    }
}
