//! The `C_i, D_i, E^(r)` recursion in the variable `λ` and the determinant that must not vanish.
//!
//! With `a = 2−β₁`, `b = 2−β₂` and
//!
//! ```text
//! A(s) = s(a+b+2s−3 − s(1−λ)⁻¹) / ((a+s−1)(b+s−1))
//! B(s) = s(1−s)(1 − (1−λ)⁻¹) / ((a+s−1)(b+s−1))
//! ```
//!
//! the pairs satisfy `(C_{i+1}, D_{i+1})(s) = [[A(s), 1], [B(s), 0]]·(C_i, D_i)(s+1)` from the
//! seed `(C_{−1}, D_{−1}) = (0, 1)`. Unrolling gives
//! `(C_k, D_k)(s) = M(s)M(s+1)⋯M(s+k)·(0, 1)ᵀ`, so everything is computed along the chain
//! `s, s+1, …` without a symbolic `s`.
//!
//! Every `M(t)` equals `(1−λ)⁻¹ N(t)` with `N(t)` polynomial in `λ`. The chain is therefore
//! carried as polynomial matrices and the power of `1−λ` is restored only when a reduced
//! rational function is requested.

use serde::Serialize;
use thiserror::Error;

use crate::arith::{Poly, Rational, RationalFunction};
use crate::eval::{Ball, EvalError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RegulatorError {
    #[error("invalid recurrence parameters: {0}")]
    InvalidParams(String),
    #[error("A(s) or B(s) has a pole at s = {0}")]
    PoleAtShift(Rational),
    #[error("index {0} is out of range")]
    BadIndex(i64),
}

/// `mu = k/l` together with the exponents `β₁, β₂`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecurrenceParams {
    #[serde(serialize_with = "as_string")]
    pub mu: Rational,
    #[serde(serialize_with = "as_string")]
    pub beta1: Rational,
    #[serde(serialize_with = "as_string")]
    pub beta2: Rational,
}

fn as_string<T: std::fmt::Display, S: serde::Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

impl RecurrenceParams {
    /// Requires `mu`, `mu−β₁`, `mu−β₂`, `mu−β₁−β₂`, `β₁`, `β₂` all non-integral.
    pub fn new(mu: Rational, beta1: Rational, beta2: Rational) -> Result<RecurrenceParams, RegulatorError> {
        let checks = [
            (mu.clone(), "mu"),
            (&mu - &beta1, "mu − β₁"),
            (&mu - &beta2, "mu − β₂"),
            (&mu - &beta1 - &beta2, "mu − β₁ − β₂"),
            (beta1.clone(), "β₁"),
            (beta2.clone(), "β₂"),
        ];
        for (v, name) in checks {
            if v.is_integer() {
                return Err(RegulatorError::InvalidParams(format!("{name} = {v} is an integer")));
            }
        }
        Ok(RecurrenceParams { mu, beta1, beta2 })
    }

    pub fn a(&self) -> Rational {
        Rational::from(2) - &self.beta1
    }

    pub fn b(&self) -> Rational {
        Rational::from(2) - &self.beta2
    }
}

/// `(C_i, D_i)` at argument `s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CDPair {
    pub index: i64,
    pub s: Rational,
    pub c: RationalFunction,
    pub d: RationalFunction,
}

/// `E₁^(r) = λC_r + (1−λ)C_{r+1}` and `E₂^(r) = λD_r + (1−λ)D_{r+1}` at a fixed argument.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EPair {
    pub r: i64,
    pub e1: RationalFunction,
    pub e2: RationalFunction,
}

fn lambda() -> Poly {
    Poly::x()
}

fn one_minus_lambda() -> Poly {
    Poly::linear(Rational::one(), Rational::from(-1))
}

/// `(s+a−1)(s+b−1)`, or the pole error.
fn shift_denominator(p: &RecurrenceParams, s: &Rational) -> Result<Rational, RegulatorError> {
    let one = Rational::one();
    let den = (s + &p.a() - &one) * (s + &p.b() - &one);
    if den.is_zero() {
        return Err(RegulatorError::PoleAtShift(s.clone()));
    }
    Ok(den)
}

/// Polynomial numerators `Ã, B̃` with `A = Ã/(1−λ)` and `B = B̃/(1−λ)`.
fn ab_numerators(p: &RecurrenceParams, s: &Rational) -> Result<(Poly, Poly), RegulatorError> {
    let den = shift_denominator(p, s)?;
    let one = Rational::one();
    // s((a+b+2s−3)(1−λ) − s)
    let k = p.a() + p.b() + s * &Rational::from(2) - Rational::from(3);
    let a_num = Poly::linear(&k - s, -k.clone()).scale(&(s / &den));
    // s(1−s)((1−λ) − 1) = −s(1−s)λ
    let b_num = lambda().scale(&(-(s * &(&one - s)) / den));
    Ok((a_num, b_num))
}

/// `A(s)` and `B(s)` as reduced rational functions in `λ`.
pub fn ab_funcs(p: &RecurrenceParams, s: &Rational) -> Result<(RationalFunction, RationalFunction), RegulatorError> {
    let (a, b) = ab_numerators(p, s)?;
    Ok((RationalFunction::new(a, one_minus_lambda()), RationalFunction::new(b, one_minus_lambda())))
}

/// Columns `V_k = N(s)N(s+1)⋯N(s+k)·(0,1)ᵀ` for `k = −1, 0, …`, so `(C_k, D_k)(s) = V_k/(1−λ)^{k+1}`.
struct Chain {
    s: Rational,
    product: [[Poly; 2]; 2],
    columns: Vec<(Poly, Poly)>,
}

impl Chain {
    fn new(s: Rational) -> Chain {
        Chain {
            s,
            product: [[Poly::one(), Poly::zero()], [Poly::zero(), Poly::one()]],
            columns: vec![(Poly::zero(), Poly::one())],
        }
    }

    /// Highest index available.
    fn top(&self) -> i64 {
        self.columns.len() as i64 - 2
    }

    fn extend(&mut self, p: &RecurrenceParams) -> Result<(), RegulatorError> {
        let t = &self.s + &Rational::from(self.top() + 1);
        let (a, b) = ab_numerators(p, &t)?;
        let c = one_minus_lambda();
        let [[p00, p01], [p10, p11]] = &self.product;
        let next = [
            [&(p00 * &a) + &(p01 * &b), p00 * &c],
            [&(p10 * &a) + &(p11 * &b), p10 * &c],
        ];
        self.columns.push((next[0][1].clone(), next[1][1].clone()));
        self.product = next;
        Ok(())
    }

    fn ensure(&mut self, p: &RecurrenceParams, k: i64) -> Result<(), RegulatorError> {
        while self.top() < k {
            self.extend(p)?;
        }
        Ok(())
    }

    fn column(&self, k: i64) -> &(Poly, Poly) {
        &self.columns[(k + 1) as usize]
    }

    /// `Ẽ^(r) = λV_r + V_{r+1}`, with `E^(r) = Ẽ^(r)/(1−λ)^{r+1}`.
    fn e_numerators(&self, r: i64) -> (Poly, Poly) {
        let l = lambda();
        let (c0, d0) = self.column(r);
        let (c1, d1) = self.column(r + 1);
        (&(&l * c0) + c1, &(&l * d0) + d1)
    }

    /// Numerator of `det(E^(r); E^(r−1))` over `(1−λ)^{2r+1}`.
    fn det_numerator(&self, r: i64) -> Poly {
        let (e1, e2) = self.e_numerators(r);
        let (f1, f2) = self.e_numerators(r - 1);
        &(&e1 * &f2) - &(&e2 * &f1)
    }

    /// Whether [`Chain::det_numerator`] is the zero polynomial. A nonzero value at a probe
    /// point settles the question in linear time; only a zero value forces the full product.
    fn det_vanishes(&self, r: i64) -> bool {
        let x = Rational::from(DET_PROBE);
        let e_at = |k: i64| {
            let (c0, d0) = self.column(k);
            let (c1, d1) = self.column(k + 1);
            (&x * &c0.eval(&x) + c1.eval(&x), &x * &d0.eval(&x) + d1.eval(&x))
        };
        let (e1, e2) = e_at(r);
        let (f1, f2) = e_at(r - 1);
        if e1 * f2 != e2 * f1 {
            return false;
        }
        self.det_numerator(r).is_zero()
    }
}

/// Evaluation point for the fast nonvanishing test in the determinant scan.
const DET_PROBE: i64 = 2;

fn over_power(num: Poly, k: i64) -> RationalFunction {
    RationalFunction::new(num, one_minus_lambda().pow(k as u32))
}

fn check_index(r: i64, min: i64) -> Result<(), RegulatorError> {
    if r < min {
        return Err(RegulatorError::BadIndex(r));
    }
    Ok(())
}

/// `(C_r, D_r)` at an arbitrary argument `s`, for `r ≥ −1`.
pub fn cd_at(p: &RecurrenceParams, s: &Rational, r: i64) -> Result<CDPair, RegulatorError> {
    check_index(r, -1)?;
    let mut chain = Chain::new(s.clone());
    chain.ensure(p, r)?;
    let (c, d) = chain.column(r).clone();
    Ok(CDPair { index: r, s: s.clone(), c: over_power(c, r + 1), d: over_power(d, r + 1) })
}

/// `(C_r, D_r)(mu)`.
pub fn cd_sequence(p: &RecurrenceParams, r: i64) -> Result<CDPair, RegulatorError> {
    cd_at(p, &p.mu, r)
}

/// `E^(r)` at an arbitrary argument `s`, for `r ≥ −1`.
pub fn e_pair_at(p: &RecurrenceParams, s: &Rational, r: i64) -> Result<EPair, RegulatorError> {
    check_index(r, -1)?;
    let mut chain = Chain::new(s.clone());
    chain.ensure(p, r + 1)?;
    let (e1, e2) = chain.e_numerators(r);
    Ok(EPair { r, e1: over_power(e1, r + 1), e2: over_power(e2, r + 1) })
}

/// `E^(r)` at argument `mu`.
pub fn e_pair(p: &RecurrenceParams, r: i64) -> Result<EPair, RegulatorError> {
    e_pair_at(p, &p.mu, r)
}

/// `det(E^(r); E^(r−1)) = E₁^(r)E₂^(r−1) − E₂^(r)E₁^(r−1)` at argument `s`, for `r ≥ 0`.
pub fn e_det_at(p: &RecurrenceParams, s: &Rational, r: i64) -> Result<RationalFunction, RegulatorError> {
    check_index(r, 0)?;
    let mut chain = Chain::new(s.clone());
    chain.ensure(p, r + 1)?;
    Ok(over_power(chain.det_numerator(r), 2 * r + 1))
}

/// The determinant at argument `mu`.
pub fn e_det(p: &RecurrenceParams, r: i64) -> Result<RationalFunction, RegulatorError> {
    e_det_at(p, &p.mu, r)
}

/// Closed form of the `r = 0` determinant: `λ((a−1)(b−1)λ + s(a+b−2)) / ((s+a−1)(s+b−1))`.
pub fn det0_closed_form(p: &RecurrenceParams, s: &Rational) -> Result<RationalFunction, RegulatorError> {
    let den = shift_denominator(p, s)?;
    let one = Rational::one();
    let (a, b) = (p.a(), p.b());
    let inner = Poly::linear(s * &(&a + &b - Rational::from(2)), (&a - &one) * (&b - &one));
    Ok(RationalFunction::from_poly(&lambda() * &inner.scale(&den.recip())))
}

/// All `r` in `[0, rmax]` whose determinant vanishes identically, from one pass along the chain at `mu`.
pub fn det_scan(p: &RecurrenceParams, rmax: u64) -> Result<Vec<u64>, RegulatorError> {
    let mut chain = Chain::new(p.mu.clone());
    let mut failing = Vec::new();
    for r in 0..=rmax as i64 {
        chain.ensure(p, r + 1)?;
        if chain.det_vanishes(r) {
            failing.push(r as u64);
        }
    }
    Ok(failing)
}

/// Checks `[[E₁^(r+1), E₁^(r)], [E₂^(r+1), E₂^(r)]](s) = [[A(s), 1], [B(s), 0]]·(same block at r−1)(s+1)`
/// for `r ≥ 0`, as an exact equality of rational functions.
pub fn block_identity_holds(p: &RecurrenceParams, s: &Rational, r: i64) -> Result<bool, RegulatorError> {
    check_index(r, 0)?;
    let here_hi = e_pair_at(p, s, r + 1)?;
    let here_lo = e_pair_at(p, s, r)?;
    let next = s + &Rational::one();
    let there_hi = e_pair_at(p, &next, r)?;
    let there_lo = e_pair_at(p, &next, r - 1)?;
    let (a, b) = ab_funcs(p, s)?;
    let ok = here_hi.e1 == &(&a * &there_hi.e1) + &there_hi.e2
        && here_lo.e1 == &(&a * &there_lo.e1) + &there_lo.e2
        && here_hi.e2 == &b * &there_hi.e1
        && here_lo.e2 == &b * &there_lo.e1;
    Ok(ok)
}

/// `(C_k, D_k)(mu)` in ball arithmetic, from the seed at argument `mu+k+1` back down to `mu`.
fn numeric_cd(p: &RecurrenceParams, k: i64, inv: &Ball, prec: u32) -> Result<(Ball, Ball), EvalError> {
    let one = Ball::one(prec);
    let mut c = Ball::zero(prec);
    let mut d = Ball::one(prec);
    for j in (0..=k).rev() {
        let s = &p.mu + &Rational::from(j);
        let den = shift_denominator(p, &s).map_err(|e| EvalError::Precondition(e.to_string()))?;
        let sb = Ball::from_rational(&s, prec);
        let lin = Ball::from_rational(&(p.a() + p.b() + &s * &Rational::from(2) - Rational::from(3)), prec);
        let a = (&sb * &(&lin - &(&sb * inv))).mul_rational(&den.recip());
        let b = (&(&sb * &(&one - &sb)) * &(&one - inv)).mul_rational(&den.recip());
        let next_c = &(&a * &c) + &d;
        d = &b * &c;
        c = next_c;
    }
    Ok((c, d))
}

/// `E^(r)(mu)` at a rational `λ ≠ 1`, evaluated by running the recursion in ball arithmetic.
///
/// Independent of the exact path: no polynomial is formed, and `A`, `B` are evaluated
/// directly from their defining formulas.
pub fn e_pair_numeric(p: &RecurrenceParams, r: i64, lambda: &Rational, prec: u32) -> Result<(Ball, Ball), EvalError> {
    if r < -1 {
        return Err(EvalError::Precondition(format!("index {r} is below −1")));
    }
    let one = Rational::one();
    if *lambda == one {
        return Err(EvalError::DomainError("λ = 1 is a pole of A and B".into()));
    }
    let inv = Ball::from_rational(&(&one - lambda).recip(), prec);
    let (c0, d0) = numeric_cd(p, r, &inv, prec)?;
    let (c1, d1) = numeric_cd(p, r + 1, &inv, prec)?;
    let lam = Ball::from_rational(lambda, prec);
    let oml = &Ball::one(prec) - &lam;
    let e1 = &(&lam * &c0) + &(&oml * &c1);
    let e2 = &(&lam * &d0) + &(&oml * &d1);
    Ok((e1, e2))
}
