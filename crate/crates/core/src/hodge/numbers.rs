use serde::{Deserialize, Serialize};

use super::HodgeError;
use crate::arith::units::modulus_u64;
use crate::arith::{frac, lcm_denominators, unit_classes, Rational, UnitClass};
use crate::criteria::strictly_between;

/// `mu = k/l` together with the exponents at infinity `β₁, β₂`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HodgeInput {
    pub mu: Rational,
    pub beta1: Rational,
    pub beta2: Rational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HodgeTriple {
    pub h20: u8,
    pub h11: u8,
    pub h02: u8,
}

impl HodgeInput {
    pub fn new(mu: Rational, beta1: Rational, beta2: Rational) -> HodgeInput {
        HodgeInput { mu, beta1, beta2 }
    }

    pub fn validate(&self) -> Result<(), HodgeError> {
        if self.mu.is_integer() {
            return Err(HodgeError::IntegralInput(format!("mu = {} is an integer", self.mu)));
        }
        for (i, b) in [&self.beta1, &self.beta2].into_iter().enumerate() {
            if (b - &self.mu).is_integer() {
                return Err(HodgeError::IntegralInput(format!(
                    "beta{} − mu = {} is an integer",
                    i + 1,
                    b - &self.mu
                )));
            }
        }
        Ok(())
    }

    /// The input acted on by a unit class.
    pub fn act(&self, s: &UnitClass) -> HodgeInput {
        HodgeInput::new(s.act(&self.mu), s.act(&self.beta1), s.act(&self.beta2))
    }

    pub fn modulus(&self) -> Result<u64, HodgeError> {
        Ok(modulus_u64(&lcm_denominators([&self.mu, &self.beta1, &self.beta2]))?)
    }
}

/// `δ_i = {β_i} + {−mu} − {β_i − mu}` for `i = 1, 2`; each lies in {0, 1}.
pub fn delta_decomposition(h: &HodgeInput) -> Result<[Rational; 2], HodgeError> {
    h.validate()?;
    let neg_mu = frac(&-&h.mu);
    let delta = |b: &Rational| frac(b) + &neg_mu - frac(&(b - &h.mu));
    Ok([delta(&h.beta1), delta(&h.beta2)])
}

/// `d_χ = 2{−mu} + Σ ({β_i} − {β_i − mu})`, an integer in {0, 1, 2}.
pub fn d_chi(h: &HodgeInput) -> Result<u8, HodgeError> {
    h.validate()?;
    let mut total = frac(&-&h.mu) * Rational::from(2);
    for b in [&h.beta1, &h.beta2] {
        total += frac(b) - frac(&(b - &h.mu));
    }
    match total.to_i64() {
        Some(v @ 0..=2) => Ok(v as u8),
        _ => Err(HodgeError::Internal(format!("d_chi evaluated to {total}"))),
    }
}

/// Hodge numbers `(h^{2,0}, h^{1,1}, h^{0,2})` determined by `d_χ`.
pub fn hodge_triple(d: u8) -> Result<HodgeTriple, HodgeError> {
    let (h20, h11, h02) = match d {
        2 => (1, 1, 0),
        1 => (0, 2, 0),
        0 => (0, 1, 1),
        _ => return Err(HodgeError::DOutOfRange(d)),
    };
    Ok(HodgeTriple { h20, h11, h02 })
}

/// Per-class values of `d_χ` over the joint modulus of `(mu, β₁, β₂)`.
pub fn d_chi_all(h: &HodgeInput) -> Result<Vec<(UnitClass, u8)>, HodgeError> {
    h.validate()?;
    unit_classes(h.modulus()?)
        .into_iter()
        .map(|s| Ok((s, d_chi(&h.act(&s))?)))
        .collect()
}

/// Tate type (1,1) for every conjugate: `d_χ = 1` at every unit class.
pub fn tate_check(h: &HodgeInput) -> Result<bool, HodgeError> {
    Ok(d_chi_all(h)?.iter().all(|&(_, d)| d == 1))
}

/// Same verdict as [`tate_check`], decided by strict bracketing of `{s·mu}` by `{sβ₁}, {sβ₂}`.
pub fn tate_check_bracketing(h: &HodgeInput) -> Result<bool, HodgeError> {
    h.validate()?;
    for s in unit_classes(h.modulus()?) {
        let x = h.act(&s);
        match strictly_between(&x.mu, &x.beta1, &x.beta2) {
            Some(true) => {}
            Some(false) => return Ok(false),
            None => return Err(HodgeError::Internal(format!("tie at {s}"))),
        }
    }
    Ok(true)
}
