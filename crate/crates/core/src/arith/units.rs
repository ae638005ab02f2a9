use std::fmt;

use rug::Integer;
use serde::{Deserialize, Serialize};

use super::rational::Rational;
use super::ArithError;

/// A residue class `s mod N` with `gcd(s, N) = 1`.
///
/// Elements of the profinite unit group act on rationals whose denominators divide `N`
/// through this finite quotient, so every "for all units" check reduces to these classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct UnitClass {
    modulus: u64,
    residue: u64,
}

impl UnitClass {
    /// Reduces `residue` mod `modulus` and checks coprimality. Modulus 1 has the single class 1.
    pub fn new(modulus: u64, residue: i64) -> Result<UnitClass, ArithError> {
        if modulus == 0 {
            return Err(ArithError::ZeroModulus);
        }
        if modulus == 1 {
            return Ok(UnitClass { modulus, residue: 1 });
        }
        let r = residue.rem_euclid(modulus as i64) as u64;
        if gcd(r, modulus) != 1 {
            return Err(ArithError::NotAUnit { residue, modulus });
        }
        Ok(UnitClass { modulus, residue: r })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    /// `s · r` for a rational whose denominator divides the modulus. Only the class of the
    /// result in Q/Z is meaningful.
    pub fn act(&self, r: &Rational) -> Rational {
        r * Rational::from(self.residue)
    }
}

impl fmt::Display for UnitClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.residue, self.modulus)
    }
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// All unit classes mod `n` in ascending order of residue. For `n = 1` this is `[1]`.
pub fn unit_classes(n: u64) -> Vec<UnitClass> {
    assert!(n >= 1, "modulus must be positive");
    if n == 1 {
        return vec![UnitClass { modulus: 1, residue: 1 }];
    }
    (1..n)
        .filter(|&s| gcd(s, n) == 1)
        .map(|s| UnitClass { modulus: n, residue: s })
        .collect()
}

/// Converts a joint modulus computed as a big integer into `u64`.
pub fn modulus_u64(n: &Integer) -> Result<u64, ArithError> {
    n.to_u64().ok_or_else(|| ArithError::ModulusTooLarge(n.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn euler_phi(mut n: u64) -> u64 {
        let mut result = n;
        let mut p = 2;
        while p * p <= n {
            if n % p == 0 {
                while n % p == 0 {
                    n /= p;
                }
                result -= result / p;
            }
            p += 1;
        }
        if n > 1 {
            result -= result / n;
        }
        result
    }

    #[test]
    fn examples() {
        let r = |n| unit_classes(n).iter().map(|u| u.residue()).collect::<Vec<_>>();
        assert_eq!(r(12), vec![1, 5, 7, 11]);
        assert_eq!(r(6), vec![1, 5]);
        assert_eq!(r(1), vec![1]);
    }

    #[test]
    fn construction_checks_coprimality() {
        assert_eq!(UnitClass::new(12, -1).unwrap().residue(), 11);
        assert!(UnitClass::new(12, 4).is_err());
        assert!(UnitClass::new(0, 1).is_err());
        assert_eq!(UnitClass::new(1, 0).unwrap().residue(), 1);
    }

    proptest! {
        #[test]
        fn count_is_phi(n in 1u64..400) {
            let units = unit_classes(n);
            prop_assert_eq!(units.len() as u64, euler_phi(n));
            for u in units {
                prop_assert_eq!(gcd(u.residue(), n), 1);
            }
        }
    }
}
