use serde::Serialize;

use super::HodgeError;
use crate::arith::units::gcd;
use crate::arith::{frac, Rational};

/// Character data of a Gauss-type fibration `y^N = x^a (1−x)^b (1−tx)^(N−b)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GaussTypeData {
    pub n_mod: u64,
    pub a: u64,
    pub b: u64,
    pub n: u64,
    pub d: u64,
    pub d1: u64,
    pub d2: u64,
    pub a_n: u64,
    pub b_n: u64,
    pub c_n: i64,
    pub alpha_n: Rational,
    pub beta_n: Rational,
}

/// Derives the 1-form exponents and local exponents for the character `n`.
///
/// `d` is the kernel size of `μ_N → E₀^×`; the fibration is of Gauss type iff neither
/// `a·d` nor `b·d` vanishes mod `N`.
pub fn gauss_type_data(big_n: u64, a: u64, b: u64, n: u64, d: u64) -> Result<GaussTypeData, HodgeError> {
    let bad = |msg: String| Err(HodgeError::InvalidFibration(msg));
    if big_n < 2 {
        return bad(format!("N = {big_n} must be at least 2"));
    }
    if !(0 < a && a < big_n && 0 < b && b < big_n) {
        return bad(format!("need 0 < a, b < N, got a = {a}, b = {b}, N = {big_n}"));
    }
    if gcd(gcd(big_n, a), b) != 1 {
        return bad(format!("gcd(N, a, b) = {} ≠ 1", gcd(gcd(big_n, a), b)));
    }
    if gcd(n, big_n) != 1 {
        return bad(format!("n = {n} is not coprime to N = {big_n}"));
    }
    if d == 0 || big_n % d != 0 {
        return bad(format!("d = {d} does not divide N = {big_n}"));
    }
    if (a * d) % big_n == 0 || (b * d) % big_n == 0 {
        return Err(HodgeError::NotGaussType { n: big_n, a, b, d });
    }
    let a_n = a * n / big_n;
    let b_n = b * n / big_n;
    let c_n = n as i64 - b_n as i64 - 1;
    debug_assert_eq!(c_n, ((big_n * n - b * n) / big_n) as i64);
    let ratio = |k: u64| Rational::new(-((k * n) as i64), big_n as i64);
    Ok(GaussTypeData {
        n_mod: big_n,
        a,
        b,
        n,
        d,
        d1: gcd(big_n, a),
        d2: gcd(big_n, b),
        a_n,
        b_n,
        c_n,
        alpha_n: frac(&ratio(a)),
        beta_n: frac(&ratio(b)),
    })
}

/// Local exponents of the Gauss equation attached to the character.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RiemannScheme {
    pub at_zero: [Rational; 2],
    pub at_one: [Rational; 2],
    pub at_infinity: [Rational; 2],
}

impl RiemannScheme {
    pub fn of(g: &GaussTypeData) -> RiemannScheme {
        RiemannScheme {
            at_zero: [Rational::zero(), Rational::one() - &g.alpha_n - &g.beta_n],
            at_one: [Rational::zero(), Rational::zero()],
            at_infinity: [g.alpha_n.clone(), g.beta_n.clone()],
        }
    }

    /// Sum of all six exponents; equals 1 for a second-order Fuchsian equation with three singular points.
    pub fn exponent_sum(&self) -> Rational {
        self.at_zero
            .iter()
            .chain(&self.at_one)
            .chain(&self.at_infinity)
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        let g = gauss_type_data(6, 1, 2, 1, 1).unwrap();
        assert_eq!((g.a_n, g.b_n, g.c_n), (0, 0, 0));
        assert_eq!((g.alpha_n.clone(), g.beta_n.clone()), (q(5, 6), q(2, 3)));
        assert_eq!((g.d1, g.d2), (1, 2));

        assert_eq!(
            gauss_type_data(6, 2, 3, 1, 3),
            Err(HodgeError::NotGaussType { n: 6, a: 2, b: 3, d: 3 })
        );

        let g = gauss_type_data(5, 1, 2, 1, 1).unwrap();
        assert_eq!((g.alpha_n.clone(), g.beta_n.clone(), g.c_n), (q(4, 5), q(3, 5), 0));
    }

    #[test]
    fn invalid_inputs() {
        assert!(gauss_type_data(6, 0, 1, 1, 1).is_err());
        assert!(gauss_type_data(6, 2, 4, 1, 1).is_err());
        assert!(gauss_type_data(6, 1, 2, 2, 1).is_err());
        assert!(gauss_type_data(6, 1, 2, 1, 4).is_err());
    }

    proptest! {
        #[test]
        fn derived_fields((big_n, a, b) in (2u64..40).prop_flat_map(|m| (Just(m), 1..m, 1..m)), n in 1u64..80) {
            prop_assume!(gcd(gcd(big_n, a), b) == 1 && gcd(n, big_n) == 1);
            let g = gauss_type_data(big_n, a, b, n, 1).unwrap();
            prop_assert_eq!(g.c_n, n as i64 - g.b_n as i64 - 1);
            let an = Rational::new((a * n) as i64, big_n as i64);
            if !an.is_integer() {
                prop_assert_eq!(g.alpha_n.clone(), Rational::one() - frac(&an));
            }
            prop_assert!(g.alpha_n.is_positive() && g.alpha_n < Rational::one());
            prop_assert!(g.beta_n.is_positive() && g.beta_n < Rational::one());
            prop_assert!(RiemannScheme::of(&g).exponent_sum().is_one());
        }
    }
}
