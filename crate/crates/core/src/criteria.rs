//! Interlacing criteria for `3F2(1,1,q; a,b; x)` and the Beukers–Heckman algebraicity test.
//!
//! Every "for all units s" quantifier is decided over `(Z/NZ)^×` where `N` is the lcm
//! of the denominators of the parameters involved.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::units::modulus_u64;
use crate::arith::{frac, lcm_denominators, unit_classes, ArithError, Rational, UnitClass};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CriteriaError {
    #[error("unit class modulus {got} does not match the joint modulus {expected}")]
    ModulusMismatch { expected: u64, got: u64 },
    #[error("preconditions violated: {0:?}")]
    Preconditions(Vec<Violation>),
    /// A fractional-part tie; impossible under the preconditions, so it signals a modulus bug.
    #[error("internal error: tie between fractional parts at {0}")]
    Tie(UnitClass),
    #[error("invalid Beukers–Heckman input: {0}")]
    BadBhInput(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// Parameters `(q, a, b)` of `3F2(1, 1, q; a, b; x)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HGParams {
    pub q: Rational,
    pub a: Rational,
    pub b: Rational,
}

/// One of the six quantities that must be non-integral.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Violation {
    QIntegral,
    AIntegral,
    BIntegral,
    QMinusAIntegral,
    QMinusBIntegral,
    QMinusAMinusBIntegral,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Violation::QIntegral => "q ∈ Z",
            Violation::AIntegral => "a ∈ Z",
            Violation::BIntegral => "b ∈ Z",
            Violation::QMinusAIntegral => "q−a ∈ Z",
            Violation::QMinusBIntegral => "q−b ∈ Z",
            Violation::QMinusAMinusBIntegral => "q−a−b ∈ Z",
        };
        f.write_str(s)
    }
}

impl HGParams {
    pub fn new(q: Rational, a: Rational, b: Rational) -> HGParams {
        HGParams { q, a, b }
    }

    /// Joint modulus: lcm of the denominators of q, a, b.
    pub fn modulus(&self) -> Result<u64, ArithError> {
        modulus_u64(&lcm_denominators([&self.q, &self.a, &self.b]))
    }

    pub fn swapped(&self) -> HGParams {
        HGParams::new(self.q.clone(), self.b.clone(), self.a.clone())
    }

    /// Whether the value at `x = 1` converges, i.e. `a + b > q + 2`.
    pub fn converges_at_1(&self) -> bool {
        &self.a + &self.b > &self.q + Rational::from(2)
    }
}

impl fmt::Display for HGParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(q,a,b)=({},{},{})", self.q, self.a, self.b)
    }
}

/// Lists which of q, a, b, q−a, q−b, q−a−b are integers.
pub fn check_preconditions(p: &HGParams) -> Vec<Violation> {
    let checks = [
        (p.q.clone(), Violation::QIntegral),
        (p.a.clone(), Violation::AIntegral),
        (p.b.clone(), Violation::BIntegral),
        (&p.q - &p.a, Violation::QMinusAIntegral),
        (&p.q - &p.b, Violation::QMinusBIntegral),
        (&p.q - &p.a - &p.b, Violation::QMinusAMinusBIntegral),
    ];
    checks
        .into_iter()
        .filter(|(v, _)| v.is_integer())
        .map(|(_, tag)| tag)
        .collect()
}

fn check_class(p: &HGParams, s: &UnitClass) -> Result<(), CriteriaError> {
    let expected = p.modulus()?;
    if s.modulus() != expected {
        return Err(CriteriaError::ModulusMismatch {
            expected,
            got: s.modulus(),
        });
    }
    Ok(())
}

/// Sum form: `{sa} + {sb} + 2{−sq} − {s(a−q)} − {s(b−q)}`.
pub fn eq1_sum(p: &HGParams, s: &UnitClass) -> Rational {
    let sa = s.act(&p.a);
    let sb = s.act(&p.b);
    let sq = s.act(&p.q);
    frac(&sa) + frac(&sb) + frac(&-&sq) * Rational::from(2) - frac(&(&sa - &sq)) - frac(&(&sb - &sq))
}

/// Strict bracketing `min({sa},{sb}) < {sq} < max({sa},{sb})`; ties are reported as errors.
pub fn eq1_bracket(p: &HGParams, s: &UnitClass) -> Result<bool, CriteriaError> {
    strictly_between(&s.act(&p.q), &s.act(&p.a), &s.act(&p.b)).ok_or(CriteriaError::Tie(*s))
}

/// `Some(true)` iff `{mid}` lies strictly between `{x}` and `{y}`; `None` on any tie with `{mid}`.
pub(crate) fn strictly_between(mid: &Rational, x: &Rational, y: &Rational) -> Option<bool> {
    let m = frac(mid);
    let (fx, fy) = (frac(x), frac(y));
    if m == fx || m == fy {
        return None;
    }
    let (lo, hi) = if fx <= fy { (fx, fy) } else { (fy, fx) };
    Some(lo < m && m < hi)
}

/// Functional criterion at one unit class. Both the sum form and the bracketing form are
/// evaluated; they must agree.
pub fn eq1_holds_at(p: &HGParams, s: &UnitClass) -> Result<bool, CriteriaError> {
    check_class(p, s)?;
    let bracket = eq1_bracket(p, s)?;
    let sum = eq1_sum(p, s).is_one();
    debug_assert_eq!(sum, bracket, "sum and bracket forms disagree for {p} at {s}");
    Ok(sum)
}

/// `{sq} + {s(a−q)} + {s(b−q)} + {s(q−a−b)}`.
pub fn eq2_sum(p: &HGParams, s: &UnitClass) -> Rational {
    let sq = s.act(&p.q);
    let sa = s.act(&p.a);
    let sb = s.act(&p.b);
    frac(&sq) + frac(&(&sa - &sq)) + frac(&(&sb - &sq)) + frac(&(&sq - &sa - &sb))
}

/// Value-at-one criterion at one unit class: the four fractional parts sum to exactly 2.
pub fn eq2_holds_at(p: &HGParams, s: &UnitClass) -> Result<bool, CriteriaError> {
    check_class(p, s)?;
    Ok(eq2_sum(p, s) == Rational::from(2))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Label {
    FailsPreconditions,
    LogFunctional,
    LogAtOneOnly,
    #[serde(rename = "None")]
    Neither,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Label::FailsPreconditions => "FailsPreconditions",
            Label::LogFunctional => "LogFunctional",
            Label::LogAtOneOnly => "LogAtOneOnly",
            Label::Neither => "None",
        };
        f.write_str(s)
    }
}

/// Verdict for one parameter triple. Serializes to a single JSON object.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationRecord {
    pub q: Rational,
    pub a: Rational,
    pub b: Rational,
    #[serde(rename = "N")]
    pub modulus: u64,
    pub eq1: BTreeMap<u64, bool>,
    pub eq2: BTreeMap<u64, bool>,
    /// Beukers–Heckman algebraicity of the period function `2F1(2−a, 2−b; 4−a−b; t)`.
    pub bh: bool,
    pub converges_at_1: bool,
    pub label: Label,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub violations: Vec<Violation>,
}

impl ClassificationRecord {
    pub fn params(&self) -> HGParams {
        HGParams::new(self.q.clone(), self.a.clone(), self.b.clone())
    }

    /// Checks the label invariants against the per-class maps.
    pub fn is_consistent(&self) -> bool {
        let all1 = !self.eq1.is_empty() && self.eq1.values().all(|&v| v);
        let all2 = !self.eq2.is_empty() && self.eq2.values().all(|&v| v);
        let implication = self
            .eq1
            .iter()
            .all(|(s, &v)| !v || self.eq2.get(s).copied().unwrap_or(false));
        let expected = if !self.violations.is_empty() {
            Label::FailsPreconditions
        } else if all1 {
            Label::LogFunctional
        } else if all2 {
            Label::LogAtOneOnly
        } else {
            Label::Neither
        };
        implication && expected == self.label
    }
}

/// Evaluates both criteria over every unit class of the joint modulus and assigns a label.
pub fn classify(p: &HGParams) -> Result<ClassificationRecord, CriteriaError> {
    let violations = check_preconditions(p);
    let modulus = p.modulus()?;
    let mut record = ClassificationRecord {
        q: p.q.clone(),
        a: p.a.clone(),
        b: p.b.clone(),
        modulus,
        eq1: BTreeMap::new(),
        eq2: BTreeMap::new(),
        bh: period_function_algebraic(p),
        converges_at_1: p.converges_at_1(),
        label: Label::FailsPreconditions,
        violations,
    };
    if !record.violations.is_empty() {
        return Ok(record);
    }
    for s in unit_classes(modulus) {
        record.eq1.insert(s.residue(), eq1_holds_at(p, &s)?);
        record.eq2.insert(s.residue(), eq2_holds_at(p, &s)?);
    }
    let all1 = record.eq1.values().all(|&v| v);
    let all2 = record.eq2.values().all(|&v| v);
    record.label = if all1 {
        Label::LogFunctional
    } else if all2 {
        Label::LogAtOneOnly
    } else {
        Label::Neither
    };
    Ok(record)
}

fn period_function_algebraic(p: &HGParams) -> bool {
    let two = Rational::from(2);
    let b1 = &two - &p.a;
    let b2 = &two - &p.b;
    let input = BHInput {
        upper: vec![b1.clone(), b2.clone()],
        lower: vec![b1 + b2],
    };
    bh_algebraic(&input).unwrap_or(false)
}

/// Parameters of `pF(p−1)(upper; lower; x)` for the Beukers–Heckman test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BHInput {
    pub upper: Vec<Rational>,
    pub lower: Vec<Rational>,
}

/// Strict interlacing of two equal-size multisets in `[0,1)`. Duplicates never interlace.
pub fn interlace(xs: &[Rational], ys: &[Rational]) -> bool {
    if xs.len() != ys.len() || xs.is_empty() {
        return false;
    }
    let mut merged: Vec<(Rational, bool)> = xs
        .iter()
        .map(|x| (x.clone(), false))
        .chain(ys.iter().map(|y| (y.clone(), true)))
        .collect();
    merged.sort();
    if merged.windows(2).any(|w| w[0].0 == w[1].0) {
        return false;
    }
    merged.windows(2).all(|w| w[0].1 != w[1].1)
}

/// True iff for every unit class `s`, `({s a_i})` and `(0, {s b_j})` interlace.
pub fn bh_algebraic(input: &BHInput) -> Result<bool, CriteriaError> {
    if input.lower.len() + 1 != input.upper.len() {
        return Err(CriteriaError::BadBhInput(format!(
            "expected {} lower parameters, got {}",
            input.upper.len().saturating_sub(1),
            input.lower.len()
        )));
    }
    for a in &input.upper {
        if a.is_integer() {
            return Err(CriteriaError::BadBhInput(format!("upper parameter {a} is integral")));
        }
        for b in &input.lower {
            if frac(a) == frac(b) {
                return Err(CriteriaError::BadBhInput(format!(
                    "upper {a} and lower {b} agree modulo Z"
                )));
            }
        }
    }
    let modulus = modulus_u64(&lcm_denominators(input.upper.iter().chain(&input.lower)))?;
    for s in unit_classes(modulus) {
        let ups: Vec<Rational> = input.upper.iter().map(|a| frac(&s.act(a))).collect();
        let lows: Vec<Rational> = std::iter::once(Rational::zero())
            .chain(input.lower.iter().map(|b| frac(&s.act(b))))
            .collect();
        if !interlace(&ups, &lows) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q;

    fn params(qq: Rational, a: Rational, b: Rational) -> HGParams {
        HGParams::new(qq, a, b)
    }

    fn unit(n: u64, s: i64) -> UnitClass {
        UnitClass::new(n, s).unwrap()
    }

    #[test]
    fn preconditions() {
        assert!(check_preconditions(&params(q(1, 2), q(7, 6), q(11, 6))).is_empty());
        assert_eq!(
            check_preconditions(&params(q(1, 2), q(1, 2), q(3, 4))),
            vec![Violation::QMinusAIntegral]
        );
        assert_eq!(
            check_preconditions(&params(q(1, 3), q(4, 3), q(1, 4))),
            vec![Violation::QMinusAIntegral]
        );
    }

    #[test]
    fn eq1_examples() {
        let p = params(q(1, 2), q(7, 6), q(11, 6));
        assert!(eq1_holds_at(&p, &unit(6, 1)).unwrap());
        let c = params(q(1, 2), q(1, 6), q(1, 4));
        assert!(!eq1_holds_at(&c, &unit(12, 1)).unwrap());
        let p = params(q(1, 2), q(1, 6), q(5, 6));
        assert!(eq1_holds_at(&p, &unit(6, 5)).unwrap());
    }

    #[test]
    fn eq1_rejects_wrong_modulus() {
        let p = params(q(1, 2), q(7, 6), q(11, 6));
        assert_eq!(
            eq1_holds_at(&p, &unit(12, 5)),
            Err(CriteriaError::ModulusMismatch { expected: 6, got: 12 })
        );
        assert!(eq2_holds_at(&p, &unit(5, 1)).is_err());
    }

    #[test]
    fn eq2_examples() {
        let c = params(q(1, 2), q(1, 6), q(1, 4));
        assert_eq!(eq2_sum(&c, &unit(12, 1)), Rational::from(2));
        assert!(eq2_holds_at(&c, &unit(12, 1)).unwrap());
        assert!(eq2_holds_at(&c, &unit(12, 7)).unwrap());
        let p = params(q(1, 2), q(7, 6), q(11, 6));
        assert!(eq2_holds_at(&p, &unit(6, 1)).unwrap());
    }

    #[test]
    fn classify_examples() {
        let r = classify(&params(q(1, 2), q(7, 6), q(11, 6))).unwrap();
        assert_eq!(r.label, Label::LogFunctional);
        assert_eq!(r.modulus, 6);
        assert!(r.converges_at_1);
        assert!(!r.bh);
        assert!(r.is_consistent());

        let r = classify(&params(q(1, 2), q(1, 6), q(1, 4))).unwrap();
        assert_eq!(r.label, Label::LogAtOneOnly);
        assert_eq!(r.eq2.keys().copied().collect::<Vec<_>>(), vec![1, 5, 7, 11]);
        assert!(r.eq2.values().all(|&v| v));
        assert_eq!(r.eq1[&1], false);
        assert!(!r.converges_at_1);
        assert!(r.is_consistent());

        let r = classify(&params(q(1, 2), q(1, 2), q(3, 4))).unwrap();
        assert_eq!(r.label, Label::FailsPreconditions);
        assert!(r.eq1.is_empty() && r.eq2.is_empty());
    }

    #[test]
    fn record_json_shape() {
        let r = classify(&params(q(1, 2), q(7, 6), q(11, 6))).unwrap();
        let s = serde_json::to_string(&r).unwrap();
        assert!(s.starts_with(r#"{"q":"1/2","a":"7/6","b":"11/6","N":6,"eq1":{"1":true,"5":true},"eq2":{"1":true,"5":true},"bh":false"#), "{s}");
        assert!(s.contains(r#""label":"LogFunctional""#));
        let back: ClassificationRecord = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn none_label_serializes_as_none() {
        assert_eq!(serde_json::to_string(&Label::Neither).unwrap(), "\"None\"");
    }

    #[test]
    fn bh_examples() {
        let bh = |u: Vec<Rational>, l: Vec<Rational>| bh_algebraic(&BHInput { upper: u, lower: l });
        assert_eq!(bh(vec![q(1, 3), q(2, 3)], vec![q(1, 2)]), Ok(true));
        assert_eq!(bh(vec![q(1, 2), q(1, 2)], vec![q(1, 3)]), Ok(false));
        assert_eq!(bh(vec![q(1, 2)], vec![]), Ok(true));
        assert!(bh(vec![q(1, 2), q(1, 3)], vec![q(3, 2)]).is_err());
        assert!(bh(vec![Rational::one(), q(1, 3)], vec![q(1, 2)]).is_err());
    }

    #[test]
    fn interlace_basics() {
        assert!(interlace(&[q(1, 3)], &[q(1, 2)]));
        assert!(interlace(&[q(1, 4), q(3, 4)], &[Rational::zero(), q(1, 2)]));
        assert!(!interlace(&[q(1, 4), q(1, 3)], &[Rational::zero(), q(1, 2)]));
        assert!(!interlace(&[q(1, 2)], &[q(1, 2)]));
    }
}
