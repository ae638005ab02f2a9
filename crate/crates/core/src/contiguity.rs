//! Contiguity operators on exact truncated ₃F₂ series and plans realizing integer index shifts.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::Rational;
use crate::criteria::HGParams;
use crate::eval::{pfq, pfq_derivative, Ball, EvalError, SeriesSpec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ContiguityError {
    #[error("{kind} has a vanishing prefactor at upper {upper:?}, lower {lower:?}")]
    ZeroPrefactor { kind: OpKind, upper: Vec<Rational>, lower: Vec<Rational> },
    #[error("{kind} needs truncation order at least {needed}, series has order {have}")]
    InsufficientOrder { kind: OpKind, needed: usize, have: usize },
    #[error("contiguity operators act on 3F2 series, got {upper} upper and {lower} lower parameters")]
    WrongShape { upper: usize, lower: usize },
    #[error("slot {slot} out of range")]
    BadSlot { slot: usize },
    #[error("no ordering of the shift plan avoids a vanishing prefactor: {0}")]
    NoValidPlan(String),
    #[error("invalid shift: {0}")]
    BadShift(String),
    #[error("unknown operator {0:?} (expected lower-b, raise-a, theta1 or theta2)")]
    UnknownKind(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// The four contiguity relations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OpKind {
    /// `b₁ → b₁−1` through `(b₁−1 + x d/dx)`.
    LowerB,
    /// `a₁ → a₁+1` through `(a₁ + x d/dx)`.
    RaiseA,
    /// `b₁ → b₁+1` through the second-order operator `θ₁`.
    #[serde(rename = "theta1")]
    RaiseB,
    /// `a₁ → a₁−1` through the second-order operator `θ₂`.
    #[serde(rename = "theta2")]
    LowerA,
}

impl OpKind {
    pub const ALL: [OpKind; 4] = [OpKind::LowerB, OpKind::RaiseA, OpKind::RaiseB, OpKind::LowerA];

    pub fn is_second_order(self) -> bool {
        matches!(self, OpKind::RaiseB | OpKind::LowerA)
    }

    /// Truncation orders lost by one application.
    pub fn order_loss(self) -> usize {
        if self.is_second_order() {
            2
        } else {
            0
        }
    }
}

impl fmt::Display for OpKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OpKind::LowerB => "lower-b",
            OpKind::RaiseA => "raise-a",
            OpKind::RaiseB => "theta1",
            OpKind::LowerA => "theta2",
        })
    }
}

impl FromStr for OpKind {
    type Err = ContiguityError;

    fn from_str(s: &str) -> Result<OpKind, ContiguityError> {
        match s.to_ascii_lowercase().as_str() {
            "lower-b" | "lowerb" | "lower_b" => Ok(OpKind::LowerB),
            "raise-a" | "raisea" | "raise_a" => Ok(OpKind::RaiseA),
            "theta1" | "raise-b" | "raiseb" | "raise_b" => Ok(OpKind::RaiseB),
            "theta2" | "lower-a" | "lowera" | "lower_a" => Ok(OpKind::LowerA),
            _ => Err(ContiguityError::UnknownKind(s.to_string())),
        }
    }
}

/// An operator together with the upper slot playing `a₁` and the lower slot playing `b₁`.
///
/// ₃F₂ is symmetric in its upper and in its lower parameters, so addressing a slot is the
/// same as permuting it into first position before applying the displayed formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ContiguityOp {
    pub kind: OpKind,
    pub upper_slot: usize,
    pub lower_slot: usize,
}

impl ContiguityOp {
    pub fn new(kind: OpKind, upper_slot: usize, lower_slot: usize) -> ContiguityOp {
        ContiguityOp { kind, upper_slot, lower_slot }
    }
}

/// Exact coefficients `c_0, …, c_M` of a ₚF_q series.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncatedSeries {
    pub spec: SeriesSpec,
    pub coefficients: Vec<Rational>,
}

impl TruncatedSeries {
    pub fn order(&self) -> usize {
        self.spec.order
    }
}

pub fn series_expand(spec: &SeriesSpec) -> Result<TruncatedSeries, ContiguityError> {
    let spec = SeriesSpec::new(spec.upper.clone(), spec.lower.clone(), spec.order)?;
    let coefficients = spec.coefficients();
    Ok(TruncatedSeries { spec, coefficients })
}

/// Parameters `(a₁, a₂, a₃; b₁, b₂)` with the addressed slots moved to the front.
struct Frame {
    a: [Rational; 3],
    b: [Rational; 2],
}

fn frame(upper: &[Rational], lower: &[Rational], op: &ContiguityOp) -> Result<Frame, ContiguityError> {
    if upper.len() != 3 || lower.len() != 2 {
        return Err(ContiguityError::WrongShape { upper: upper.len(), lower: lower.len() });
    }
    if op.upper_slot > 2 {
        return Err(ContiguityError::BadSlot { slot: op.upper_slot });
    }
    if op.lower_slot > 1 {
        return Err(ContiguityError::BadSlot { slot: op.lower_slot });
    }
    let i = op.upper_slot;
    let rest: Vec<&Rational> = (0..3).filter(|&k| k != i).map(|k| &upper[k]).collect();
    let j = op.lower_slot;
    Ok(Frame {
        a: [upper[i].clone(), rest[0].clone(), rest[1].clone()],
        b: [lower[j].clone(), lower[1 - j].clone()],
    })
}

/// Scalar prefactor on the shifted side of the relation.
fn prefactor(kind: OpKind, f: &Frame) -> Rational {
    let [a1, a2, a3] = &f.a;
    let [b1, b2] = &f.b;
    match kind {
        OpKind::LowerB => b1 - Rational::one(),
        OpKind::RaiseA => a1.clone(),
        OpKind::RaiseB => (a2 - b1) * (a1 - b1) * (a3 - b1),
        OpKind::LowerA => (a1 - b1) * (a1 - b2),
    }
}

/// Parameters after applying `op`, in the original slot order.
fn shifted(upper: &[Rational], lower: &[Rational], op: &ContiguityOp) -> (Vec<Rational>, Vec<Rational>) {
    let mut up = upper.to_vec();
    let mut lo = lower.to_vec();
    let one = Rational::one();
    match op.kind {
        OpKind::LowerB => lo[op.lower_slot] -= &one,
        OpKind::RaiseA => up[op.upper_slot] += &one,
        OpKind::RaiseB => lo[op.lower_slot] += &one,
        OpKind::LowerA => up[op.upper_slot] -= &one,
    }
    (up, lo)
}

fn check_prefactor(upper: &[Rational], lower: &[Rational], op: &ContiguityOp) -> Result<(Frame, Rational), ContiguityError> {
    let f = frame(upper, lower, op)?;
    let p = prefactor(op.kind, &f);
    if p.is_zero() {
        return Err(ContiguityError::ZeroPrefactor { kind: op.kind, upper: upper.to_vec(), lower: lower.to_vec() });
    }
    Ok((f, p))
}

/// Applies the differential operator of `op` term by term and divides by its prefactor.
///
/// With `c_n` the input coefficients, the coefficient of `x^n` in the output is
/// * lower-b: `(b₁−1+n) c_n / (b₁−1)`
/// * raise-a: `(a₁+n) c_n / a₁`
/// * θ₁: `[(P − a₁a₂a₃ + b₁(b₁−a₁−a₂−a₃−1)n − b₁n(n−1)) c_n + b₁(n+1)(b₂+n) c_{n+1}] / P`
/// * θ₂: `[((a₁−b₁)(a₁−b₂) + (b₁+b₂−a₁)n + n(n−1)) c_n − (a₂a₃ + (a₂+a₃+1)(n−1) + (n−1)(n−2)) c_{n−1}] / Q`
///
/// where `P`, `Q` are the prefactors. Second-order operators return order `M−2`.
pub fn apply_op(op: &ContiguityOp, s: &TruncatedSeries) -> Result<TruncatedSeries, ContiguityError> {
    let (f, p) = check_prefactor(&s.spec.upper, &s.spec.lower, op)?;
    let m = s.order();
    let out_order = m.checked_sub(op.kind.order_loss()).filter(|&o| o >= 1).ok_or(
        ContiguityError::InsufficientOrder { kind: op.kind, needed: op.kind.order_loss() + 1, have: m },
    )?;
    let c = &s.coefficients;
    let [a1, a2, a3] = &f.a;
    let [b1, b2] = &f.b;
    let one = Rational::one();
    let coefficients: Vec<Rational> = (0..=out_order)
        .map(|n| {
            let nr = Rational::from(n);
            let value = match op.kind {
                OpKind::LowerB => (b1 - &one + &nr) * &c[n],
                OpKind::RaiseA => (a1 + &nr) * &c[n],
                OpKind::RaiseB => {
                    let diag = &p - a1 * a2 * a3 + b1 * &(b1 - a1 - a2 - a3 - &one) * &nr
                        - b1 * &nr * (&nr - &one);
                    diag * &c[n] + b1 * &(&nr + &one) * (b2 + &nr) * &c[n + 1]
                }
                OpKind::LowerA => {
                    let diag = &p + (b1 + b2 - a1) * &nr + &nr * (&nr - &one);
                    let mut v = diag * &c[n];
                    if n >= 1 {
                        let k = &nr - &one;
                        let sub = a2 * a3 + (a2 + a3 + &one) * &k + &k * (&k - &one);
                        v -= sub * &c[n - 1];
                    }
                    v
                }
            };
            value / &p
        })
        .collect();
    let (upper, lower) = shifted(&s.spec.upper, &s.spec.lower, op);
    Ok(TruncatedSeries { spec: SeriesSpec { upper, lower, order: out_order }, coefficients })
}

/// Ordered operators taking `₃F₂(1,1,q;a,b)` to `₃F₂(n₁,n₂,q+n₃;a+n₄,b+n₅)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftPlan {
    pub base_upper: Vec<Rational>,
    pub base_lower: Vec<Rational>,
    pub target_upper: Vec<Rational>,
    pub target_lower: Vec<Rational>,
    pub ops: Vec<ContiguityOp>,
}

impl ShiftPlan {
    pub fn theta_steps(&self) -> usize {
        self.ops.iter().filter(|o| o.kind.is_second_order()).count()
    }

    /// Expands the base to `M + 2·(θ-steps)` and applies every operator, giving the target to order `M`.
    pub fn execute(&self, order: usize) -> Result<TruncatedSeries, ContiguityError> {
        let base = SeriesSpec::new(self.base_upper.clone(), self.base_lower.clone(), order + 2 * self.theta_steps())?;
        let mut s = series_expand(&base)?;
        for op in &self.ops {
            s = apply_op(op, &s)?;
        }
        debug_assert_eq!(s.order(), order);
        Ok(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Phase {
    Q,
    A,
    B,
    Unit1,
    Unit2,
}

fn phase_ops(phase: Phase, n: [i64; 5]) -> Vec<ContiguityOp> {
    let (count, up_kind, down_kind, upper_slot, lower_slot) = match phase {
        Phase::Q => (n[2], OpKind::RaiseA, OpKind::LowerA, 2, 0),
        Phase::A => (n[3], OpKind::RaiseB, OpKind::LowerB, 0, 0),
        Phase::B => (n[4], OpKind::RaiseB, OpKind::LowerB, 0, 1),
        Phase::Unit1 => (n[0] - 1, OpKind::RaiseA, OpKind::LowerA, 0, 0),
        Phase::Unit2 => (n[1] - 1, OpKind::RaiseA, OpKind::LowerA, 1, 0),
    };
    let kind = if count >= 0 { up_kind } else { down_kind };
    vec![ContiguityOp::new(kind, upper_slot, lower_slot); count.unsigned_abs() as usize]
}

/// Walks the parameters through `ops`, failing at the first vanishing prefactor.
fn simulate(upper: &[Rational], lower: &[Rational], ops: &[ContiguityOp]) -> Result<(Vec<Rational>, Vec<Rational>), ContiguityError> {
    let (mut up, mut lo) = (upper.to_vec(), lower.to_vec());
    for op in ops {
        check_prefactor(&up, &lo, op)?;
        (up, lo) = shifted(&up, &lo, op);
    }
    Ok((up, lo))
}

fn permutations(items: &[Phase]) -> Vec<Vec<Phase>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

/// Plans the shift `(1,1,q;a,b) → (n₁,n₂,q+n₃;a+n₄,b+n₅)`.
///
/// The default order adjusts `q`, then `a`, then `b`, then the two unit indices. Only when
/// that order hits a vanishing prefactor are the other orderings of these five phases tried.
pub fn plan_shift(base: &HGParams, n1: i64, n2: i64, n3: i64, n4: i64, n5: i64) -> Result<ShiftPlan, ContiguityError> {
    if n1 < 1 || n2 < 1 {
        return Err(ContiguityError::BadShift(format!("n₁ = {n1}, n₂ = {n2} must be positive")));
    }
    let one = Rational::one();
    let base_upper = vec![one.clone(), one, base.q.clone()];
    let base_lower = vec![base.a.clone(), base.b.clone()];
    let n = [n1, n2, n3, n4, n5];
    let target_upper = vec![Rational::from(n1), Rational::from(n2), &base.q + Rational::from(n3)];
    let target_lower = vec![&base.a + Rational::from(n4), &base.b + Rational::from(n5)];
    for lower in base_lower.iter().chain(&target_lower) {
        if lower.is_integer() && !lower.is_positive() {
            return Err(ContiguityError::BadShift(format!("lower parameter {lower} is a non-positive integer")));
        }
    }
    let default = [Phase::Q, Phase::A, Phase::B, Phase::Unit1, Phase::Unit2];
    let mut first_error = None;
    for order in permutations(&default) {
        let ops: Vec<ContiguityOp> = order.iter().flat_map(|&ph| phase_ops(ph, n)).collect();
        match simulate(&base_upper, &base_lower, &ops) {
            Ok((up, lo)) => {
                debug_assert_eq!((&up, &lo), (&target_upper, &target_lower));
                return Ok(ShiftPlan { base_upper, base_lower, target_upper, target_lower, ops });
            }
            Err(e @ ContiguityError::ZeroPrefactor { .. }) => {
                first_error.get_or_insert(e);
            }
            Err(e) => return Err(e),
        }
    }
    Err(ContiguityError::NoValidPlan(first_error.map(|e| e.to_string()).unwrap_or_default()))
}

/// Two sides of a contiguity identity evaluated at a rational point.
#[derive(Clone, Debug, Serialize)]
pub struct ContiguityCheck {
    pub kind: OpKind,
    pub params: Vec<Rational>,
    pub x: Rational,
    pub lhs: Ball,
    pub rhs: Ball,
    pub residual: Ball,
}

/// Evaluates `prefactor · ₃F₂(shifted; x)` and the operator applied to `₃F₂(params; x)`.
///
/// `params` is `(a₁, a₂, a₃, b₁, b₂)`; the operator addresses `a₁` and `b₁`.
pub fn verify_contiguity(kind: OpKind, params: &[Rational], x: &Rational, prec: u32) -> Result<ContiguityCheck, ContiguityError> {
    if params.len() != 5 {
        return Err(ContiguityError::WrongShape { upper: params.len().min(3), lower: params.len().saturating_sub(3) });
    }
    if x.abs() >= Rational::one() {
        return Err(EvalError::DivergentArgument(format!("|x| = {} ≥ 1", x.abs())).into());
    }
    let upper = &params[..3];
    let lower = &params[3..];
    let op = ContiguityOp::new(kind, 0, 0);
    let (f, p) = check_prefactor(upper, lower, &op)?;
    let [a1, a2, a3] = &f.a;
    let [b1, b2] = &f.b;
    let one = Rational::one();
    let wp = prec + 16;
    let xb = Ball::from_rational(x, wp);

    let (su, sl) = shifted(upper, lower, &op);
    let lhs = pfq(&su, &sl, &xb, wp)?.mul_rational(&p);

    let f0 = pfq(upper, lower, &xb, wp)?;
    let f1 = pfq_derivative(upper, lower, &xb, 1, wp)?;
    let f2 = || pfq_derivative(upper, lower, &xb, 2, wp);
    // Coefficients of F, F', F'' as exact rationals in x.
    let (c0, c1, c2) = match kind {
        OpKind::LowerB => (b1 - &one, x.clone(), Rational::zero()),
        OpKind::RaiseA => (a1.clone(), x.clone(), Rational::zero()),
        OpKind::RaiseB => (
            &p - a1 * a2 * a3,
            b1 * &(b2 + &(b1 - a1 - a2 - a3 - &one) * x),
            b1 * &(x - x * x),
        ),
        OpKind::LowerA => (
            &p - a2 * a3 * x,
            (b1 + b2 - a1 - (a2 + a3 + &one) * x) * x,
            (&one - x) * x * x,
        ),
    };
    let mut rhs = f0.mul_rational(&c0) + f1.mul_rational(&c1);
    if !c2.is_zero() {
        rhs = rhs + f2()?.mul_rational(&c2);
    }
    let residual = (&lhs - &rhs).round_to(prec);
    Ok(ContiguityCheck {
        kind,
        params: params.to_vec(),
        x: x.clone(),
        lhs: lhs.round_to(prec),
        rhs: rhs.round_to(prec),
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q;

    fn spec(upper: &[Rational], lower: &[Rational], m: usize) -> SeriesSpec {
        SeriesSpec::new(upper.to_vec(), lower.to_vec(), m).unwrap()
    }

    fn base() -> (Vec<Rational>, Vec<Rational>) {
        (vec![q(1, 1), q(1, 1), q(1, 2)], vec![q(7, 6), q(11, 6)])
    }

    #[test]
    fn expansion_examples() {
        let s = series_expand(&spec(&[q(1, 1), q(1, 1)], &[q(2, 1)], 3)).unwrap();
        assert_eq!(s.coefficients, vec![q(1, 1), q(1, 2), q(1, 3), q(1, 4)]);
        let (u, l) = base();
        let s = series_expand(&spec(&u, &l, 1)).unwrap();
        assert_eq!(s.coefficients, vec![q(1, 1), q(18, 77)]);
    }

    #[test]
    fn raise_a_matches_direct_expansion() {
        let (u, l) = base();
        let s = series_expand(&spec(&u, &l, 20)).unwrap();
        let out = apply_op(&ContiguityOp::new(OpKind::RaiseA, 0, 0), &s).unwrap();
        let direct = series_expand(&spec(&[q(2, 1), q(1, 1), q(1, 2)], &l, 20)).unwrap();
        assert_eq!(out, direct);
    }

    #[test]
    fn theta2_at_a1_one_gives_constant() {
        let (u, l) = base();
        let s = series_expand(&spec(&u, &l, 12)).unwrap();
        let out = apply_op(&ContiguityOp::new(OpKind::LowerA, 0, 0), &s).unwrap();
        assert_eq!(out.order(), 10);
        assert_eq!(out.coefficients[0], q(1, 1));
        assert!(out.coefficients[1..].iter().all(Rational::is_zero));
    }

    #[test]
    fn round_trips() {
        let (u, l) = base();
        let s = series_expand(&spec(&u, &l, 16)).unwrap();
        let down = apply_op(&ContiguityOp::new(OpKind::LowerB, 0, 1), &s).unwrap();
        let back = apply_op(&ContiguityOp::new(OpKind::RaiseB, 0, 1), &down).unwrap();
        assert_eq!(back.spec.lower, l);
        assert_eq!(back.coefficients[..], s.coefficients[..=14]);
        let up = apply_op(&ContiguityOp::new(OpKind::RaiseA, 2, 0), &s).unwrap();
        let back = apply_op(&ContiguityOp::new(OpKind::LowerA, 2, 0), &up).unwrap();
        assert_eq!(back.spec.upper, u);
        assert_eq!(back.coefficients[..], s.coefficients[..=14]);
    }

    #[test]
    fn errors() {
        let s = series_expand(&spec(&[q(0, 1), q(1, 1), q(1, 2)], &[q(1, 1), q(3, 2)], 4)).unwrap();
        assert!(matches!(
            apply_op(&ContiguityOp::new(OpKind::RaiseA, 0, 0), &s),
            Err(ContiguityError::ZeroPrefactor { .. })
        ));
        assert!(matches!(
            apply_op(&ContiguityOp::new(OpKind::LowerB, 0, 0), &s),
            Err(ContiguityError::ZeroPrefactor { .. })
        ));
        let (u, l) = base();
        let short = series_expand(&spec(&u, &l, 2)).unwrap();
        assert!(matches!(
            apply_op(&ContiguityOp::new(OpKind::RaiseB, 0, 0), &short),
            Err(ContiguityError::InsufficientOrder { .. })
        ));
        let wrong = series_expand(&spec(&[q(1, 1), q(1, 1)], &[q(2, 1)], 4)).unwrap();
        assert!(matches!(
            apply_op(&ContiguityOp::new(OpKind::RaiseA, 0, 0), &wrong),
            Err(ContiguityError::WrongShape { .. })
        ));
        assert_eq!("theta1".parse::<OpKind>().unwrap(), OpKind::RaiseB);
        assert!("theta3".parse::<OpKind>().is_err());
    }

    #[test]
    fn plan_examples() {
        let p = HGParams::new(q(1, 2), q(7, 6), q(11, 6));
        assert!(plan_shift(&p, 1, 1, 0, 0, 0).unwrap().ops.is_empty());
        assert_eq!(plan_shift(&p, 2, 1, 0, 0, 0).unwrap().ops, vec![ContiguityOp::new(OpKind::RaiseA, 0, 0)]);
        let plan = plan_shift(&p, 1, 1, 1, 0, 0).unwrap();
        assert_eq!(plan.ops, vec![ContiguityOp::new(OpKind::RaiseA, 2, 0)]);
        let out = plan.execute(15).unwrap();
        let direct = series_expand(&spec(&[q(1, 1), q(1, 1), q(3, 2)], &[q(7, 6), q(11, 6)], 15)).unwrap();
        assert_eq!(out, direct);
        assert!(plan_shift(&p, 0, 1, 0, 0, 0).is_err());
    }

    #[test]
    fn plan_falls_back_to_other_orderings() {
        // Lowering q = 3/2 first needs θ₂ with a₁ = q = b₁ = 3/2, whose prefactor vanishes.
        // Lowering a to 1/2 first removes the collision.
        let p = HGParams::new(q(3, 2), q(3, 2), q(7, 3));
        let plan = plan_shift(&p, 1, 1, -1, -1, 0).unwrap();
        assert_eq!(plan.ops[0].kind, OpKind::LowerB);
        let out = plan.execute(10).unwrap();
        let direct = series_expand(&spec(&[q(1, 1), q(1, 1), q(1, 2)], &[q(1, 2), q(7, 3)], 10)).unwrap();
        assert_eq!(out, direct);
    }

    #[test]
    fn identities_hold_numerically() {
        let (u, l) = base();
        let params: Vec<Rational> = u.into_iter().chain(l).collect();
        for (kind, x) in [
            (OpKind::LowerB, q(1, 3)),
            (OpKind::RaiseB, q(1, 4)),
            (OpKind::LowerA, q(1, 2)),
            (OpKind::RaiseA, q(1, 2)),
        ] {
            let c = verify_contiguity(kind, &params, &x, 128).unwrap();
            assert!(c.residual.contains_zero(), "{kind}: {}", c.residual);
            assert!(c.residual.rad().to_f64() < 1e-30);
        }
    }
}
