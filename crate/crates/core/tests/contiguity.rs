use hyperlog::arith::{q, Rational};
use hyperlog::contiguity::{apply_op, plan_shift, series_expand, verify_contiguity, ContiguityError, ContiguityOp, OpKind};
use hyperlog::criteria::HGParams;
use hyperlog::eval::SeriesSpec;
use proptest::prelude::*;

fn small_rational() -> impl Strategy<Value = Rational> {
    (-7i64..=7, 1i64..=7).prop_map(|(n, d)| Rational::new(n, d))
}

fn admissible_lower() -> impl Strategy<Value = Rational> {
    small_rational().prop_filter("lower parameter must avoid 0, −1, −2, …", |b| !(b.is_integer() && !b.is_positive()))
}

/// Parameters after the operator, with the addressed slots `a₁` and `b₁` first.
fn expected_shift(kind: OpKind, upper: &[Rational], lower: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let (mut up, mut lo) = (upper.to_vec(), lower.to_vec());
    let one = Rational::one();
    match kind {
        OpKind::LowerB => lo[0] = &lo[0] - &one,
        OpKind::RaiseA => up[0] = &up[0] + &one,
        OpKind::RaiseB => lo[0] = &lo[0] + &one,
        OpKind::LowerA => up[0] = &up[0] - &one,
    }
    (up, lo)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn every_operator_matches_direct_expansion(
        a in prop::collection::vec(small_rational(), 3),
        b in prop::collection::vec(admissible_lower(), 2),
        kind in prop::sample::select(OpKind::ALL.to_vec()),
        order in 4usize..24,
    ) {
        let (su, sl) = expected_shift(kind, &a, &b);
        prop_assume!(sl.iter().all(|v| !(v.is_integer() && !v.is_positive())));
        let s = series_expand(&SeriesSpec::new(a.clone(), b.clone(), order).unwrap()).unwrap();
        match apply_op(&ContiguityOp::new(kind, 0, 0), &s) {
            Ok(out) => {
                prop_assert_eq!(&out.spec.upper, &su);
                prop_assert_eq!(&out.spec.lower, &sl);
                let direct = series_expand(&SeriesSpec::new(su, sl, out.order()).unwrap()).unwrap();
                prop_assert_eq!(out.coefficients, direct.coefficients);
            }
            Err(ContiguityError::ZeroPrefactor { .. }) => {}
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn identities_hold_at_random_points(
        a in prop::collection::vec(small_rational(), 3),
        b in prop::collection::vec(admissible_lower(), 2),
        kind in prop::sample::select(OpKind::ALL.to_vec()),
        x in prop::sample::select(vec![q(1, 4), q(1, 3), q(1, 2), q(-1, 2)]),
    ) {
        let params: Vec<Rational> = a.into_iter().chain(b).collect();
        let (_, sl) = expected_shift(kind, &params[..3], &params[3..]);
        prop_assume!(sl.iter().all(|v| !(v.is_integer() && !v.is_positive())));
        match verify_contiguity(kind, &params, &x, 96) {
            Ok(c) => prop_assert!(c.residual.contains_zero(), "{} {:?} x={}: {}", kind, params, x, c.residual),
            Err(ContiguityError::ZeroPrefactor { .. }) => {}
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }
}

#[test]
fn plans_reach_every_small_shift() {
    let bases = [HGParams::new(q(1, 2), q(7, 6), q(11, 6)), HGParams::new(q(1, 3), q(2, 5), q(5, 7))];
    let mut executed = 0;
    for base in &bases {
        for n1 in 1..=3 {
            for n2 in 1..=2 {
                for n3 in -2..=2 {
                    for n4 in -2..=2 {
                        for n5 in [-1, 0, 2] {
                            let plan = match plan_shift(base, n1, n2, n3, n4, n5) {
                                Ok(p) => p,
                                Err(ContiguityError::NoValidPlan(_)) => continue,
                                Err(e) => panic!("{e}"),
                            };
                            let order = 8;
                            let out = plan.execute(order).unwrap();
                            assert_eq!(out.spec.upper, plan.target_upper);
                            assert_eq!(out.spec.lower, plan.target_lower);
                            let direct = series_expand(&SeriesSpec::new(plan.target_upper.clone(), plan.target_lower.clone(), order).unwrap()).unwrap();
                            assert_eq!(out.coefficients, direct.coefficients, "shift {:?}", (n1, n2, n3, n4, n5));
                            executed += 1;
                        }
                    }
                }
            }
        }
    }
    // Only a handful of shifts may be blocked by a vanishing prefactor on every ordering.
    assert!(executed > 700, "{executed}");
}

#[test]
fn plan_shift_rejects_bad_input() {
    let base = HGParams::new(q(1, 2), q(7, 6), q(11, 6));
    assert!(matches!(plan_shift(&base, 0, 1, 0, 0, 0), Err(ContiguityError::BadShift(_))));
    let int_base = HGParams::new(q(1, 2), q(1, 1), q(11, 6));
    assert!(matches!(plan_shift(&int_base, 1, 1, 0, -1, 0), Err(ContiguityError::BadShift(_))));
}
