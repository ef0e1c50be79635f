use minmod::curve::CurveSpec;
use minmod::exact::{q, qf, Gauss, RatFunc, Scalar, Var, Q};
use minmod::wkb::{
    at_x_zero, chain_rule_identity, chart_c_x, det_from_components, det_psi_leading, dpsi1_dt_eval,
    dpsi1_dt_ratfunc, dpsi1_dt_squared, dpsi1_dt_z, dpsi1_pole_classification, du0_dt, dy_dt_times_root,
    poisson_bracket_check, quarter_ratio, Component, WkbError, WkbLeading,
};
use proptest::prelude::*;

fn top(m: usize, u0: Q) -> CurveSpec {
    CurveSpec::top(m, u0).unwrap()
}

#[test]
fn chain_rule_and_bracket() {
    for m in 1..=3 {
        for u0 in [q(1), qf(3, 7)] {
            assert!(chain_rule_identity(&top(m, u0.clone())).unwrap(), "m = {m}");
            assert!(poisson_bracket_check(&top(m, u0)).unwrap(), "m = {m}");
        }
    }
    let generic = CurveSpec::new(3, vec![qf(1, 2), q(-2), q(1)], q(1)).unwrap();
    assert!(chain_rule_identity(&generic).unwrap());
    assert!(poisson_bracket_check(&generic).unwrap());
}

#[test]
fn derivative_vanishes_at_x_zero() {
    for m in 1..=3 {
        let r = dy_dt_times_root(&top(m, q(1))).unwrap();
        assert_eq!(at_x_zero(&r, &qf(5, 3)), Some(q(0)), "m = {m}");
    }
}

#[test]
fn du0_from_relation() {
    assert_eq!(du0_dt(&[q(1)], &q(2)).unwrap(), qf(-1, 2));
    assert_eq!(du0_dt(&[q(0), q(1)], &q(1)).unwrap(), qf(-2, 3));
    assert!(du0_dt(&[q(1)], &q(0)).is_err());
}

#[test]
fn leading_determinant() {
    for m in 1..=3 {
        let spec = top(m, q(1));
        for z in [q(2), qf(1, 2), qf(-5, 3), qf(7, 11)] {
            assert_eq!(det_psi_leading(&spec, &z).unwrap(), Scalar::Rational(q(1)));
            let inv = q(1) / z.clone();
            assert_eq!(det_psi_leading(&spec, &inv).unwrap(), det_psi_leading(&spec, &z).unwrap());
        }
        for z in [q(0), q(1), q(-1)] {
            assert!(matches!(det_psi_leading(&spec, &z), Err(WkbError::SingularPoint(_))));
        }
    }
}

#[test]
fn component_structure() {
    let u0 = qf(3, 2);
    let c = WkbLeading::components(&top(1, u0.clone())).unwrap();
    let r = quarter_ratio(&u0).unwrap();
    assert_eq!(c[0].component, Component::Psi);
    assert_eq!(c[0].g_fourth, r);
    assert_eq!(c[3].g_fourth, r.inv().unwrap());
    assert_eq!(c.iter().map(|w| w.phase).sum::<i8>(), 0);
    let z = RatFunc::<Q>::var_fn(Var::Z);
    let one = RatFunc::one(Var::Z);
    let want = -((z.clone() + one.clone()) * (z.clone() + one.clone())) / ((z.clone() - one.clone()) * (z - one));
    assert_eq!(r, want);

    let mut flat = c.clone();
    flat[3].g_fourth = RatFunc::one(Var::Z);
    assert!(matches!(det_from_components(&flat, &q(2)), Err(WkbError::DetMismatch(_))));
}

#[test]
fn dpsi1_examples() {
    let (u0, du0) = (q(1), q(1));
    assert_eq!(dpsi1_dt_eval(&q(0), &u0, &du0, &q(0)).unwrap(), Scalar::Rational(q(0)));
    let x = chart_c_x(&q(2), &u0);
    assert_eq!(x, qf(-3, 5));
    let zf = dpsi1_dt_z(&q(2), &u0, &du0, &q(0)).unwrap();
    assert_eq!(zf, qf(18, 25));
    assert_eq!(zf.clone() * zf.clone(), dpsi1_dt_squared(&x, &u0, &du0, &q(0)).unwrap());
    assert_eq!(dpsi1_dt_eval(&x, &u0, &du0, &q(0)).unwrap(), Scalar::Rational(zf));

    let only_u2 = dpsi1_dt_eval(&x, &u0, &q(0), &q(3)).unwrap();
    assert_eq!(only_u2, Scalar::Rational(qf(3, 2)));
    assert!(dpsi1_dt_eval(&u0, &u0, &du0, &q(1)).is_err());
    assert!(dpsi1_dt_eval(&q(-1), &u0, &du0, &q(1)).is_err());
    assert!(matches!(dpsi1_dt_eval(&qf(1, 3), &u0, &du0, &q(1)).unwrap(), Scalar::Float(_)));
    assert!(matches!(dpsi1_dt_eval(&q(5), &q(3), &du0, &q(1)).unwrap(), Scalar::Gauss(_)));
}

#[test]
fn dpsi1_poles() {
    let pc = dpsi1_pole_classification(&q(1), &q(1), &q(3)).unwrap();
    assert_eq!(pc.finite, vec![("0".to_string(), 1), ("1*i".to_string(), 2), ("-1*i".to_string(), 2)]);
    assert_eq!(pc.at_infinity, 3);
    let pc = dpsi1_pole_classification(&qf(2, 3), &q(0), &q(1)).unwrap();
    assert_eq!(pc.finite, vec![("0".to_string(), 1)]);
    assert_eq!(pc.at_infinity, 0);
}

fn rat() -> impl Strategy<Value = Q> {
    (-9i64..=9, 1i64..=6).prop_map(|(n, d)| qf(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn z_form_squares_to_x_form(z in rat(), u0 in rat(), du0 in rat(), u2 in rat()) {
        prop_assume!(z != q(0) && u0 != q(0));
        let x = chart_c_x(&z, &u0);
        let v = dpsi1_dt_z(&z, &u0, &du0, &u2).unwrap();
        prop_assert_eq!(v.clone() * v.clone(), dpsi1_dt_squared(&x, &u0, &du0, &u2).unwrap());
        let f = dpsi1_dt_ratfunc(&u0, &du0, &u2).unwrap();
        prop_assert_eq!(f.eval(&Gauss::real(z)).unwrap(), Gauss::real(v));
    }

    #[test]
    fn det_is_one_everywhere(m in 1usize..=3, u0 in rat(), z in rat()) {
        prop_assume!(u0 != q(0) && z != q(0) && z != q(1) && z != q(-1));
        prop_assert_eq!(det_psi_leading(&top(m, u0), &z).unwrap(), Scalar::Rational(q(1)));
    }
}
