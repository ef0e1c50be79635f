use minmod::curve::{
    critical_h, critical_mass_exact, critical_potential, critical_temperature, curves_match, gamma_value, lax_curve,
    odd_part, rescaled_curve, zhukovsky_identities, CriticalData, CurveSpec, G, XI,
};
use minmod::exact::{q, qf, Field, Poly, Scalar, Var, Q};
use proptest::prelude::*;

fn cd(m: usize, b: Q, eps: Q) -> CriticalData {
    CriticalData::new(m, b, eps).unwrap()
}

fn px(c: Vec<Q>) -> Poly<Q> {
    Poly::new(c, Var::X)
}

#[test]
fn validation() {
    assert!(CriticalData::new(0, q(1), q(0)).is_err());
    assert!(CriticalData::new(1, q(0), q(0)).is_err());
    assert!(CriticalData::new(1, q(1), q(1)).is_err());
    assert!(CurveSpec::new(2, vec![q(0), q(0)], q(1)).is_err());
    assert!(CurveSpec::new(1, vec![q(1)], q(0)).is_err());
}

#[test]
fn temperature_examples() {
    assert_eq!(critical_temperature(&cd(1, q(1), q(0))), qf(1, 16));
    for (b, e) in [(q(1), qf(1, 2)), (q(2), qf(-1, 3)), (qf(3, 2), qf(2, 5))] {
        let want = b.pow(4) * (q(1) + q(4) * e.clone() * e.clone()) / q(16);
        assert_eq!(critical_temperature(&cd(1, b.clone(), e.clone())), want);
        assert_eq!(critical_temperature(&cd(3, b.clone(), e.clone())), critical_temperature(&cd(3, b, -e)));
    }
    for m in 1..=4 {
        let c = cd(m, qf(3, 2), qf(1, 3));
        assert_eq!(critical_mass_exact(&c), critical_temperature(&c), "m = {m}");
    }
}

#[test]
fn potential_examples() {
    let c = cd(1, q(1), q(0));
    assert_eq!(critical_potential(&c), px(vec![q(0), qf(-1, 2), q(0), q(1)]));
    assert_eq!(critical_h(&c).unwrap(), px(vec![q(0), q(0), q(1)]));
    let c = cd(2, q(1), qf(1, 2));
    let want = px(vec![qf(-1, 2), q(1)]).pow(4);
    assert_eq!(critical_h(&c).unwrap(), want);
}

#[test]
fn gamma_examples() {
    for (b, e) in [(q(1), q(0)), (q(2), qf(1, 2))] {
        let want = q(-4) / (b.clone() * b.clone() * (q(1) - e.clone() * e.clone()));
        assert_eq!(gamma_value(&cd(1, b, e)).unwrap(), want);
    }
    assert_eq!(gamma_value(&cd(2, q(1), q(0))).unwrap(), qf(-16, 3));
    for m in 1..=10 {
        assert!(gamma_value(&cd(m, qf(5, 4), qf(-2, 7))).is_ok(), "m = {m}");
    }
}

#[test]
fn rescaled_examples() {
    let mut e = vec![0; 2];
    e[XI] = 1;
    assert_eq!(odd_part(1), minmod::exact::MPoly::monomial(q(1), &e));
    let p2 = odd_part(2);
    e[XI] = 3;
    assert_eq!(p2.coeff(&e), q(1));
    e[XI] = 1;
    e[G] = 1;
    assert_eq!(p2.coeff(&e), qf(1, 2));
    let rc = rescaled_curve(&cd(3, q(2), qf(1, 2))).unwrap();
    assert_eq!(rc.prefactor_sq, q(3));
    for xi in [qf(1, 3), q(2), qf(-5, 7)] {
        let g = qf(7, 5);
        let at = |x: Q| {
            let mut v = vec![q(0); 2];
            v[XI] = x;
            v[G] = g.clone();
            rc.odd_poly.eval(&v)
        };
        assert_eq!(at(-xi.clone()), -at(xi));
    }
}

#[test]
fn lax_curve_examples() {
    let u0 = qf(3, 7);
    let g = u0.clone() * u0.clone();
    let c1 = lax_curve(&CurveSpec::top(1, u0.clone()).unwrap()).unwrap();
    assert_eq!(c1.p, px(vec![g.clone(), q(0), q(-1)]) * px(vec![q(0), q(0), q(1)]));
    let c2 = lax_curve(&CurveSpec::top(2, u0.clone()).unwrap()).unwrap();
    let inner = px(vec![q(0), g.clone() / q(2), q(0), q(1)]);
    assert_eq!(c2.p, px(vec![g, q(0), q(-1)]) * inner.clone() * inner);
    for c in [&c1, &c2] {
        assert!(c.p.coeff(0).is_zero() && c.p.coeff(1).is_zero());
    }
}

#[test]
fn curves_coincide() {
    for m in 1..=5 {
        for b in [q(1), q(2)] {
            for e in [q(0), qf(1, 2)] {
                let r = curves_match(&cd(m, b.clone(), e.clone())).unwrap();
                let want = b.clone() * b.clone() * (q(1) - e.clone() * e.clone());
                assert_eq!(r.ratio, Scalar::Rational(want));
                assert_eq!(r.pi_power, 2);
            }
        }
    }
    assert_eq!(curves_match(&cd(1, q(1), q(0))).unwrap().ratio, Scalar::Rational(q(1)));
}

#[test]
fn zhukovsky() {
    zhukovsky_identities(&CurveSpec::top(1, qf(3, 7)).unwrap()).unwrap();
    zhukovsky_identities(&CurveSpec::top(2, q(-2)).unwrap()).unwrap();
}

fn rat(lo: i64, hi: i64) -> impl Strategy<Value = Q> {
    (lo..=hi, 1i64..=9).prop_map(|(n, d)| qf(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn pol_round_trip(m in 1usize..=4, b in rat(1, 20), e in (-8i64..=8).prop_map(|n| qf(n, 9))) {
        let c = cd(m, b.clone(), e.clone());
        let want = px(vec![-(b * e), q(1)]).pow(2 * m as u32);
        prop_assert_eq!(critical_h(&c).unwrap(), want);
    }

    #[test]
    fn eps_parity(m in 1usize..=4, b in rat(1, 20), e in (-8i64..=8).prop_map(|n| qf(n, 9))) {
        let v = critical_potential(&cd(m, b.clone(), e.clone()));
        let w = critical_potential(&cd(m, b, -e));
        let reflected = Poly::new(
            w.coeffs().iter().enumerate().map(|(k, c)| if k % 2 == 0 { -c.clone() } else { c.clone() }).collect(),
            Var::X,
        );
        prop_assert_eq!(v, reflected);
    }

    #[test]
    fn only_simple_zeros_at_branch_points(
        m in 1usize..=4,
        times in prop::collection::vec(rat(-9, 9), 4),
        u0 in rat(1, 9),
    ) {
        let times: Vec<Q> = times.into_iter().take(m).collect();
        prop_assume!(times.iter().any(|t| !t.is_zero()));
        let lc = lax_curve(&CurveSpec::new(m, times, u0.clone()).unwrap()).unwrap();
        prop_assert_eq!(lc.p.clone(), lc.sqrt_factor.clone() * lc.q_factor.clone() * lc.q_factor.clone());
        prop_assert!(lc.q_factor.is_odd());
        let (_, r) = lc.p.divrem(&lc.sqrt_factor.pow(2));
        prop_assume!(!lc.q_factor.eval(&u0).is_zero());
        prop_assert!(!r.is_zero());
    }
}
