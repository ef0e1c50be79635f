use minmod::curve::CurveSpec;
use minmod::exact::{q, qf, Gauss, RatFunc, Var, Q};
use minmod::toprec::{
    base_w01, base_w02, euler, kernel_parity_check, loop_check, pole_structure_check, symmetry_check, w02_consistency,
    Slot, TRTable,
};
use proptest::prelude::*;

fn table(m: usize, u0: Q) -> TRTable {
    TRTable::new(CurveSpec::top(m, u0).unwrap()).unwrap()
}

#[test]
fn w01_is_odd_under_inversion() {
    for m in 1..=3 {
        let t = table(m, qf(3, 2));
        let y = t.uniformization().y();
        let z = RatFunc::<Gauss>::var_fn(Var::Z);
        assert_eq!(y.compose(&z.inv().unwrap()).unwrap(), -y, "m = {m}");
    }
    let spec = CurveSpec::top(1, q(1)).unwrap();
    let w = base_w01(&spec).unwrap();
    let f = w.specialize(&[Slot::Free]).unwrap();
    for a in [q(1), q(-1)] {
        let ga = Gauss::real(a);
        assert!(f.eval(&ga).unwrap() == Gauss::real(q(0)));
        assert!(f.derivative().eval(&ga).unwrap() == Gauss::real(q(0)));
    }
    let t = table(1, q(1));
    let un = t.uniformization();
    let two = q(2);
    let want = un.y().eval(&Gauss::real(two.clone())).unwrap() * Gauss::real(un.dx.eval(&two).unwrap());
    assert_eq!(w.evaluate(&[two]).unwrap(), want);
}

#[test]
fn w02_examples() {
    let w = base_w02();
    assert_eq!(w.evaluate(&[q(2), q(3)]).unwrap(), Gauss::real(q(1)));
    assert_eq!(w.evaluate(&[qf(1, 3), qf(-2, 5)]).unwrap(), w.evaluate(&[qf(-2, 5), qf(1, 3)]).unwrap());
    assert!(w02_consistency(&table(1, q(1)), &qf(5, 2)).unwrap());
    assert!(w02_consistency(&table(2, qf(3, 7)), &qf(5, 2)).unwrap());
}

#[test]
fn kernel_parity() {
    for p in [q(2), qf(-3, 5), qf(7, 4)] {
        assert!(kernel_parity_check(&p).unwrap());
    }
}

#[test]
fn three_point_value() {
    let t = table(1, q(1));
    let w = t.compute(0, 3).unwrap();
    assert_eq!(w.evaluate(&[q(2), q(3), q(5)]).unwrap(), Gauss::new(q(0), qf(41, 2592)));
    assert_eq!(euler(0, 3), 1);
    let s = symmetry_check(&t, 0, 3, 7).unwrap();
    assert!(s.passed);
}

#[test]
fn one_one_pole_order() {
    for m in 1..=2 {
        let t = table(m, q(1));
        assert!(t.compute(1, 1).unwrap().max_pole_order() <= 4);
    }
}

#[test]
fn loop_equations() {
    let cases: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 1), (1, 2), (2, 1)];
    for m in 1..=2 {
        let t = table(m, qf(2, 3));
        for (g, n) in cases {
            if euler(g, n) >= 1 {
                t.compute(g, n).unwrap();
            }
            let pts: Vec<Q> = [q(3), qf(-5, 2), qf(7, 3)][..n - 1].to_vec();
            let r = loop_check(&t, g, n, &pts).unwrap();
            assert!(r.passed, "m = {m}, (g, n) = ({g}, {n}): {}", r.detail);
        }
    }
}

#[test]
fn ceiling_and_pole_structure() {
    let t = table(1, q(1));
    let keys = t.compute_all().unwrap();
    for k in [(0, 3), (0, 4), (0, 5), (1, 1), (1, 2), (1, 3), (2, 1), (2, 2)] {
        assert!(keys.contains(&k), "{k:?}");
    }
    let reports = pole_structure_check(&t, 11).unwrap();
    assert!(reports.iter().all(|r| r.passed));
    assert!(t.compute(3, 1).is_err());
}

#[test]
fn recomputation_is_deterministic() {
    let a = table(2, q(1));
    let b = table(2, q(1));
    for (g, n) in [(0, 4), (1, 2), (2, 1)] {
        assert_eq!(*a.compute(g, n).unwrap(), *b.compute(g, n).unwrap());
    }
    let cached = a.compute(1, 2).unwrap();
    assert_eq!(*a.compute(1, 2).unwrap(), *cached);
}

#[test]
fn bad_slots_rejected() {
    let t = table(1, q(1));
    let w = t.compute(0, 3).unwrap();
    assert!(w.specialize(&[Slot::Free]).is_err());
    assert!(base_w02().evaluate(&[q(2), q(2)]).is_err());
}

fn generic() -> impl Strategy<Value = Q> {
    (-9i64..=9, 1i64..=7).prop_map(|(n, d)| qf(n, d)).prop_filter("generic", |c| {
        let c2 = c * c;
        c2 != q(1) && c2 != q(0)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn spectator_relabeling(a in generic(), b in generic(), c in generic(), d in generic()) {
        let t = table(1, q(1));
        let w = t.compute(0, 4).unwrap();
        let v = w.evaluate(&[a.clone(), b.clone(), c.clone(), d.clone()]);
        let u = w.evaluate(&[a, c, b, d]);
        prop_assert_eq!(v, u);
    }

    #[test]
    fn specialization_commutes_with_evaluation(a in generic(), b in generic(), x in generic()) {
        let t = table(2, q(1));
        let w = t.compute(1, 3).unwrap();
        let f = w.specialize(&[Slot::Fixed(a.clone()), Slot::Free, Slot::Fixed(b.clone())]).unwrap();
        if let (Ok(lhs), Ok(rhs)) = (f.eval(&Gauss::real(x.clone())), w.evaluate(&[a, x, b])) {
            prop_assert_eq!(lhs, rhs);
        }
    }
}
