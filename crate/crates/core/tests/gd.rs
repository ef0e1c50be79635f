use minmod::exact::{central, q, qf, Poly, Var, Q};
use minmod::gd::{
    compatibility_check, compatibility_check_scaled, compatibility_check_shifted, flashka_newell_gauge, gd_polynomials,
    lax_matrices, leading_coefficient_check, string_equation, DiffPoly, XtPoly,
};
use proptest::prelude::*;

fn u(j: usize) -> DiffPoly {
    DiffPoly::u(j)
}

#[test]
fn first_polynomials() {
    let (h0, c0) = gd_polynomials(0).unwrap();
    assert_eq!(h0, u(0));
    assert_eq!(c0, u(0).pow(2).scale(&qf(1, 2)));
    let (h1, c1) = gd_polynomials(1).unwrap();
    assert_eq!(h1, u(0).pow(3).scale(&qf(1, 2)) - u(2).scale(&qf(1, 4)));
    let want = u(0).pow(4).scale(&qf(3, 8)) - (u(0) * u(2)).scale(&qf(1, 4)) + u(1).pow(2).scale(&qf(1, 8));
    assert_eq!(c1, want);
}

#[test]
fn leading_coefficients() {
    assert_eq!(leading_coefficient_check(0).unwrap(), q(1));
    assert_eq!(leading_coefficient_check(1).unwrap(), qf(1, 2));
    assert_eq!(leading_coefficient_check(3).unwrap(), qf(5, 16));
    for k in 0..=8 {
        let (h, _) = gd_polynomials(k).unwrap();
        assert_eq!(h.grade_part(0), u(0).pow(2 * k as u32 + 1).scale(&central(k as u32)), "k = {k}");
    }
}

#[test]
fn grading_is_even() {
    for k in 0..=6 {
        let (h, c) = gd_polynomials(k).unwrap();
        assert!(h.grades().iter().all(|g| g % 2 == 0), "hat k = {k}");
        assert!(c.grades().iter().all(|g| g % 2 == 0), "check k = {k}");
    }
}

#[test]
fn check_is_antiderivative() {
    for k in 0..=6 {
        let (h, c) = gd_polynomials(k).unwrap();
        assert!((c.dt() - u(0) * h.dt()).is_zero(), "k = {k}");
    }
}

#[test]
fn painleve_two() {
    let se = string_equation(1, &[q(1)]).unwrap();
    assert_eq!(se.normal_form(), "u'' = 2*u^3 + 4*t*u");
    assert_eq!(se.top_coefficient(), qf(-1, 4));
    assert_eq!(se.u0_relation(), Poly::new(vec![q(0), q(0), qf(1, 2)], Var::U));
    let se2 = string_equation(2, &[q(0), q(1)]).unwrap();
    assert_eq!(se2.u0_relation(), Poly::new(vec![q(0), q(0), q(0), q(0), qf(3, 8)], Var::U));
    assert_eq!(se2.top_coefficient(), qf(1, 16));
    assert!(string_equation(1, &[]).is_err());
    assert!(string_equation(2, &[q(0), q(0)]).is_err());
}

#[test]
fn lax_examples() {
    let t = lax_matrices(1, &[q(1)]).unwrap();
    assert_eq!(t.a, XtPoly::from_diffpoly(u(1).scale(&qf(1, 2)), 0, 0));
    assert_eq!(t.b, XtPoly::from_diffpoly(u(0), 0, 0));
    assert_eq!(t.c, XtPoly::from_diffpoly(DiffPoly::one(), 2, 0) + XtPoly::from_diffpoly(u(0).pow(2).scale(&qf(1, 2)), 0, 0));
    assert_eq!(t.a.x_degree(), Some(0));

    let t2 = lax_matrices(2, &[q(0), q(1)]).unwrap();
    let (_, c1) = gd_polynomials(1).unwrap();
    let want = XtPoly::from_diffpoly(DiffPoly::one(), 4, 0)
        + XtPoly::from_diffpoly(u(0).pow(2).scale(&qf(1, 2)), 2, 0)
        + XtPoly::from_diffpoly(c1, 0, 0);
    assert_eq!(t2.c, want);
}

#[test]
fn compatibility() {
    assert!(compatibility_check(1, &[q(1)]).unwrap().holds);
    let broken = compatibility_check_shifted(1, &[q(1)], &q(1)).unwrap();
    assert!(!broken.holds);
    assert!(broken.witness.is_some());
    assert!(compatibility_check(2, &[q(0), q(1)]).unwrap().holds);
    assert!(compatibility_check(2, &[qf(2, 3), q(-1)]).unwrap().holds);
}

#[test]
fn gauge_shapes() {
    for m in 1..=2 {
        let g = flashka_newell_gauge(m).unwrap();
        let x = XtPoly::x();
        assert!(g.rtilde[0][0].re.is_zero());
        assert_eq!(g.rtilde[0][0].im, -x.clone());
        assert_eq!(g.rtilde[1][1].im, x);
        assert_eq!(g.rtilde[0][1].re, XtPoly::from_diffpoly(u(0), 0, 0));
        assert!(g.rtilde[0][1].im.is_zero());
    }
    let g = flashka_newell_gauge(1).unwrap();
    assert_eq!(g.dtilde[0][1].re, XtPoly::from_diffpoly(u(0).scale(&q(8)), 1, 0));
    assert_eq!(g.dtilde[0][1].im, XtPoly::from_diffpoly(u(1).scale(&q(4)), 0, 0));
    assert!(flashka_newell_gauge(3).is_err());
}

#[test]
fn memo_is_consistent_across_threads() {
    let handles: Vec<_> = (0..4).map(|_| std::thread::spawn(|| gd_polynomials(7).unwrap())).collect();
    let first = gd_polynomials(7).unwrap();
    for h in handles {
        assert_eq!(h.join().unwrap(), first);
    }
}

fn nonzero_rat() -> impl Strategy<Value = Q> {
    (1i64..=9, 1i64..=7, any::<bool>()).prop_map(|(n, d, s)| if s { qf(n, d) } else { qf(-n, d) })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn compatibility_scale_invariant(l in nonzero_rat(), t1 in nonzero_rat()) {
        let base = compatibility_check(1, std::slice::from_ref(&t1)).unwrap().holds;
        prop_assert!(base);
        prop_assert_eq!(compatibility_check_scaled(1, &[t1], &l).unwrap().holds, base);
    }

    #[test]
    fn evaluation_respects_products(k in 0usize..4, jet in prop::collection::vec(-5i64..=5, 12)) {
        let jet: Vec<Q> = jet.into_iter().map(q).collect();
        let (h, c) = gd_polynomials(k).unwrap();
        prop_assert_eq!((h.clone() * c.clone()).eval(&jet), h.eval(&jet) * c.eval(&jet));
    }
}
