use minmod::curve::{critical_temperature, CriticalData};
use minmod::dscale::{
    default_grid, grid, hodograph_step, normalization_integral, scaling_fit, solve_endpoints, theta_quadrature,
    x0_solve, DscaleError, EndpointState, Lab,
};
use minmod::exact::{q, q_to_f64, qf, Q};
use proptest::prelude::*;

fn cd(m: usize, b: Q, eps: Q) -> CriticalData {
    CriticalData::new(m, b, eps).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn quadrature_oracle() {
    let v = theta_quadrature(|t| t.sin().powi(2)).unwrap();
    assert!((v - std::f64::consts::FRAC_PI_2).abs() < 1e-13);
    let semicircle = normalization_integral(&cd(1, q(1), q(0))).unwrap();
    assert!((semicircle - 1.0 / 16.0).abs() < 1e-14);
}

#[test]
fn normalization_matches_temperature() {
    for m in 1..=3 {
        for (b, e) in [(q(1), q(0)), (q(1), qf(1, 2)), (q(2), qf(-1, 3))] {
            let c = cd(m, b, e);
            let tc = q_to_f64(&critical_temperature(&c));
            assert!(rel(normalization_integral(&c).unwrap(), tc) < 1e-10, "m = {m}");
        }
    }
}

#[test]
fn symmetric_case() {
    let lab = Lab::new(&cd(1, q(1), q(0))).unwrap();
    for frac in [0.9, 0.99, 0.999] {
        let (st, res) = lab.solve_at(frac * lab.tc).unwrap();
        assert!(res < 1e-10);
        assert!((st.a1 + st.b2).abs() < 1e-10 && (st.b1 + st.a2).abs() < 1e-10);
        assert!(st.x0.abs() < 1e-12);
        assert!((lab.mass(&st).unwrap() - 1.0).abs() < 1e-8);
        assert!(lab.density_nonnegative(&st, 50));
    }
}

#[test]
fn merging_point_approached() {
    let c = cd(1, q(1), qf(1, 2));
    let lab = Lab::new(&c).unwrap();
    let mut gap = f64::INFINITY;
    for frac in [0.99, 0.999, 0.9999] {
        let (st, _) = lab.solve_at(frac * lab.tc).unwrap();
        assert!(st.a1 < st.b1 && st.b1 <= st.x0 && st.x0 <= st.a2 && st.a2 < st.b2);
        let d = (st.a2 - lab.be).abs();
        assert!(d < gap);
        gap = d;
        let via_free = solve_endpoints(&c, st.t, &st).unwrap();
        assert!((via_free.a2 - st.a2).abs() < 1e-10);
    }
}

#[test]
fn x0_examples() {
    let st = EndpointState { a1: -1.0, b1: -0.1, a2: 0.1, b2: 1.0, t: 0.05, x0: 0.0 };
    assert!(x0_solve(&st).unwrap().abs() < 1e-14);
    let narrow = EndpointState { a1: -1.0, b1: 0.3, a2: 0.3 + 1e-7, b2: 1.2, t: 0.05, x0: 0.0 };
    assert!((x0_solve(&narrow).unwrap() - (0.3 + 5e-8)).abs() < 1e-9);
    let gen = EndpointState { a1: -1.3, b1: -0.2, a2: 0.4, b2: 0.9, t: 0.05, x0: 0.0 };
    let x0 = x0_solve(&gen).unwrap();
    let (mid, half) = ((gen.b1 + gen.a2) / 2.0, (gen.a2 - gen.b1) / 2.0);
    let resid = theta_quadrature(|th| {
        let z = mid + half * th.cos();
        (z - x0) / ((z - gen.a1) * (gen.b2 - z)).sqrt()
    })
    .unwrap();
    assert!(resid.abs() < 1e-12);
}

#[test]
fn hodograph_matches_resolve() {
    let c = cd(1, q(1), qf(1, 2));
    let lab = Lab::new(&c).unwrap();
    let t0 = 0.95 * lab.tc;
    let (st, _) = lab.solve_at(t0).unwrap();
    let dt = -0.01 * lab.tc;
    let stepped = hodograph_step(&c, &st, dt).unwrap();
    let (direct, _) = lab.solve(t0 + dt, &stepped).unwrap();
    let diff = stepped.roots().iter().zip(direct.roots()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    assert!(diff < 1e-8, "{diff}");
}

#[test]
fn scaling_targets() {
    for (m, b, e) in [(1, q(1), q(0)), (1, q(1), qf(1, 2)), (2, q(1), q(0))] {
        let c = cd(m, b, e);
        let f = scaling_fit(&c, &default_grid(&c)).unwrap();
        let nu = 1.0 / (2 * m) as f64;
        assert!(rel(f.nu_hat, nu) < 0.02, "m = {m}: nu {}", f.nu_hat);
        assert!(rel(f.gamma2m_hat, f.gamma2m_abs_exact) < 0.05, "m = {m}: gamma {}", f.gamma2m_hat);
        assert!(f.alpha_plus_gamma_rel < 1e-2);
        assert!(rel(f.a1_slope, f.a1_slope_exact) < 1e-4, "a1 {} vs {}", f.a1_slope, f.a1_slope_exact);
        assert!(rel(f.b2_slope, f.b2_slope_exact) < 1e-4, "b2 {} vs {}", f.b2_slope, f.b2_slope_exact);
        assert!(f.max_mass_residual < 1e-8);
        assert!(f.density_nonnegative);
        assert!(f.residuals.iter().all(|r| r.is_finite()));
        assert_eq!(f.to_csv().lines().count(), f.rows.len() + 1);
    }
    let c = cd(1, q(1), q(0));
    let f = scaling_fit(&c, &grid(&c, 3, 3)).unwrap();
    assert!(f.symmetry_residual < 1e-10);
}

#[test]
fn fit_rejects_bad_grids() {
    let c = cd(1, q(1), q(0));
    let tc = q_to_f64(&critical_temperature(&c));
    assert!(matches!(scaling_fit(&c, &[0.5 * tc, 0.6 * tc]), Err(DscaleError::InsufficientData(2))));
    let g = grid(&c, 1, 3);
    let mut rev = g.clone();
    rev.reverse();
    assert!(scaling_fit(&c, &rev).is_err());
    let lab = Lab::new(&c).unwrap();
    assert!(lab.solve(2.0 * tc, &lab.seed(0.99 * tc)).is_err());
}

#[test]
fn grid_shape() {
    let c = cd(1, q(1), q(0));
    let g = default_grid(&c);
    assert_eq!(g.len(), 21);
    assert!(g.windows(2).all(|w| w[0] < w[1]));
    let tc = q_to_f64(&critical_temperature(&c));
    assert!(rel(tc - g[0], 1e-2 * tc) < 1e-12);
    assert!(rel(tc - g[20], 1e-6 * tc) < 1e-6);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn mass_is_one(e in -3i64..=3, b in 1i64..=3, frac in 0.9f64..0.999) {
        let lab = Lab::new(&cd(1, qf(b, 2) + q(1), qf(e, 8))).unwrap();
        let (st, _) = lab.solve_at(frac * lab.tc).unwrap();
        prop_assert!((lab.mass(&st).unwrap() - 1.0).abs() < 1e-8);
        prop_assert!(lab.density_nonnegative(&st, 50));
    }
}
