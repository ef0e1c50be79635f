//! Property suites behind `verify`.

use minmod::curve::{
    critical_mass_exact, critical_temperature, curves_match, gamma_value, zhukovsky_identities, CriticalData,
    CurveSpec,
};
use minmod::detform::{
    kernel_k0, kernel_k0_direct, nonconnected_detprime, partition_sum, w2_differential_identity, w2_leading, x_of,
    c64, KernelMatrix,
};
use minmod::dscale::{default_grid, normalization_integral, scaling_fit, Lab};
use minmod::exact::{laurent_expand, q, qf, q_to_f64, Field, Gauss, Point, Poly, RatFunc, Var, Q};
use minmod::gd::{compatibility_check, flashka_newell_gauge, gd_polynomials, leading_coefficient_check, string_equation};
use minmod::toprec::{
    kernel_parity_check, loop_check, pole_structure_check, random_points, symmetry_check, w02_consistency, TRTable,
};
use minmod::wkb::{
    chain_rule_identity, chart_c_x, det_psi_leading, dpsi1_dt_eval, dpsi1_dt_squared, dpsi1_dt_z,
    dpsi1_pole_classification, poisson_bracket_check,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::commands::fit_checks;
use crate::report::Check;

pub const SUITES: [&str; 8] = ["exact", "gd", "curves", "tr", "detform", "dscale", "wkb", "all"];

fn rat(rng: &mut ChaCha8Rng) -> Q {
    let d: i64 = rng.gen_range(1..=9);
    Q::new(rng.gen_range(-20i64..=20).into(), d.into())
}

fn rand_poly(rng: &mut ChaCha8Rng, deg: usize) -> Poly<Q> {
    Poly::new((0..=deg).map(|_| rat(rng)).collect(), Var::X)
}

pub fn exact(seed: u64) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let mut ok = true;
    for _ in 0..20 {
        let a = rand_poly(&mut rng, 6);
        let mut d = rand_poly(&mut rng, 3);
        if d.is_zero() {
            d = Poly::one(Var::X);
        }
        let (qt, r) = a.divrem(&d);
        ok &= qt * d.clone() + r.clone() == a && r.degree().is_none_or(|k| k < d.degree().unwrap_or(0));
    }
    out.push(Check::outcome::<String>("poly division a = q*d + r", Ok(ok)));
    let mut ok = true;
    for _ in 0..20 {
        let g = Gauss::new(rat(&mut rng), rat(&mut rng));
        if !g.is_zero() {
            ok &= g.clone() * (Gauss::one() / g) == Gauss::one();
        }
    }
    out.push(Check::outcome::<String>("Gaussian inverse", Ok(ok)));
    let a = rat(&mut rng);
    let z = RatFunc::<Q>::var_fn(Var::Z);
    let f = (z.clone() - RatFunc::constant(a.clone(), Var::Z)).pow(-2).expect("nonzero");
    let s = laurent_expand(&f, &Point::Finite(a), 2);
    out.push(Check::exact("Laurent expansion of (z-a)^-2", format!("{} {}", s.low(), s.coeff(-2)), "-2 1"));
    let zi = z.inv().expect("nonzero");
    let g = (z.clone() * z.clone() + RatFunc::one(Var::Z)) / (z.clone() - RatFunc::constant(q(3), Var::Z));
    let back = g.compose(&zi).and_then(|h| h.compose(&zi));
    out.push(Check::outcome("z -> 1/z is an involution", back.map(|h| h == g)));
    out
}

pub fn gd() -> Vec<Check> {
    let mut out = Vec::new();
    out.push(Check::outcome("antiderivative exists for k <= 8", gd_polynomials(8).map(|_| true)));
    for k in 1..=8 {
        let got = leading_coefficient_check(k).map(|v| v.to_string()).unwrap_or_else(|e| e.to_string());
        out.push(Check::exact(format!("leading coefficient k={k}"), got, minmod::exact::central(k as u32)));
    }
    let pii = string_equation(1, &[q(1)]).map(|s| s.normal_form()).unwrap_or_else(|e| e.to_string());
    out.push(Check::exact("m=1 string equation", pii, "u'' = 2*u^3 + 4*t*u"));
    for m in 1..=3 {
        let mut t = vec![q(0); m];
        t[m - 1] = q(1);
        out.push(Check::outcome(format!("Lax compatibility m={m}"), compatibility_check(m, &t).map(|c| c.holds)));
    }
    for m in 1..=2 {
        out.push(Check::outcome(format!("J-conjugation m={m}"), flashka_newell_gauge(m).map(|_| true)));
    }
    out
}

fn cdata(m: usize, b: Q, e: Q) -> CriticalData {
    CriticalData::new(m, b, e).expect("valid critical data")
}

pub fn curves() -> Vec<Check> {
    let mut out = Vec::new();
    for m in 1..=10 {
        for (b, e) in [(q(1), q(0)), (q(2), qf(1, 2))] {
            out.push(Check::outcome(format!("gamma forms m={m} b={b} eps={e}"), gamma_value(&cdata(m, b, e)).map(|_| true)));
        }
    }
    for m in 1..=5 {
        for b in [q(1), q(2)] {
            for e in [q(0), qf(1, 2)] {
                let r = curves_match(&cdata(m, b.clone(), e.clone())).map(|r| r.remainder_zero);
                out.push(Check::outcome(format!("curve coincidence m={m} b={b} eps={e}"), r));
            }
        }
    }
    for u0 in [q(1), qf(3, 7)] {
        let r = CurveSpec::top(2, u0.clone()).map_err(|e| e.to_string()).and_then(|s| zhukovsky_identities(&s).map_err(|e| e.to_string()));
        out.push(Check::outcome(format!("parametrization identities u0={u0}"), r.map(|_| true)));
    }
    for m in 1..=3 {
        let cd = cdata(m, qf(3, 2), qf(1, 3));
        out.push(Check::exact(format!("semicircle mass m={m}"), critical_mass_exact(&cd), critical_temperature(&cd)));
    }
    out
}

fn table(m: usize, u0: Q) -> Result<TRTable, String> {
    let spec = CurveSpec::top(m, u0).map_err(|e| e.to_string())?;
    TRTable::new(spec).map_err(|e| e.to_string())
}

pub fn tr(seed: u64) -> Vec<Check> {
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for u0 in [q(1), qf(3, 7)] {
        let r = table(1, u0.clone()).and_then(|t| w02_consistency(&t, &qf(5, 3)).map_err(|e| e.to_string()));
        out.push(Check::outcome(format!("W_2^(0) = 1/(z1-z2)^2 u0={u0}"), r));
    }
    out.push(Check::outcome("kernel parity", kernel_parity_check(&qf(2, 5))));
    for m in 1..=2 {
        let t = match table(m, q(1)) {
            Ok(t) => t,
            Err(e) => {
                out.push(Check::outcome::<String>(format!("table m={m}"), Err(e)));
                continue;
            }
        };
        for (g, n) in [(0, 1), (0, 2), (0, 3), (1, 1), (1, 2), (2, 1)] {
            for k in 0..3 {
                let pts = random_points(&mut rng, n - 1);
                let r = loop_check(&t, g, n, &pts).map(|c| c.passed);
                out.push(Check::outcome(format!("loop m={m} ({g},{n}) tuple {k}"), r));
            }
        }
        let r = t.compute_all().map_err(|e| e.to_string()).and_then(|_| pole_structure_check(&t, seed).map_err(|e| e.to_string()));
        out.push(Check::outcome(format!("pole structure m={m}"), r.map(|v| v.iter().all(|c| c.passed))));
        for (g, n) in [(0, 3), (0, 4), (1, 2), (1, 3), (2, 2)] {
            out.push(Check::outcome(format!("symmetry m={m} ({g},{n})"), symmetry_check(&t, g, n, seed).map(|c| c.passed)));
        }
    }
    out
}

/// Random rational kernel data at n distinct points.
pub fn random_kernel(rng: &mut ChaCha8Rng, n: usize) -> KernelMatrix<Q> {
    let mut pts: Vec<Q> = Vec::new();
    while pts.len() < n {
        let p = rat(rng);
        if !pts.contains(&p) {
            pts.push(p);
        }
    }
    let off = (0..n).map(|i| (0..n).map(|j| if i == j { q(0) } else { rat(rng) }).collect()).collect();
    let diag = (0..n).map(|_| rat(rng)).collect();
    KernelMatrix::from_kernel(pts, off, diag).expect("distinct points")
}

pub fn detform(seed: u64) -> Vec<Check> {
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ok = true;
    for k in 0..20 {
        let km = random_kernel(&mut rng, 1 + k % 4);
        ok &= matches!((nonconnected_detprime(&km), partition_sum(&km)), (Ok(a), Ok(b)) if a == b);
    }
    out.push(Check::outcome::<String>("det' vs set-partition sum, 20 kernels", Ok(ok)));
    let g = |n: i64| Gauss::from_i64(n);
    let w = w2_leading(&g(2), &g(3), &g(1)).map(|w| w.z_form.to_string()).unwrap_or_else(|e| e.to_string());
    out.push(Check::exact("W2 at z=(2,3), u0=1", w, "6/25"));
    out.push(Check::outcome::<String>("W2 differential identity", Ok(w2_differential_identity(&qf(5, 2), &qf(3, 7)))));
    let r = kernel_k0(&g(2), &g(-3), &g(1)).map(|k| {
        let x = |z: i64| c64(&x_of(&g(z), &g(1)));
        let v = k.to_complex();
        kernel_k0_direct(x(2), x(-3), c64(&g(1))).iter().any(|d| (d - v).norm() <= 1e-12 * v.norm())
    });
    out.push(Check::outcome("K0 matches a sheet of the direct form", r));
    out
}

pub fn dscale(full_grid: bool) -> Vec<Check> {
    let mut out = Vec::new();
    for m in 1..=3 {
        for (b, e) in [(q(1), q(0)), (q(1), qf(1, 2)), (q(2), qf(-1, 3))] {
            let cd = cdata(m, b.clone(), e.clone());
            let tc = q_to_f64(&critical_temperature(&cd));
            match normalization_integral(&cd) {
                Ok(v) => out.push(Check::approx(format!("normalization m={m} b={b} eps={e}"), v, tc, 1e-10)),
                Err(err) => out.push(Check::outcome::<String>(format!("normalization m={m}"), Err(err.to_string()))),
            }
        }
    }
    let cd = cdata(1, q(1), qf(1, 2));
    let hod = Lab::new(&cd).and_then(|lab| {
        let t0 = 0.95 * lab.tc;
        let (st, _) = lab.solve_at(t0)?;
        let dt = -0.01 * lab.tc;
        let stepped = lab.hodograph_step(&st, dt)?;
        let (direct, _) = lab.solve(t0 + dt, &stepped)?;
        Ok(stepped.roots().iter().zip(direct.roots()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
    });
    match hod {
        Ok(d) => out.push(Check::below("hodograph step vs re-solve", d, 1e-8)),
        Err(e) => out.push(Check::outcome::<String>("hodograph step vs re-solve", Err(e.to_string()))),
    }
    if !full_grid {
        out.push(Check::skip("double-scaling grid", "pass --full"));
        return out;
    }
    for (m, b, e) in [(1, q(1), q(0)), (1, q(1), qf(1, 2)), (2, q(1), q(0))] {
        let cd = cdata(m, b.clone(), e.clone());
        match scaling_fit(&cd, &default_grid(&cd)) {
            Ok(f) => out.extend(fit_checks(&f).into_iter().map(|mut c| {
                c.name = format!("m={m} b={b} eps={e}: {}", c.name);
                c
            })),
            Err(err) => out.push(Check::outcome::<String>(format!("grid m={m} b={b} eps={e}"), Err(err.to_string()))),
        }
    }
    out
}

pub fn wkb() -> Vec<Check> {
    let mut out = Vec::new();
    for m in 1..=3 {
        let spec = match CurveSpec::top(m, q(1)) {
            Ok(s) => s,
            Err(e) => {
                out.push(Check::outcome::<String>(format!("spec m={m}"), Err(e.to_string())));
                continue;
            }
        };
        out.push(Check::outcome(format!("chain rule m={m}"), chain_rule_identity(&spec)));
        out.push(Check::outcome(format!("Poisson bracket m={m}"), poisson_bracket_check(&spec)));
        for z in [q(2), qf(1, 2), qf(-5, 3)] {
            let d = det_psi_leading(&spec, &z).map(|v| v.to_string()).unwrap_or_else(|e| e.to_string());
            out.push(Check::exact(format!("leading det m={m} z={z}"), d, "1"));
        }
    }
    let (z, u0, du0) = (q(2), q(1), q(1));
    let x = chart_c_x(&z, &u0);
    let r = dpsi1_dt_z(&z, &u0, &du0, &q(3)).and_then(|v| {
        let sq = dpsi1_dt_squared(&x, &u0, &du0, &q(3))?;
        Ok(v.clone() * v == sq)
    });
    out.push(Check::outcome("dpsi1/dt: z-form squared equals x-form", r));
    let e = dpsi1_dt_eval(&x, &u0, &du0, &q(3)).map(|v| v.to_string()).unwrap_or_else(|e| e.to_string());
    let zf = dpsi1_dt_z(&z, &u0, &du0, &q(3)).map(|v| v.to_string()).unwrap_or_else(|e| e.to_string());
    out.push(Check::exact("dpsi1/dt: eval equals z-form", e, zf));
    out.push(Check::outcome("dpsi1/dt poles in {0, ±i, ∞}", dpsi1_pole_classification(&u0, &du0, &q(3)).map(|_| true)));
    out
}

/// Run one suite by name; `None` for an unknown name.
pub fn run(name: &str, seed: u64, full: bool) -> Option<Vec<Check>> {
    let tag = |suite: &str, v: Vec<Check>| {
        v.into_iter()
            .map(|mut c| {
                c.name = format!("{suite}: {}", c.name);
                c
            })
            .collect::<Vec<_>>()
    };
    Some(match name {
        "exact" => exact(seed),
        "gd" => gd(),
        "curves" => curves(),
        "tr" => tr(seed),
        "detform" => detform(seed),
        "dscale" => dscale(true),
        "wkb" => wkb(),
        "all" => {
            let mut v = tag("exact", exact(seed));
            v.extend(tag("gd", gd()));
            v.extend(tag("curves", curves()));
            v.extend(tag("tr", tr(seed)));
            v.extend(tag("detform", detform(seed)));
            v.extend(tag("dscale", dscale(full)));
            v.extend(tag("wkb", wkb()));
            v
        }
        _ => return None,
    })
}
