//! Single-shot subcommands.

use std::fs;

use minmod::curve::{
    critical_h, critical_mass_exact, critical_potential, critical_temperature, curves_match, gamma_value, CriticalData,
    CurveSpec,
};
use minmod::detform::{
    connected_from_kernel, kernel_k0, nonconnected_detprime, partition_sum, w2_leading, KernelMatrix,
};
use minmod::dscale::{grid, scaling_fit};
use minmod::exact::{central, parse_q, Gauss, Scalar, Q};
use minmod::gd::{compatibility_check, leading_coefficient_check, string_equation};
use minmod::toprec::{loop_check, symmetry_check, TRTable};
use serde_json::{json, Value};

use crate::report::{Check, RunReport};

pub type CmdResult = Result<RunReport, String>;

pub fn parse_rat(s: &str) -> Result<Q, String> {
    parse_q(s).ok_or_else(|| format!("not a rational number: {s}"))
}

pub fn parse_rat_list(s: &str) -> Result<Vec<Q>, String> {
    s.split(',').map(parse_rat).collect()
}

fn qs(v: &Q) -> Value {
    Value::String(v.to_string())
}

fn poly_coeffs(p: &minmod::exact::Poly<Q>) -> Value {
    Value::Array(p.coeffs().iter().map(qs).collect())
}

/// Attach a domain error as a failing check.
fn fail(mut r: RunReport, name: &str, e: impl std::fmt::Display) -> RunReport {
    r.checks.push(Check::outcome::<String>(name, Err(e.to_string())));
    r
}

pub fn curve(m: usize, b: &str, eps: &str) -> CmdResult {
    let (bq, eq) = (parse_rat(b)?, parse_rat(eps)?);
    let mut r = RunReport::new("curve", json!({"m": m, "b": qs(&bq), "eps": qs(&eq)}));
    let cd = match CriticalData::new(m, bq, eq) {
        Ok(cd) => cd,
        Err(e) => return Ok(fail(r, "critical data", e)),
    };
    let tc = critical_temperature(&cd);
    let mut results = json!({
        "T_c": qs(&tc),
        "potential_derivative": poly_coeffs(&critical_potential(&cd)),
    });
    match gamma_value(&cd) {
        Ok(g) => {
            results["gamma_2m"] = qs(&g);
            r.checks.push(Check::outcome::<String>("gamma closed forms agree", Ok(true)));
        }
        Err(e) => r.checks.push(Check::outcome::<String>("gamma closed forms agree", Err(e.to_string()))),
    }
    match critical_h(&cd) {
        Ok(h) => results["h"] = poly_coeffs(&h),
        Err(e) => r.checks.push(Check::outcome::<String>("h", Err(e.to_string()))),
    }
    match curves_match(&cd) {
        Ok(mr) => {
            results["curve_ratio_over_pi2"] = json!(mr.ratio);
            r.checks.push(Check::outcome::<String>("rescaled curve proportional to Lax curve", Ok(mr.remainder_zero)));
        }
        Err(e) => r.checks.push(Check::outcome::<String>("rescaled curve proportional to Lax curve", Err(e.to_string()))),
    }
    r.checks.push(Check::exact("semicircle mass equals T_c", critical_mass_exact(&cd), &tc));
    r.results = results;
    Ok(r)
}

/// Flatten a curve report to `key,value` lines.
pub fn curve_csv(r: &RunReport) -> String {
    let mut out = String::from("key,value\n");
    if let Value::Object(map) = &r.results {
        for (k, v) in map {
            let s = match v {
                Value::Array(a) => a.iter().map(|x| x.as_str().unwrap_or_default().to_string()).collect::<Vec<_>>().join(" "),
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            out.push_str(&format!("{k},{s}\n"));
        }
    }
    for c in &r.checks {
        out.push_str(&format!("check:{},{}\n", c.name, serde_json::to_value(c.status).unwrap().as_str().unwrap_or("")));
    }
    out
}

pub fn stringeq(m: usize, times: Option<&str>) -> CmdResult {
    let times = match times {
        Some(s) => parse_rat_list(s)?,
        None => {
            let mut t = vec![Q::from_integer(0.into()); m];
            if m > 0 {
                t[m - 1] = Q::from_integer(1.into());
            }
            t
        }
    };
    if times.len() != m {
        return Err(format!("expected {m} times, got {}", times.len()));
    }
    let mut r = RunReport::new("stringeq", json!({"m": m, "times": times.iter().map(qs).collect::<Vec<_>>()}));
    let se = match string_equation(m, &times) {
        Ok(se) => se,
        Err(e) => return Ok(fail(r, "string equation", e)),
    };
    r.results = json!({
        "normal_form": se.normal_form(),
        "top_coefficient": qs(&se.top_coefficient()),
        "u0_relation": poly_coeffs(&se.u0_relation()),
    });
    for k in 1..=se.order {
        let c = leading_coefficient_check(k).map(|v| v.to_string()).unwrap_or_else(|e| e.to_string());
        r.checks.push(Check::exact(format!("leading coefficient of R_{k}"), c, central(k as u32)));
    }
    if m <= 3 {
        let c = compatibility_check(m, &times).map(|c| c.holds);
        r.checks.push(Check::outcome(format!("Lax compatibility m={m}"), c));
    } else {
        r.checks.push(Check::skip("Lax compatibility", "m > 3"));
    }
    Ok(r)
}

/// W′ with W = i^χ·W′.
fn real_part_of_phase(v: &Gauss, chi: i64) -> Gauss {
    let mut w = v.clone();
    for _ in 0..chi.rem_euclid(4) {
        w = w * (-Gauss::i());
    }
    w
}

pub fn tr(m: usize, u0: &str, g: usize, n: usize, at: Option<&str>, seed: u64) -> CmdResult {
    let u0q = parse_rat(u0)?;
    let pts = at.map(parse_rat_list).transpose()?;
    let mut r = RunReport::new(
        "tr",
        json!({"m": m, "u0": qs(&u0q), "g": g, "n": n, "at": pts.as_ref().map(|p| p.iter().map(qs).collect::<Vec<_>>())}),
    );
    let table = match CurveSpec::top(m, u0q).map_err(|e| e.to_string()).and_then(|s| TRTable::new(s).map_err(|e| e.to_string())) {
        Ok(t) => t,
        Err(e) => return Ok(fail(r, "table", e)),
    };
    let c = match table.compute(g, n) {
        Ok(c) => c,
        Err(e) => return Ok(fail(r, "compute", e)),
    };
    let chi = c.euler();
    let mut results = json!({
        "euler_characteristic": chi,
        "term_count": c.term_count(),
        "max_pole_order": c.max_pole_order(),
    });
    if let Some(p) = &pts {
        match c.evaluate(p) {
            Ok(v) => {
                results["value"] = json!(Scalar::from_gauss(v.clone()));
                results["value_over_i_chi"] = json!(Scalar::from_gauss(real_part_of_phase(&v, chi)));
                if p.len() >= 2 {
                    let mut rev = p.clone();
                    rev.reverse();
                    let back = c.evaluate(&rev).map(|b| b.to_string()).unwrap_or_else(|e| e.to_string());
                    r.checks.push(Check::exact("value invariant under argument reversal", back, &v));
                }
            }
            Err(e) => r.checks.push(Check::outcome::<String>("evaluate", Err(e.to_string()))),
        }
    }
    if n >= 2 {
        r.checks.push(Check::outcome("symmetry", symmetry_check(&table, g, n, seed).map(|c| c.passed)));
    }
    r.results = results;
    Ok(r)
}

pub fn loopcheck(m: usize, u0: &str, g: usize, n: usize, points: &str) -> CmdResult {
    let u0q = parse_rat(u0)?;
    let pts = if points.trim().is_empty() { Vec::new() } else { parse_rat_list(points)? };
    let mut r = RunReport::new(
        "loopcheck",
        json!({"m": m, "u0": qs(&u0q), "g": g, "n": n, "points": pts.iter().map(qs).collect::<Vec<_>>()}),
    );
    let table = match CurveSpec::top(m, u0q).map_err(|e| e.to_string()).and_then(|s| TRTable::new(s).map_err(|e| e.to_string())) {
        Ok(t) => t,
        Err(e) => return Ok(fail(r, "table", e)),
    };
    match loop_check(&table, g, n, &pts) {
        Ok(rep) => {
            r.results = json!({"detail": rep.detail});
            r.checks.push(Check::outcome::<String>(format!("loop equation ({g},{n})"), Ok(rep.passed)));
        }
        Err(e) => r.checks.push(Check::outcome::<String>(format!("loop equation ({g},{n})"), Err(e.to_string()))),
    }
    Ok(r)
}

fn field_q(v: &Value, key: &str) -> Result<Q, String> {
    let x = v.get(key).ok_or_else(|| format!("missing field {key}"))?;
    value_q(x)
}

fn value_q(x: &Value) -> Result<Q, String> {
    match x {
        Value::String(s) => parse_rat(s),
        Value::Number(n) => parse_rat(&n.to_string()),
        other => Err(format!("expected a rational, got {other}")),
    }
}

fn field_vec(v: &Value, key: &str) -> Result<Vec<Q>, String> {
    v.get(key)
        .and_then(Value::as_array)
        .ok_or_else(|| format!("missing array {key}"))?
        .iter()
        .map(value_q)
        .collect()
}

fn field_mat(v: &Value, key: &str) -> Result<Vec<Vec<Q>>, String> {
    v.get(key)
        .and_then(Value::as_array)
        .ok_or_else(|| format!("missing matrix {key}"))?
        .iter()
        .map(|row| row.as_array().ok_or_else(|| format!("{key}: rows must be arrays"))?.iter().map(value_q).collect())
        .collect()
}

fn kernel_from_json(v: &Value) -> Result<KernelMatrix<Q>, String> {
    let points = field_vec(v, "points")?;
    let offdiag = field_mat(v, "offdiag")?;
    let diag = field_vec(v, "diag")?;
    let km = if v.get("pairprod").is_some() {
        KernelMatrix::new(points, offdiag, diag, field_mat(v, "pairprod")?)
    } else {
        KernelMatrix::from_kernel(points, offdiag, diag)
    };
    km.map_err(|e| e.to_string())
}

pub fn detform(op: &str, input: &str) -> CmdResult {
    let text = fs::read_to_string(input).map_err(|e| format!("{input}: {e}"))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| format!("{input}: {e}"))?;
    let mut r = RunReport::new("detform", json!({"op": op, "input": v.clone()}));
    let gz = |k: &str| field_q(&v, k).map(Gauss::real);
    match op {
        "k0" => {
            let (z1, z2, u0) = (gz("z1")?, gz("z2")?, gz("u0")?);
            match kernel_k0(&z1, &z2, &u0) {
                Ok(s) => {
                    let c = s.to_complex();
                    r.results = json!({
                        "coeff": Scalar::from_gauss(s.coeff.clone()),
                        "radicand": Scalar::from_gauss(s.radicand.clone()),
                        "numeric": [c.re, c.im],
                    });
                    r.checks.push(Check::exact("K0 squared", s.square(), s.coeff.clone() * s.coeff.clone() * s.radicand));
                }
                Err(e) => return Ok(fail(r, "k0", e)),
            }
        }
        "w2" => {
            let (z1, z2, u0) = (gz("z1")?, gz("z2")?, gz("u0")?);
            match w2_leading(&z1, &z2, &u0) {
                Ok(w) => {
                    r.results = json!({"z_form": Scalar::from_gauss(w.z_form.clone()), "x_form": Scalar::from_gauss(w.x_form.clone())});
                    r.checks.push(Check::exact("x-form equals z-form", w.x_form, w.z_form));
                }
                Err(e) => return Ok(fail(r, "w2", e)),
            }
        }
        "connected" => {
            let km = kernel_from_json(&v)?;
            let subset: Vec<usize> = match v.get("subset").and_then(Value::as_array) {
                Some(a) => a.iter().map(|x| x.as_u64().map(|k| k as usize).ok_or("subset entries must be indices")).collect::<Result<_, _>>()?,
                None => (0..km.len()).collect(),
            };
            match connected_from_kernel(&km, &subset) {
                Ok(w) => r.results = json!({"connected": qs(&w)}),
                Err(e) => return Ok(fail(r, "connected", e)),
            }
        }
        "detprime" => {
            let km = kernel_from_json(&v)?;
            match (nonconnected_detprime(&km), partition_sum(&km)) {
                (Ok(d), Ok(p)) => {
                    r.results = json!({"detprime": qs(&d), "partition_sum": qs(&p)});
                    r.checks.push(Check::exact("det' equals sum over set partitions", &d, &p));
                }
                (Err(e), _) | (_, Err(e)) => return Ok(fail(r, "detprime", e)),
            }
        }
        other => return Err(format!("unknown op {other}; expected k0, w2, connected or detprime")),
    }
    Ok(r)
}

pub struct DscaleOut {
    pub report: RunReport,
    pub csv: Option<String>,
}

pub fn dscale(m: usize, b: &str, eps: &str, decades: usize, per_decade: usize) -> Result<DscaleOut, String> {
    let (bq, eq) = (parse_rat(b)?, parse_rat(eps)?);
    let mut r = RunReport::new(
        "dscale",
        json!({"m": m, "b": b.parse::<f64>().ok(), "eps": eps.parse::<f64>().ok(), "decades": decades, "per_decade": per_decade}),
    );
    let cd = match CriticalData::new(m, bq, eq) {
        Ok(cd) => cd,
        Err(e) => return Ok(DscaleOut { report: fail(r, "critical data", e), csv: None }),
    };
    let fit = match scaling_fit(&cd, &grid(&cd, decades, per_decade)) {
        Ok(f) => f,
        Err(e) => return Ok(DscaleOut { report: fail(r, "scaling fit", e), csv: None }),
    };
    r.checks.extend(fit_checks(&fit));
    r.results = serde_json::to_value(&fit).expect("fit serializes");
    Ok(DscaleOut { csv: Some(fit.to_csv()), report: r })
}

/// Tolerances of the double-scaling targets.
pub fn fit_checks(f: &minmod::dscale::ScalingFit) -> Vec<Check> {
    let m = f.m as f64;
    vec![
        Check::approx("nu_hat vs 1/(2m)", f.nu_hat, 1.0 / (2.0 * m), 0.02),
        Check::approx("(a2-b*eps)^(2m)/(Tc-T) vs |gamma^(2m)|", f.gamma2m_hat, f.gamma2m_abs_exact, 0.05),
        Check::below("|alpha+gamma|/|gamma| at finest point", f.alpha_plus_gamma_rel, 1e-2),
        Check::approx("da1/dT", f.a1_slope, f.a1_slope_exact, 1e-4),
        Check::approx("db2/dT", f.b2_slope, f.b2_slope_exact, 1e-4),
        Check::below("max |mass - 1|", f.max_mass_residual, 1e-8),
        Check::outcome::<String>("density nonnegative", Ok(f.density_nonnegative)),
    ]
}
