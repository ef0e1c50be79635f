use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn minmod(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_minmod")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn statuses(v: &Value) -> Vec<String> {
    v["checks"].as_array().unwrap().iter().map(|c| c["status"].as_str().unwrap().to_string()).collect()
}

fn temp_file(name: &str, body: &str) -> PathBuf {
    let p = std::env::temp_dir().join(format!("minmod-{}-{name}", std::process::id()));
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn curve_report() {
    let out = minmod(&["curve", "--m", "1", "--b", "1", "--eps", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["command"], "curve");
    assert_eq!(v["results"]["T_c"], "1/16");
    assert!(statuses(&v).iter().all(|s| s == "pass"));
}

#[test]
fn curve_csv() {
    let out = minmod(&["curve", "--m", "2", "--b", "1", "--eps", "1/2", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().count() >= 2);
    assert!(text.contains(','));
}

#[test]
fn stringeq_painleve() {
    let out = minmod(&["stringeq", "--m", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["results"]["normal_form"], "u'' = 2*u^3 + 4*t*u");
}

#[test]
fn tr_example() {
    let out = minmod(&["tr", "--m", "1", "--u0", "1", "--g", "0", "--n", "3", "--at", "2,3,5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["results"]["value"], "41/2592*i");
    assert_eq!(v["results"]["value_over_i_chi"], "41/2592");
    let names: Vec<&str> = v["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert!(names.iter().any(|n| n.contains("symmetry")));
}

#[test]
fn loopcheck_passes() {
    let out = minmod(&["loopcheck", "--m", "1", "--u0", "1", "--g", "0", "--n", "2", "--points", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(statuses(&json(&out)).iter().all(|s| s == "pass"));
}

#[test]
fn detform_from_file() {
    let w2 = temp_file("w2.json", r#"{"z1": "2", "z2": "3", "u0": "1"}"#);
    let out = minmod(&["detform", "--op", "w2", "--input", w2.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["results"]["z_form"], "6/25");

    let km = temp_file(
        "km.json",
        r#"{"points": ["1", "2", "3"], "offdiag": [["0","1","1"],["1","0","1"],["1","1","0"]], "diag": ["1","1","1"]}"#,
    );
    let out = minmod(&["detform", "--op", "connected", "--input", km.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["results"]["connected"], "2");
    let out = minmod(&["detform", "--op", "detprime", "--input", km.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let _ = std::fs::remove_file(w2);
    let _ = std::fs::remove_file(km);
}

#[test]
fn dscale_writes_csv() {
    let csv = std::env::temp_dir().join(format!("minmod-{}-grid.csv", std::process::id()));
    let out = minmod(&[
        "dscale", "--m", "1", "--b", "1", "--eps", "0.5", "--decades", "4", "--per-decade", "5", "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("T,a1,b1,a2,b2,x0,mass_residual"));
    assert_eq!(text.lines().count(), 22);
    let _ = std::fs::remove_file(csv);
}

#[test]
fn verify_suites() {
    for suite in ["exact", "gd", "curves", "detform", "wkb"] {
        let out = minmod(&["verify", "--suite", suite]);
        assert_eq!(out.status.code(), Some(0), "suite {suite}");
        assert!(statuses(&json(&out)).iter().all(|s| s == "pass"), "suite {suite}");
    }
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(minmod(&["curve", "--m", "1", "--b", "1", "--eps", "0", "--bogus"]).status.code(), Some(2));
    assert_eq!(minmod(&["verify", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(minmod(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(minmod(&["curve", "--m", "1", "--b", "x", "--eps", "0"]).status.code(), Some(2));
    assert_eq!(minmod(&["--help"]).status.code(), Some(0));
}

#[test]
fn domain_errors_exit_one() {
    let out = minmod(&["curve", "--m", "1", "--b", "1", "--eps", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(statuses(&json(&out)).contains(&"fail".to_string()));
    let out = minmod(&["tr", "--m", "1", "--u0", "1", "--g", "0", "--n", "3", "--at", "1,3,5"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn output_is_deterministic() {
    let args = ["--seed", "5", "verify", "--suite", "tr"];
    let a = minmod(&args);
    let b = minmod(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn library_entry_matches_binary() {
    let args = ["minmod", "curve", "--m", "3", "--b", "2", "--eps", "-1/3"];
    let lib = minmod_cli::run(args);
    let bin = minmod(&args[1..]);
    assert_eq!(lib.code, bin.status.code().unwrap());
    assert_eq!(lib.stdout.as_bytes(), &bin.stdout[..lib.stdout.len()]);
}
