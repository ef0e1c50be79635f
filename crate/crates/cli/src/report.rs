//! Run reports and individual checks.

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub lhs: Value,
    pub rhs: Value,
    pub tolerance: Option<f64>,
}

impl Check {
    /// Exact comparison of two displayed values.
    pub fn exact(name: impl Into<String>, lhs: impl ToString, rhs: impl ToString) -> Self {
        let (l, r) = (lhs.to_string(), rhs.to_string());
        let status = if l == r { Status::Pass } else { Status::Fail };
        Check { name: name.into(), status, lhs: Value::String(l), rhs: Value::String(r), tolerance: None }
    }

    /// |lhs − rhs| ≤ tol·|rhs|, or ≤ tol when rhs = 0.
    pub fn approx(name: impl Into<String>, lhs: f64, rhs: f64, tol: f64) -> Self {
        let scale = if rhs == 0.0 { 1.0 } else { rhs.abs() };
        let ok = (lhs - rhs).abs() <= tol * scale;
        Check {
            name: name.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            lhs: num(lhs),
            rhs: num(rhs),
            tolerance: Some(tol),
        }
    }

    /// lhs ≤ bound.
    pub fn below(name: impl Into<String>, lhs: f64, bound: f64) -> Self {
        Check {
            name: name.into(),
            status: if lhs <= bound { Status::Pass } else { Status::Fail },
            lhs: num(lhs),
            rhs: num(bound),
            tolerance: None,
        }
    }

    /// A boolean outcome, or a domain error reported as a failure.
    pub fn outcome<E: std::fmt::Display>(name: impl Into<String>, r: Result<bool, E>) -> Self {
        let (status, lhs) = match r {
            Ok(true) => (Status::Pass, Value::Bool(true)),
            Ok(false) => (Status::Fail, Value::Bool(false)),
            Err(e) => (Status::Fail, Value::String(e.to_string())),
        };
        Check { name: name.into(), status, lhs, rhs: Value::Bool(true), tolerance: None }
    }

    pub fn skip(name: impl Into<String>, why: &str) -> Self {
        Check {
            name: name.into(),
            status: Status::Skip,
            lhs: Value::String(why.into()),
            rhs: Value::Null,
            tolerance: None,
        }
    }
}

fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map(Value::Number).unwrap_or_else(|| Value::String(x.to_string()))
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub params: Value,
    pub results: Value,
    pub checks: Vec<Check>,
}

impl RunReport {
    pub fn new(command: &str, params: Value) -> Self {
        RunReport { command: command.into(), params, results: Value::Null, checks: Vec::new() }
    }

    pub fn failed(&self) -> bool {
        self.checks.iter().any(|c| c.status == Status::Fail)
    }

    pub fn exit_code(&self) -> i32 {
        i32::from(self.failed())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
