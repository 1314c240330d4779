//! JSON run reports.

use arctic_core::kernel::rational_to_string;
use arctic_core::ExactRational;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: Value,
    pub actual: Value,
    pub tolerance: Option<f64>,
    pub pass: bool,
}

impl Check {
    pub fn exact(name: impl Into<String>, expected: &ExactRational, actual: &ExactRational) -> Self {
        Check {
            name: name.into(),
            expected: json!(rational_to_string(expected)),
            actual: json!(rational_to_string(actual)),
            tolerance: None,
            pass: expected == actual,
        }
    }

    pub fn equal<T: Serialize + PartialEq>(name: impl Into<String>, expected: T, actual: T) -> Self {
        let pass = expected == actual;
        Check {
            name: name.into(),
            expected: json!(expected),
            actual: json!(actual),
            tolerance: None,
            pass,
        }
    }

    pub fn flag(name: impl Into<String>, ok: bool) -> Self {
        Check::equal(name, true, ok)
    }

    /// |actual - expected| ≤ tol.
    pub fn within(name: impl Into<String>, expected: f64, actual: f64, tol: f64) -> Self {
        Check {
            name: name.into(),
            expected: json!(expected),
            actual: json!(actual),
            tolerance: Some(tol),
            pass: (actual - expected).abs() <= tol,
        }
    }

    /// actual ≤ bound, reported with expected 0.
    pub fn at_most(name: impl Into<String>, actual: f64, bound: f64) -> Self {
        Check {
            name: name.into(),
            expected: json!(0.0),
            actual: json!(actual),
            tolerance: Some(bound),
            pass: actual <= bound,
        }
    }

    pub fn failed(name: impl Into<String>, expected: Value, error: impl ToString) -> Self {
        Check {
            name: name.into(),
            expected,
            actual: json!({ "error": error.to_string() }),
            tolerance: None,
            pass: false,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub model: String,
    pub params: Value,
    pub version: &'static str,
    pub checks: Vec<Check>,
    pub artifacts: Vec<String>,
}

impl Report {
    pub fn new(command: &str, model: &str, params: Value) -> Self {
        Report {
            command: command.into(),
            model: model.into(),
            params,
            version: env!("ARCTIC_VERSION"),
            checks: Vec::new(),
            artifacts: Vec::new(),
        }
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
