//! Machine-readable run reports.

use serde::{Deserialize, Serialize};

use crate::extended::ExtendedReal;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Parameter {
    pub name: String,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedValue {
    pub name: String,
    pub value: ExtendedReal,
}

/// One checked statement with its measured deviation and the pinned tolerance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    pub measured: ExtendedReal,
    pub tolerance: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub parameters: Vec<Parameter>,
    pub results: Vec<NamedValue>,
    pub assertions: Vec<Assertion>,
    pub witnesses: Vec<serde_json::Value>,
    pub passed: bool,
    pub wall_time_seconds: f64,
}

impl RunReport {
    pub fn new(command: impl Into<String>) -> Self {
        Self {
            command: command.into(),
            parameters: Vec::new(),
            results: Vec::new(),
            assertions: Vec::new(),
            witnesses: Vec::new(),
            passed: true,
            wall_time_seconds: 0.0,
        }
    }

    pub fn param(&mut self, name: &str, value: impl ToString) {
        self.parameters.push(Parameter {
            name: name.to_string(),
            value: value.to_string(),
        });
    }

    pub fn result(&mut self, name: impl Into<String>, value: ExtendedReal) {
        self.results.push(NamedValue {
            name: name.into(),
            value,
        });
    }

    /// Records `measured ≤ tolerance`.
    pub fn at_most(&mut self, name: impl Into<String>, measured: f64, tolerance: f64) -> bool {
        let passed = measured <= tolerance;
        self.assert(name, passed, measured, tolerance, None)
    }

    /// Records `measured > threshold`.
    pub fn above(&mut self, name: impl Into<String>, measured: f64, threshold: f64) -> bool {
        let passed = measured > threshold;
        self.assert(name, passed, measured, threshold, None)
    }

    pub fn assert(
        &mut self,
        name: impl Into<String>,
        passed: bool,
        measured: f64,
        tolerance: f64,
        detail: Option<String>,
    ) -> bool {
        self.passed &= passed;
        self.assertions.push(Assertion {
            name: name.into(),
            passed,
            measured: ExtendedReal::new(measured).unwrap_or(ExtendedReal::PosInfinity),
            tolerance,
            detail,
        });
        passed
    }

    pub fn witness<T: Serialize>(&mut self, w: &T) {
        self.witnesses
            .push(serde_json::to_value(w).unwrap_or(serde_json::Value::Null));
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    /// Human-readable summary, one line per assertion.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for r in &self.results {
            out.push_str(&format!("{} = {}\n", r.name, r.value.format_fixed(12)));
        }
        for a in &self.assertions {
            out.push_str(&format!(
                "{} {}: measured {} (tolerance {:.1e}){}\n",
                if a.passed { "PASS" } else { "FAIL" },
                a.name,
                match a.measured {
                    ExtendedReal::Finite(x) => format!("{x:.6e}"),
                    ExtendedReal::PosInfinity => "inf".into(),
                },
                a.tolerance,
                a.detail
                    .as_deref()
                    .map(|d| format!(" [{d}]"))
                    .unwrap_or_default()
            ));
        }
        out
    }
}
