//! Structured pass/fail reports shared by validation and verification suites.

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    /// The mathematical statement being tested.
    pub anchor: String,
    pub passed: bool,
    pub severity: Severity,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub title: String,
    /// Fixed conventions in force, so a report can be reproduced.
    pub choices: Vec<String>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report {
            title: title.into(),
            ..Report::default()
        }
    }

    pub fn check(&mut self, name: impl Into<String>, anchor: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            anchor: anchor.into(),
            passed,
            severity: Severity::Error,
            detail: detail.into(),
        });
    }

    pub fn warn(&mut self, name: impl Into<String>, anchor: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            anchor: anchor.into(),
            passed,
            severity: Severity::Warning,
            detail: detail.into(),
        });
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
        for c in other.choices {
            if !self.choices.contains(&c) {
                self.choices.push(c);
            }
        }
    }

    /// True when no error-severity check failed.
    pub fn passed(&self) -> bool {
        self.checks
            .iter()
            .all(|c| c.passed || c.severity == Severity::Warning)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks
            .iter()
            .filter(|c| !c.passed && c.severity == Severity::Error)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("reports serialize");
        v["passed"] = serde_json::Value::Bool(self.passed());
        v
    }
}
