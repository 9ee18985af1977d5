//! Verification results shared by the library and the command line.

use std::collections::BTreeMap;
use std::fmt;

use serde::ser::Serializer;
use serde::Serialize;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Residual {
    ExactZero,
    Value(f64),
}

impl Serialize for Residual {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Residual::ExactZero => s.serialize_str("exact-zero"),
            Residual::Value(v) => s.serialize_f64(*v),
        }
    }
}

impl fmt::Display for Residual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Residual::ExactZero => f.write_str("exact-zero"),
            Residual::Value(v) => write!(f, "{v:.3e}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub id: String,
    pub status: Status,
    pub residual: Residual,
    pub detail: String,
}

impl CheckResult {
    pub fn exact(id: impl Into<String>, zero: bool, magnitude: f64, detail: impl Into<String>) -> Self {
        CheckResult {
            id: id.into(),
            status: if zero { Status::Pass } else { Status::Fail },
            residual: if zero { Residual::ExactZero } else { Residual::Value(magnitude) },
            detail: detail.into(),
        }
    }

    pub fn numeric(id: impl Into<String>, value: f64, tol: f64, detail: impl Into<String>) -> Self {
        CheckResult {
            id: id.into(),
            status: if value <= tol { Status::Pass } else { Status::Fail },
            residual: Residual::Value(value),
            detail: detail.into(),
        }
    }

    pub fn flag(id: impl Into<String>, ok: bool, detail: impl Into<String>) -> Self {
        CheckResult {
            id: id.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            residual: Residual::Value(if ok { 0.0 } else { 1.0 }),
            detail: detail.into(),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub schema: &'static str,
    #[serde(rename = "tool-version")]
    pub tool_version: String,
    pub timestamp: String,
    pub parameters: BTreeMap<String, serde_json::Value>,
    pub status: Status,
    pub results: Vec<CheckResult>,
}

impl RunReport {
    pub fn new(tool_version: &str, timestamp: String, parameters: BTreeMap<String, serde_json::Value>) -> Self {
        RunReport {
            schema: SCHEMA_VERSION,
            tool_version: tool_version.to_string(),
            timestamp,
            parameters,
            status: Status::Pass,
            results: Vec::new(),
        }
    }

    pub fn extend(&mut self, results: impl IntoIterator<Item = CheckResult>) {
        self.results.extend(results);
        self.status = if self.results.iter().all(CheckResult::passed) { Status::Pass } else { Status::Fail };
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.results.iter().filter(|r| !r.passed())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.results {
            let status = if r.passed() { "PASS" } else { "FAIL" };
            out.push_str(&format!("{status} {} residual={}", r.id, r.residual));
            if !r.detail.is_empty() {
                out.push_str(&format!(" ({})", r.detail));
            }
            out.push('\n');
        }
        let failed = self.failures().count();
        out.push_str(&format!(
            "{}: {} checks, {} failed\n",
            if failed == 0 { "PASS" } else { "FAIL" },
            self.results.len(),
            failed
        ));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residual_serialization() {
        assert_eq!(serde_json::to_string(&Residual::ExactZero).unwrap(), "\"exact-zero\"");
        assert_eq!(serde_json::to_string(&Residual::Value(0.5)).unwrap(), "0.5");
    }

    #[test]
    fn overall_status_tracks_entries() {
        let mut r = RunReport::new("0", "t".into(), BTreeMap::new());
        r.extend([CheckResult::exact("a", true, 0.0, "")]);
        assert!(r.passed());
        r.extend([CheckResult::numeric("b", 1.0, 1e-9, "")]);
        assert!(!r.passed());
        assert_eq!(r.failures().count(), 1);
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["schema"], "1");
        assert_eq!(v["results"][0]["residual"], "exact-zero");
    }
}
