//! Machine-readable verification reports.

use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    /// Neither proved nor refuted within the search bound; not a failure.
    Unresolved,
    /// A computed value with nothing to check.
    Value,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct Record {
    pub name: String,
    pub anchor: String,
    pub verdict: Verdict,
    pub witness: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

impl Record {
    pub fn new(name: impl Into<String>, anchor: impl Into<String>, verdict: Verdict, witness: impl Into<String>) -> Self {
        Record { name: name.into(), anchor: anchor.into(), verdict, witness: witness.into(), elapsed_ms: None }
    }
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool_version: String,
    pub chart: String,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub suite: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    pub records: Vec<Record>,
}

impl Report {
    pub fn new(chart: impl Into<String>, seed: u64) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            tool_version: TOOL_VERSION.to_string(),
            chart: chart.into(),
            seed,
            suite: None,
            trials: None,
            records: Vec::new(),
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(|r| r.verdict == Verdict::Fail)
    }

    pub fn passed(&self) -> bool {
        self.failures().next().is_none()
    }

    pub fn count(&self, v: Verdict) -> usize {
        self.records.iter().filter(|r| r.verdict == v).count()
    }

    /// `0` when nothing failed, `1` otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shape_and_exit_code() {
        let mut r = Report::new("euclid:1", 42);
        r.records.push(Record::new("a", "x", Verdict::Pass, ""));
        r.records.push(Record::new("b", "y", Verdict::Unresolved, "depth 3"));
        assert_eq!(r.exit_code(), 0);
        let json = r.to_json();
        assert!(json.contains("\"verdict\": \"unresolved\""));
        assert!(!json.contains("elapsed_ms"));
        let back: Report = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
        r.records.push(Record::new("c", "z", Verdict::Fail, "boom"));
        assert_eq!(r.exit_code(), 1);
    }
}
