use serde::Serialize;
use serde_json::Value;

use crate::config::RunConfig;

pub const SCHEMA: &str = "padic-casimir/report/v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

#[derive(Clone, Debug, Serialize)]
pub struct Record {
    pub name: String,
    pub status: Status,
    pub measured: Value,
    /// Reproduces a failure: matrix digits, a polynomial or a multi-index.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Record {
    pub fn check(name: impl Into<String>, passed: bool, measured: Value, witness: Option<String>) -> Self {
        let status = if passed { Status::Pass } else { Status::Fail };
        Record { name: name.into(), status, measured, witness: if passed { None } else { witness }, error: None }
    }

    pub fn error(name: impl Into<String>, err: &padic_casimir::Error) -> Self {
        Record { name: name.into(), status: Status::Error, measured: Value::Null, witness: None, error: Some(err.to_string()) }
    }
}

#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub errors: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub config: RunConfig,
    pub records: Vec<Record>,
    pub summary: Summary,
}

impl Report {
    pub fn new(config: RunConfig, records: Vec<Record>) -> Self {
        let mut summary = Summary { total: records.len(), ..Default::default() };
        for r in &records {
            match r.status {
                Status::Pass => summary.passed += 1,
                Status::Fail => summary.failed += 1,
                Status::Error => summary.errors += 1,
            }
        }
        Report { schema: SCHEMA, config, records, summary }
    }

    pub fn all_pass(&self) -> bool {
        self.summary.passed == self.summary.total
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
