//! Machine-readable check reports.

use serde::Serialize;
use serde_json::Value;

/// Hard checks decide the exit status; conjecture-tier checks are reported.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Tier {
    Hard,
    Conjecture,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Reported,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    #[serde(rename = "id")]
    pub check_id: String,
    /// Which formula or identity the check exercises.
    pub anchor: String,
    pub tier: Tier,
    pub status: Status,
    pub params: Value,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub witness: Value,
}

impl CheckReport {
    /// Builds a report; a failing conjecture-tier check is `reported`
    /// unless `strict` is set.
    pub fn new(check_id: impl Into<String>, anchor: impl Into<String>, tier: Tier, holds: bool, strict: bool, params: Value, witness: Value) -> Self {
        let status = match (holds, tier, strict) {
            (true, _, _) => Status::Pass,
            (false, Tier::Conjecture, false) => Status::Reported,
            (false, _, _) => Status::Fail,
        };
        Self {
            check_id: check_id.into(),
            anchor: anchor.into(),
            tier,
            status,
            params,
            witness,
        }
    }

    /// A check that could not be evaluated.
    pub fn error(check_id: impl Into<String>, anchor: impl Into<String>, params: Value, err: &crate::Error) -> Self {
        Self {
            check_id: check_id.into(),
            anchor: anchor.into(),
            tier: Tier::Hard,
            status: Status::Fail,
            params,
            witness: serde_json::json!({ "error": err.to_string() }),
        }
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub tool_version: String,
    pub config: Value,
    pub checks: Vec<CheckReport>,
    /// Command output beyond pass/fail, e.g. an expansion.
    #[serde(skip_serializing_if = "Value::is_null")]
    pub result: Value,
}

impl RunReport {
    pub fn new(config: Value, mut checks: Vec<CheckReport>) -> Self {
        checks.sort_by(|a, b| a.check_id.cmp(&b.check_id));
        Self {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            checks,
            result: Value::Null,
        }
    }

    pub fn with_result(mut self, result: Value) -> Self {
        self.result = result;
        self
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(CheckReport::passed)
    }
}
