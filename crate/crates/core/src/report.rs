//! Check records shared by every verification suite.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub check_id: String,
    pub status: Status,
    pub witness: Option<String>,
    pub ms: u64,
}

impl CheckRecord {
    pub fn pass(id: impl Into<String>) -> Self {
        CheckRecord { check_id: id.into(), status: Status::Pass, witness: None, ms: 0 }
    }

    pub fn fail(id: impl Into<String>, witness: impl Into<String>) -> Self {
        CheckRecord { check_id: id.into(), status: Status::Fail, witness: Some(witness.into()), ms: 0 }
    }

    pub fn error(id: impl Into<String>, witness: impl Into<String>) -> Self {
        CheckRecord { check_id: id.into(), status: Status::Error, witness: Some(witness.into()), ms: 0 }
    }

    /// Runs `f`, timing it. `Ok(None)` is a pass, `Ok(Some(w))` a failure with witness.
    pub fn timed(id: impl Into<String>, f: impl FnOnce() -> Result<Option<String>>) -> Self {
        let start = Instant::now();
        let id = id.into();
        let mut rec = match f() {
            Ok(None) => CheckRecord::pass(id),
            Ok(Some(w)) => CheckRecord::fail(id, w),
            Err(e) => CheckRecord::error(id, e.to_string()),
        };
        rec.ms = start.elapsed().as_millis() as u64;
        rec
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub checks: Vec<CheckRecord>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, rec: CheckRecord) {
        self.checks.push(rec);
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn sort(&mut self) {
        self.checks.sort_by(|a, b| a.check_id.cmp(&b.check_id));
    }

    pub fn from_records(mut v: Vec<CheckRecord>) -> Self {
        v.sort_by(|a, b| a.check_id.cmp(&b.check_id));
        Report { checks: v }
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.status == Status::Pass)
    }

    pub fn has_error(&self) -> bool {
        self.checks.iter().any(|c| c.status == Status::Error)
    }

    pub fn failures(&self) -> Vec<&CheckRecord> {
        self.checks.iter().filter(|c| c.status != Status::Pass).collect()
    }
}
