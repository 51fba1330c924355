//! Machine-readable verification verdicts.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
    Error,
}

/// One self-contained check result; `params` are enough to re-run it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub task: String,
    pub params: BTreeMap<String, Value>,
    pub verdict: Verdict,
    pub dims: BTreeMap<String, i64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<Value>,
    pub elapsed_ms: u64,
}

impl Report {
    pub fn new(task: impl Into<String>) -> Self {
        Report {
            task: task.into(),
            params: BTreeMap::new(),
            verdict: Verdict::Pass,
            dims: BTreeMap::new(),
            witnesses: Vec::new(),
            elapsed_ms: 0,
        }
    }

    pub fn param(mut self, key: &str, v: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), v.into());
        self
    }

    pub fn set_dim(&mut self, key: &str, v: impl TryInto<i64>) {
        let v = v.try_into().unwrap_or(i64::MAX);
        self.dims.insert(key.to_string(), v);
    }

    /// Marks the report failed; every failure carries a witness.
    pub fn fail(&mut self, witness: Value) {
        if self.verdict == Verdict::Pass {
            self.verdict = Verdict::Fail;
        }
        self.witnesses.push(witness);
    }

    /// Requires `cond`, failing with `witness` otherwise.
    pub fn check(&mut self, cond: bool, witness: impl FnOnce() -> Value) {
        if !cond {
            self.fail(witness());
        }
    }

    pub fn error(&mut self, msg: impl std::fmt::Display) {
        self.verdict = Verdict::Error;
        self.witnesses.push(serde_json::json!({ "error": msg.to_string() }));
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}
