//! Machine-readable verification reports.

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub theorem: String,
    pub seed_hash: String,
    pub parameters: Value,
    pub pass: bool,
    pub witnesses: Vec<Value>,
}

impl Report {
    pub fn new(theorem: &str, seed_hash: &str, parameters: Value) -> Self {
        Report { theorem: theorem.into(), seed_hash: seed_hash.into(), parameters, pass: true, witnesses: Vec::new() }
    }

    /// Records a failing witness.
    pub fn fail(&mut self, witness: Value) {
        self.pass = false;
        self.witnesses.push(witness);
    }

    /// Records an informational witness without changing the verdict.
    pub fn note(&mut self, witness: Value) {
        self.witnesses.push(witness);
    }

    pub fn merge(&mut self, other: Report) {
        self.pass &= other.pass;
        self.witnesses.extend(other.witnesses);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
