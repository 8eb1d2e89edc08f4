//! The JSON run report.
//!
//! Reports carry no wall-clock data, so rerunning the embedded config with
//! the embedded seed reproduces the report byte for byte.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::config::{ScenarioConfig, ScenarioKind};

pub const REPORT_SCHEMA: &str = "dynet.run-report";
pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema: String,
    pub schema_version: u32,
    pub kind: ScenarioKind,
    pub name: String,
    pub seed: u64,
    /// Effective config, with the seed and any CLI overrides applied.
    pub config: ScenarioConfig,
    /// Files written next to the report.
    pub outputs: Vec<String>,
    pub aggregates: Vec<Aggregate>,
    pub theory: BTreeMap<String, f64>,
    pub checks: Vec<CheckResult>,
    /// Structured run details such as calibrated hazards and run flags.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, serde_json::Value>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// A statistic computed from trial rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub name: String,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub std_err: Option<f64>,
    /// 95% normal confidence interval.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ci: Option<[f64; 2]>,
    pub count: usize,
    /// The rows it was computed from, as `file:column[filter]`.
    pub source: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub criterion: u32,
    pub name: String,
    pub pass: bool,
    pub measured: BTreeMap<String, f64>,
    pub detail: String,
    /// Wall-clock budget in seconds. Enforced by the caller, which is the
    /// only party that knows the elapsed time.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub time_limit_secs: Option<f64>,
}

impl CheckResult {
    pub fn line(&self, elapsed_secs: Option<f64>) -> String {
        let over = self.over_budget(elapsed_secs);
        let tag = if self.pass && !over { "PASS" } else { "FAIL" };
        let timing = match (elapsed_secs, self.time_limit_secs) {
            (Some(e), Some(l)) => format!(" ({e:.2}s, limit {l}s{})", if over { ", exceeded" } else { "" }),
            (Some(e), None) => format!(" ({e:.2}s)"),
            _ => String::new(),
        };
        format!("[{tag}] criterion {:>2} {}{timing}: {}", self.criterion, self.name, self.detail)
    }

    pub fn over_budget(&self, elapsed_secs: Option<f64>) -> bool {
        matches!((elapsed_secs, self.time_limit_secs), (Some(e), Some(l)) if e > l)
    }
}

impl RunReport {
    pub fn new(config: &ScenarioConfig) -> Self {
        Self {
            schema: REPORT_SCHEMA.to_string(),
            schema_version: REPORT_SCHEMA_VERSION,
            kind: config.kind(),
            name: config.stem(),
            seed: config.seed(),
            config: config.clone(),
            outputs: Vec::new(),
            aggregates: Vec::new(),
            theory: BTreeMap::new(),
            checks: Vec::new(),
            metadata: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
