//! Scenario configuration files.
//!
//! A config is a JSON object with a `kind` and the parameters that kind
//! uses. Unknown fields are rejected so that typos surface as errors rather
//! than silently falling back to defaults.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use dynet_core::turnover::{calibrate_hazard, calibrate_hazard_truncated, calibrate_hazard_with_breakpoint, LifespanPolicy};
use dynet_core::{derive_rates, derive_stationary, EdgeParams, InfectionRate};

use crate::error::CliError;

/// Version of the config format understood by this build.
pub const CONFIG_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    Si,
    Connectivity,
    Mixing,
    Lemma4,
    TurnoverEr,
    PaTurnover,
    Figure1,
    Bounds,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 8] = [
        ScenarioKind::Si,
        ScenarioKind::Connectivity,
        ScenarioKind::Mixing,
        ScenarioKind::Lemma4,
        ScenarioKind::TurnoverEr,
        ScenarioKind::PaTurnover,
        ScenarioKind::Figure1,
        ScenarioKind::Bounds,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioKind::Si => "si",
            ScenarioKind::Connectivity => "connectivity",
            ScenarioKind::Mixing => "mixing",
            ScenarioKind::Lemma4 => "lemma4",
            ScenarioKind::TurnoverEr => "turnover_er",
            ScenarioKind::PaTurnover => "pa_turnover",
            ScenarioKind::Figure1 => "figure1",
            ScenarioKind::Bounds => "bounds",
        }
    }

    /// Acceptance criteria this kind can evaluate.
    pub fn supported_criteria(self) -> &'static [u32] {
        match self {
            ScenarioKind::Lemma4 => &[1],
            ScenarioKind::Bounds => &[2, 12],
            ScenarioKind::Mixing => &[3],
            ScenarioKind::Connectivity => &[4],
            ScenarioKind::Si => &[5, 6, 7],
            ScenarioKind::Figure1 => &[8],
            ScenarioKind::TurnoverEr => &[9],
            ScenarioKind::PaTurnover => &[10, 11],
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
enum InfTag {
    #[serde(rename = "inf")]
    Inf,
}

/// Infection rate: a positive number or the string `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BetaSpec {
    Rate(f64),
    Infinite(#[serde(with = "inf_tag")] ()),
}

mod inf_tag {
    use super::InfTag;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(_: &(), s: S) -> Result<S::Ok, S::Error> {
        InfTag::Inf.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<(), D::Error> {
        InfTag::deserialize(d).map(|_| ())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolicyKind {
    Exponential,
    Fifo,
    /// Piecewise hazard with tail `(gamma - 1)/(2n)`.
    HazardGamma,
    /// Constant tail hazard with a maximum age.
    HazardTruncated,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StartKind {
    #[default]
    Stationary,
    Empty,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub schema_version: Option<u32>,
    pub kind: Option<ScenarioKind>,
    /// Output file stem; defaults to the kind.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,

    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// Sweep over several sizes; replaces `n`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ns: Option<Vec<usize>>,

    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<BetaSpec>,

    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub policy: Option<PolicyKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub breakpoint: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_min: Option<u64>,

    /// Edge count for mixing times.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u64>,
    /// Sparse-regime constant: also evaluate `p = c / k`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub level: Option<f64>,

    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub horizon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steps: Option<u64>,
    /// Infected count at which SI runs stop; defaults to `n`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub start: Option<StartKind>,
    /// Time-scaling factor `r`: SI also runs at `(r alpha, r beta)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scale: Option<f64>,

    #[serde(skip_serializing_if = "Option::is_none")]
    pub sample_interval: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub burn_in: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub average_last: Option<f64>,

    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid_points: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep_factors: Option<Vec<f64>>,

    /// Write the first trial as JSON lines.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub export_trajectory: Option<bool>,
    /// Criteria to evaluate; defaults to every criterion the kind supports
    /// that the parameters allow.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub criteria: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
}

/// One schema violation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub field: String,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

struct Diagnostics(Vec<Diagnostic>);

impl Diagnostics {
    fn push(&mut self, field: &str, message: impl Into<String>) {
        self.0.push(Diagnostic {
            field: field.to_string(),
            message: message.into(),
        });
    }

    fn positive(&mut self, field: &str, v: Option<f64>) {
        if let Some(v) = v {
            if !(v > 0.0) || !v.is_finite() {
                self.push(field, format!("must be finite and > 0, got {v}"));
            }
        }
    }

    fn nonnegative(&mut self, field: &str, v: Option<f64>) {
        if let Some(v) = v {
            if !(v >= 0.0) || !v.is_finite() {
                self.push(field, format!("must be finite and >= 0, got {v}"));
            }
        }
    }

    fn require<T>(&mut self, field: &str, v: &Option<T>, kind: ScenarioKind) {
        if v.is_none() {
            self.push(field, format!("required for kind `{kind}`"));
        }
    }
}

const REL_TOL: f64 = 1e-9;

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= REL_TOL * a.abs().max(b.abs()).max(1e-300)
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
            path: path.display().to_string(),
            source: e,
        })?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn kind(&self) -> ScenarioKind {
        self.kind.expect("validated config has a kind")
    }

    pub fn stem(&self) -> String {
        self.name.clone().unwrap_or_else(|| self.kind().to_string())
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(1)
    }

    pub fn trials(&self) -> usize {
        self.trials.unwrap_or(match self.kind() {
            ScenarioKind::Si | ScenarioKind::Figure1 => 100,
            ScenarioKind::Connectivity => 200,
            _ => 1,
        })
    }

    /// `ns` if given, otherwise `[n]`.
    pub fn sizes(&self) -> Vec<usize> {
        match (&self.ns, self.n) {
            (Some(ns), _) => ns.clone(),
            (None, Some(n)) => vec![n],
            (None, None) => match self.kind() {
                ScenarioKind::Figure1 => vec![100],
                _ => Vec::new(),
            },
        }
    }

    /// Edge rates from exactly one of `(lambda, mu)` or `(p, alpha)`; both
    /// may be given if they agree. Figure 1 defaults to `lambda = mu = 0.01`.
    pub fn edge_params(&self) -> Result<EdgeParams, String> {
        let rates = match (self.lambda, self.mu) {
            (Some(l), Some(m)) => Some(EdgeParams::new(l, m).map_err(|e| e.to_string())?),
            (None, None) => None,
            _ => return Err("`lambda` and `mu` must be given together".into()),
        };
        let stationary = match (self.p, self.alpha) {
            (Some(p), Some(a)) => Some(derive_rates(p, a).map_err(|e| e.to_string())?),
            (None, None) => None,
            _ => return Err("`p` and `alpha` must be given together".into()),
        };
        match (rates, stationary) {
            (Some(r), Some(s)) => {
                let ok = close(r.lambda(), s.lambda())
                    && match (r.mu(), s.mu()) {
                        (Some(a), Some(b)) => close(a, b),
                        _ => false,
                    };
                if ok {
                    Ok(r)
                } else {
                    let st = derive_stationary(&r).map_err(|e| e.to_string())?;
                    Err(format!(
                        "conflict: (lambda, mu) imply p = {}, alpha = {} but (p, alpha) = ({}, {})",
                        st.p,
                        st.alpha,
                        self.p.unwrap_or(f64::NAN),
                        self.alpha.unwrap_or(f64::NAN)
                    ))
                }
            }
            (Some(r), None) | (None, Some(r)) => Ok(r),
            (None, None) if self.kind == Some(ScenarioKind::Figure1) => Ok(EdgeParams::new(0.01, 0.01).expect("valid")),
            (None, None) => Err("give either (lambda, mu) or (p, alpha)".into()),
        }
    }

    pub fn infection_rate(&self) -> Option<InfectionRate> {
        match self.beta {
            Some(BetaSpec::Rate(b)) => Some(InfectionRate::Finite(b)),
            Some(BetaSpec::Infinite(())) => Some(InfectionRate::Infinite),
            None if self.kind == Some(ScenarioKind::Figure1) => Some(InfectionRate::Finite(0.015)),
            None => None,
        }
    }

    pub fn finite_beta(&self) -> Option<f64> {
        match self.infection_rate() {
            Some(InfectionRate::Finite(b)) => Some(b),
            _ => None,
        }
    }

    /// Lifespan policy, calibrated for `n` when hazard-based.
    pub fn lifespan_policy(&self) -> Result<LifespanPolicy, String> {
        let n = self.n.ok_or("`n` is required")? as f64;
        match self.policy.unwrap_or(PolicyKind::Exponential) {
            PolicyKind::Exponential => Ok(LifespanPolicy::Exponential),
            PolicyKind::Fifo => Ok(LifespanPolicy::Fifo),
            PolicyKind::HazardGamma => {
                let gamma = self.gamma.ok_or("`gamma` is required for hazard_gamma")?;
                let cal = match self.breakpoint {
                    Some(b) => calibrate_hazard_with_breakpoint(gamma, n, b),
                    None => calibrate_hazard(gamma, n),
                };
                cal.map(LifespanPolicy::HazardGamma).map_err(|e| e.to_string())
            }
            PolicyKind::HazardTruncated => {
                let gamma = self.gamma.ok_or("`gamma` is required for hazard_truncated")?;
                calibrate_hazard_truncated(gamma, n)
                    .map(LifespanPolicy::HazardGamma)
                    .map_err(|e| e.to_string())
            }
        }
    }

    /// Criteria to evaluate under `--check`.
    pub fn selected_criteria(&self) -> Vec<u32> {
        if let Some(c) = &self.criteria {
            return c.clone();
        }
        match self.kind() {
            ScenarioKind::Si => {
                if self.scale.is_some() {
                    vec![7]
                } else if self.finite_beta().is_some() && self.target.is_none() {
                    vec![5]
                } else {
                    Vec::new()
                }
            }
            ScenarioKind::PaTurnover => match self.policy.unwrap_or(PolicyKind::Exponential) {
                PolicyKind::Exponential => vec![10],
                PolicyKind::Fifo => vec![11],
                _ => Vec::new(),
            },
            ScenarioKind::Mixing if self.c.is_none() => Vec::new(),
            ScenarioKind::Connectivity if self.sizes().len() < 2 => Vec::new(),
            kind => kind.supported_criteria().to_vec(),
        }
    }

    /// Every schema violation, without running anything.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut d = Diagnostics(Vec::new());
        if let Some(v) = self.schema_version {
            if v != CONFIG_SCHEMA_VERSION {
                d.push("schema_version", format!("unsupported version {v}, expected {CONFIG_SCHEMA_VERSION}"));
            }
        }
        let Some(kind) = self.kind else {
            d.push("kind", "missing; see `dynet list`");
            return d.0;
        };
        if self.trials == Some(0) {
            d.push("trials", "must be >= 1");
        }
        if self.n.is_some() && self.ns.is_some() {
            d.push("ns", "give either `n` or `ns`, not both");
        }
        if let Some(ns) = &self.ns {
            if ns.is_empty() {
                d.push("ns", "must not be empty");
            }
        }
        d.positive("horizon", self.horizon);
        d.positive("scale", self.scale);
        d.positive("sample_interval", self.sample_interval);
        d.nonnegative("burn_in", self.burn_in);
        if let Some(BetaSpec::Rate(b)) = self.beta {
            d.positive("beta", Some(b));
        }
        if let Some(level) = self.level {
            if !(level > 0.0 && level < 1.0) {
                d.push("level", format!("must lie in (0, 1), got {level}"));
            }
        }
        if let Some(f) = self.average_last {
            if !(f > 0.0 && f <= 1.0) {
                d.push("average_last", format!("must lie in (0, 1], got {f}"));
            }
        }
        if let Some(factors) = &self.sweep_factors {
            if factors.iter().any(|f| !(*f > 0.0) || !f.is_finite()) {
                d.push("sweep_factors", "every factor must be finite and > 0");
            }
        }
        if let Some(g) = self.grid_points {
            if g < 10 {
                d.push("grid_points", "must be >= 10");
            }
        }

        let needs_rates = !matches!(kind, ScenarioKind::Connectivity | ScenarioKind::PaTurnover | ScenarioKind::Bounds);
        if needs_rates {
            if let Err(msg) = self.edge_params() {
                let field = if msg.starts_with("conflict") { "p" } else { "lambda" };
                d.push(field, msg);
            }
        }
        let sizes = if self.kind.is_some() { self.sizes() } else { Vec::new() };

        match kind {
            ScenarioKind::Si => {
                d.require("beta", &self.beta, kind);
                if sizes.is_empty() {
                    d.push("n", "required for kind `si`");
                }
                if let Some(t) = self.target {
                    if t == 0 || sizes.iter().any(|&n| t > n) {
                        d.push("target", format!("must lie in 1..=n, got {t}"));
                    }
                }
                if sizes.iter().any(|&n| n < 2) {
                    d.push("n", "must be >= 2");
                }
            }
            ScenarioKind::Connectivity => {
                d.require("lambda", &self.lambda, kind);
                d.positive("lambda", self.lambda);
                if sizes.is_empty() {
                    d.push("n", "required for kind `connectivity`");
                }
                if sizes.iter().any(|&n| n < 2) {
                    d.push("n", "must be >= 2");
                }
            }
            ScenarioKind::Mixing => {
                d.require("k", &self.k, kind);
                if self.k == Some(0) {
                    d.push("k", "must be >= 1");
                }
                d.positive("c", self.c);
            }
            ScenarioKind::Lemma4 => {
                if sizes.is_empty() {
                    d.push("n", "number of potential infective edges is required for kind `lemma4`");
                }
                if sizes.contains(&0) {
                    d.push("n", "must be >= 1");
                }
                match self.beta {
                    Some(BetaSpec::Rate(_)) => {}
                    Some(BetaSpec::Infinite(())) => d.push("beta", "must be finite for kind `lemma4`"),
                    None => d.push("beta", "required for kind `lemma4`"),
                }
            }
            ScenarioKind::TurnoverEr => {
                d.require("n", &self.n, kind);
                d.require("horizon", &self.horizon, kind);
                if self.n == Some(0) {
                    d.push("n", "must be >= 1");
                }
            }
            ScenarioKind::PaTurnover => {
                d.require("n", &self.n, kind);
                d.require("m", &self.m, kind);
                d.require("steps", &self.steps, kind);
                if let (Some(n), Some(m)) = (self.n, self.m) {
                    if m == 0 || n <= m {
                        d.push("m", format!("need 1 <= m < n, got m = {m}, n = {n}"));
                    } else if let Err(msg) = self.lifespan_policy() {
                        d.push("policy", msg);
                    }
                }
            }
            ScenarioKind::Figure1 => {
                if self.infection_rate().is_some_and(|b| b == InfectionRate::Infinite) {
                    d.push("beta", "must be finite for kind `figure1`");
                }
                if sizes.len() > 1 {
                    d.push("ns", "figure1 takes a single `n`");
                }
            }
            ScenarioKind::Bounds => {
                d.require("n", &self.n, kind);
                d.require("lambda", &self.lambda, kind);
                d.positive("lambda", self.lambda);
                if let Some(n) = self.n {
                    if n < 2 {
                        d.push("n", "must be >= 2");
                    }
                    if let Some(k) = self.k {
                        if k < 2 || k > n as u64 {
                            d.push("k", format!("need 2 <= k <= n, got {k}"));
                        }
                    }
                }
            }
        }

        if self.export_trajectory == Some(true) && !matches!(kind, ScenarioKind::Si | ScenarioKind::Figure1) {
            d.push("export_trajectory", format!("kind `{kind}` has no event trajectory to export"));
        }
        if self.export_trajectory == Some(true) && self.edge_params().is_ok_and(|p| p.is_instant_removal()) {
            d.push("export_trajectory", "instant removal has no edge history to export");
        }

        if let Some(criteria) = &self.criteria {
            for &c in criteria {
                if !kind.supported_criteria().contains(&c) {
                    d.push(
                        "criteria",
                        format!("criterion {c} is not evaluated by kind `{kind}` (supported: {:?})", kind.supported_criteria()),
                    );
                }
            }
        }
        for c in self.selected_criteria() {
            match (kind, c) {
                (ScenarioKind::Si, 5 | 6) if self.target.is_some_and(|t| sizes.iter().any(|&n| n != t)) => {
                    d.push("target", format!("criterion {c} needs full infection; drop `target`"))
                }
                (ScenarioKind::Si, 5 | 6) if self.finite_beta().is_none() => {
                    d.push("beta", format!("criterion {c} needs a finite beta"))
                }
                (ScenarioKind::Si, 7) if self.scale.is_none() => d.push("scale", "criterion 7 needs `scale`"),
                (ScenarioKind::Mixing, 3) if self.c.is_none() => d.push("c", "criterion 3 needs the sparse constant `c`"),
                (ScenarioKind::Connectivity, 4) if sizes.len() < 2 => {
                    d.push("ns", "criterion 4 needs at least two sizes to judge the trend")
                }
                (ScenarioKind::PaTurnover, 10) if self.policy.unwrap_or(PolicyKind::Exponential) != PolicyKind::Exponential => {
                    d.push("policy", "criterion 10 needs the exponential policy")
                }
                (ScenarioKind::PaTurnover, 11) if self.policy != Some(PolicyKind::Fifo) => {
                    d.push("policy", "criterion 11 needs the fifo policy")
                }
                (ScenarioKind::Figure1, 8)
                    if !self.sweep_factors.as_ref().is_none_or(|f| f.contains(&0.5)) =>
                {
                    d.push("sweep_factors", "criterion 8 compares halved parameters; include 0.5")
                }
                _ => {}
            }
        }
        d.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> ScenarioConfig {
        ScenarioConfig::from_json(text).unwrap()
    }

    #[test]
    fn well_formed_config_is_clean() {
        let c = parse(r#"{"kind": "si", "n": 100, "lambda": 1, "mu": 1, "beta": 1, "trials": 10}"#);
        assert!(c.validate().is_empty(), "{:?}", c.validate());
        let c = parse(r#"{"kind": "si", "n": 100, "p": 0.5, "alpha": 0.5, "beta": "inf"}"#);
        assert!(c.validate().is_empty(), "{:?}", c.validate());
        assert_eq!(c.infection_rate(), Some(InfectionRate::Infinite));
    }

    #[test]
    fn zero_trials_is_named() {
        let c = parse(r#"{"kind": "connectivity", "n": 100, "lambda": 1, "trials": 0}"#);
        let diags = c.validate();
        assert!(diags.iter().any(|d| d.field == "trials"), "{diags:?}");
    }

    #[test]
    fn inconsistent_parameterizations_conflict() {
        let c = parse(r#"{"kind": "si", "n": 10, "lambda": 1, "mu": 1, "p": 0.3, "alpha": 0.5, "beta": 1}"#);
        let diags = c.validate();
        assert!(diags.iter().any(|d| d.message.contains("conflict")), "{diags:?}");
        let c = parse(r#"{"kind": "si", "n": 10, "lambda": 1, "mu": 1, "p": 0.5, "alpha": 0.5, "beta": 1}"#);
        assert!(c.validate().is_empty());
    }

    #[test]
    fn unknown_fields_rejected() {
        assert!(ScenarioConfig::from_json(r#"{"kind": "si", "lamda": 1}"#).is_err());
        assert!(ScenarioConfig::from_json(r#"{"kind": "si", "beta": "infinite"}"#).is_err());
    }

    #[test]
    fn criterion_requirements() {
        let c = parse(r#"{"kind": "si", "n": 10, "lambda": 1, "mu": 1, "beta": 1, "criteria": [7]}"#);
        assert!(c.validate().iter().any(|d| d.field == "scale"));
        let c = parse(r#"{"kind": "mixing", "k": 100, "p": 0.3, "alpha": 1, "criteria": [4]}"#);
        assert!(c.validate().iter().any(|d| d.field == "criteria"));
    }

    #[test]
    fn figure1_defaults() {
        let c = parse(r#"{"kind": "figure1"}"#);
        assert!(c.validate().is_empty());
        let params = c.edge_params().unwrap();
        assert_eq!((params.lambda(), params.mu()), (0.01, Some(0.01)));
        assert_eq!(c.finite_beta(), Some(0.015));
        assert_eq!(c.sizes(), vec![100]);
        assert_eq!(c.trials(), 100);
    }
}
