//! Event-driven simulation of the dynamic graph and the SI process on it.

mod connectivity;
mod dynamic_graph;
mod si;
mod si_full;
mod trajectory;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::model::{EdgeParams, GraphSnapshot, InfectionRate};

pub use connectivity::{connectivity_time, connectivity_time_sweep};
pub use dynamic_graph::simulate_dynamic_graph;
pub use si::{simulate_si, simulate_si_alpha_inf};
pub use si_full::{simulate_si_with_edges, SiEdgeRun};
pub use trajectory::{hitting_time, Event, EventKind, EventTrajectory, SiTrajectory};

/// Environment variable overriding [`SimLimits::max_nodes`].
pub const MAX_N_ENV: &str = "DYNET_MAX_N";

/// Guard against simulations whose pair count outgrows a desktop.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimLimits {
    pub max_nodes: usize,
}

impl Default for SimLimits {
    fn default() -> Self {
        Self { max_nodes: 5000 }
    }
}

impl SimLimits {
    /// Default cap, replaced by `DYNET_MAX_N` when that parses as a count.
    pub fn from_env() -> Result<Self> {
        match std::env::var(MAX_N_ENV) {
            Ok(raw) => raw
                .trim()
                .parse()
                .map(|max_nodes| Self { max_nodes })
                .map_err(|_| invalid("DYNET_MAX_N", format!("not a node count: {raw:?}"))),
            Err(_) => Ok(Self::default()),
        }
    }

    pub fn check(&self, n: usize) -> Result<()> {
        if n > self.max_nodes {
            let pairs = n as u64 * (n as u64 - 1) / 2;
            return Err(Error::ResourceCap {
                n,
                pairs,
                cap: self.max_nodes,
            });
        }
        Ok(())
    }
}

/// When an SI run ends. With neither bound set it runs until everyone is
/// infected or nothing can happen any more.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct StopRule {
    pub horizon: Option<f64>,
    pub target: Option<usize>,
}

impl StopRule {
    pub fn horizon(t: f64) -> Self {
        Self {
            horizon: Some(t),
            target: None,
        }
    }

    pub fn target(k: usize) -> Self {
        Self {
            horizon: None,
            target: Some(k),
        }
    }

    fn validate(&self) -> Result<()> {
        if let Some(h) = self.horizon {
            if h.is_nan() || h < 0.0 {
                return Err(Error::NegativeTime(h));
            }
        }
        Ok(())
    }

    pub(crate) fn time_limit(&self) -> f64 {
        self.horizon.unwrap_or(f64::INFINITY)
    }

    pub(crate) fn reached(&self, infected: usize) -> bool {
        self.target.is_some_and(|k| infected >= k)
    }
}

/// Graph state at time 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SiStart {
    /// `G(n, p)` with the stationary `p` of the edge rates.
    Stationary,
    Snapshot(GraphSnapshot),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SiConfig {
    pub n: usize,
    pub params: EdgeParams,
    pub beta: InfectionRate,
    pub seeds: Vec<usize>,
    pub start: SiStart,
    pub stop: StopRule,
    pub limits: SimLimits,
}

impl SiConfig {
    /// Stationary start from node 0, run to full infection.
    pub fn new(n: usize, params: EdgeParams, beta: InfectionRate) -> Self {
        Self {
            n,
            params,
            beta,
            seeds: vec![0],
            start: SiStart::Stationary,
            stop: StopRule::default(),
            limits: SimLimits::default(),
        }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(invalid("n", "must be >= 1"));
        }
        self.limits.check(self.n)?;
        self.stop.validate()?;
        validate_seeds(self.n, &self.seeds)?;
        if let SiStart::Snapshot(g) = &self.start {
            if g.n() != self.n {
                return Err(invalid("start", format!("snapshot has {} nodes, expected {}", g.n(), self.n)));
            }
        }
        Ok(())
    }
}

pub(crate) fn validate_seeds(n: usize, seeds: &[usize]) -> Result<()> {
    if seeds.is_empty() {
        return Err(invalid("seeds", "at least one initially infected node is required"));
    }
    let mut seen = vec![false; n];
    for &s in seeds {
        if s >= n {
            return Err(invalid("seeds", format!("node {s} out of range for n = {n}")));
        }
        if std::mem::replace(&mut seen[s], true) {
            return Err(invalid("seeds", format!("node {s} listed twice")));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn limits_guard_pairs() {
        let limits = SimLimits { max_nodes: 10 };
        assert!(limits.check(10).is_ok());
        assert!(matches!(limits.check(11), Err(Error::ResourceCap { pairs: 55, .. })));
    }

    #[test]
    fn seed_validation() {
        assert!(validate_seeds(3, &[]).is_err());
        assert!(validate_seeds(3, &[3]).is_err());
        assert!(validate_seeds(3, &[1, 1]).is_err());
        assert!(validate_seeds(3, &[2, 0]).is_ok());
    }
}
