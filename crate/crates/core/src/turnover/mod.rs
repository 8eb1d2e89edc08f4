//! Node-turnover models: birth–death dynamic Erdős–Rényi graphs and
//! preferential attachment with node removal.

mod er;
mod pa;
mod policy;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use er::{
    effective_edge_probability, effective_edge_probability_pair_lifetime, simulate_turnover_er,
    TurnoverConfig, TurnoverEr, TurnoverEvent, TurnoverSample, TurnoverTrajectory,
};
pub use pa::{simulate_pa_turnover, PaConfig, PaFlags, PaNetwork, PaRun, StepReport};
pub use policy::{
    calibrate_hazard, calibrate_hazard_truncated, calibrate_hazard_with_breakpoint,
    eq5_density, predicted_degree_density, HazardAdjustment, HazardCalibration, LifespanPolicy,
};

/// Degree-count table.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeHistogram {
    counts: BTreeMap<u64, u64>,
    total: u64,
    m: u64,
}

impl DegreeHistogram {
    pub fn new(m: u64) -> Self {
        Self {
            counts: BTreeMap::new(),
            total: 0,
            m,
        }
    }

    pub fn from_degrees(degrees: impl IntoIterator<Item = u64>, m: u64) -> Self {
        let mut h = Self::new(m);
        for d in degrees {
            h.add(d, 1);
        }
        h
    }

    pub fn from_counts(pairs: impl IntoIterator<Item = (u64, u64)>, m: u64) -> Self {
        let mut h = Self::new(m);
        for (d, c) in pairs {
            h.add(d, c);
        }
        h
    }

    pub fn add(&mut self, degree: u64, count: u64) {
        if count == 0 {
            return;
        }
        *self.counts.entry(degree).or_default() += count;
        self.total += count;
    }

    pub fn merge(&mut self, other: &DegreeHistogram) {
        for (&d, &c) in &other.counts {
            self.add(d, c);
        }
    }

    pub fn counts(&self) -> &BTreeMap<u64, u64> {
        &self.counts
    }

    pub fn count(&self, degree: u64) -> u64 {
        self.counts.get(&degree).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn mean(&self) -> f64 {
        if self.total == 0 {
            return 0.0;
        }
        self.counts.iter().map(|(&d, &c)| d as f64 * c as f64).sum::<f64>() / self.total as f64
    }

    /// Fraction of nodes with degree `>= k`.
    pub fn ccdf(&self, k: u64) -> f64 {
        if self.total == 0 {
            return 0.0;
        }
        self.counts.range(k..).map(|(_, &c)| c).sum::<u64>() as f64 / self.total as f64
    }

    /// Fraction of nodes with degree in `lo..=hi`.
    pub fn fraction_within(&self, lo: u64, hi: u64) -> f64 {
        if self.total == 0 || lo > hi {
            return 0.0;
        }
        self.counts.range(lo..=hi).map(|(_, &c)| c).sum::<u64>() as f64 / self.total as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn histogram_bookkeeping() {
        let h = DegreeHistogram::from_degrees([2, 2, 3, 5, 0], 2);
        assert_eq!(h.total(), 5);
        assert_eq!(h.count(2), 2);
        assert!((h.ccdf(3) - 0.4).abs() < 1e-15);
        assert!((h.fraction_within(2, 3) - 0.6).abs() < 1e-15);
        assert!((h.mean() - 2.4).abs() < 1e-15);
    }
}
