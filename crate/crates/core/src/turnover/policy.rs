//! Lifespan policies and the degree law they predict.
//!
//! A node's degree grows as `m exp(t / (2n))` with age `t`, so a lifespan
//! survival function `S` maps to the degree density
//! `(2/k) S(2n log(k/m))` for `k >= m`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Which way the young-age hazard moved relative to the tail hazard.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HazardAdjustment {
    Unchanged,
    IncreasedYoung,
    DecreasedYoung,
}

/// Removal hazard whose tail is `(gamma - 1) / (2n)`, closed so that the
/// mean lifespan is `n` (one removal per unit time).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum HazardCalibration {
    /// `young_hazard` below `breakpoint`, `tail_hazard` from then on.
    Piecewise {
        gamma: f64,
        n: f64,
        young_hazard: f64,
        breakpoint: f64,
        tail_hazard: f64,
        adjustment: HazardAdjustment,
    },
    /// Constant `tail_hazard` with every node removed at `max_age`.
    Truncated {
        gamma: f64,
        n: f64,
        tail_hazard: f64,
        max_age: f64,
    },
}

impl HazardCalibration {
    pub fn gamma(&self) -> f64 {
        match *self {
            Self::Piecewise { gamma, .. } | Self::Truncated { gamma, .. } => gamma,
        }
    }

    pub fn hazard(&self, age: f64) -> f64 {
        match *self {
            Self::Piecewise {
                young_hazard,
                breakpoint,
                tail_hazard,
                ..
            } => {
                if age < breakpoint {
                    young_hazard
                } else {
                    tail_hazard
                }
            }
            Self::Truncated { tail_hazard, max_age, .. } => {
                if age < max_age {
                    tail_hazard
                } else {
                    f64::INFINITY
                }
            }
        }
    }

    /// `1 - F_l(age)`.
    pub fn survival(&self, age: f64) -> f64 {
        if age <= 0.0 {
            return 1.0;
        }
        match *self {
            Self::Piecewise {
                young_hazard,
                breakpoint,
                tail_hazard,
                ..
            } => {
                if age < breakpoint {
                    (-young_hazard * age).exp()
                } else {
                    (-young_hazard * breakpoint - tail_hazard * (age - breakpoint)).exp()
                }
            }
            Self::Truncated { tail_hazard, max_age, .. } => {
                if age < max_age {
                    (-tail_hazard * age).exp()
                } else {
                    0.0
                }
            }
        }
    }

    /// Closed-form `integral_0^inf S(t) dt`.
    pub fn mean_lifespan(&self) -> f64 {
        match *self {
            Self::Piecewise {
                young_hazard,
                breakpoint,
                tail_hazard,
                ..
            } => piecewise_mean(young_hazard, breakpoint, tail_hazard),
            Self::Truncated { tail_hazard, max_age, .. } => {
                -(-tail_hazard * max_age).exp_m1() / tail_hazard
            }
        }
    }
}

fn piecewise_mean(young: f64, breakpoint: f64, tail: f64) -> f64 {
    let head = if young * breakpoint < 1e-12 {
        breakpoint * (1.0 - 0.5 * young * breakpoint)
    } else {
        -(-young * breakpoint).exp_m1() / young
    };
    head + (-young * breakpoint).exp() / tail
}

/// Node-removal rule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "policy")]
pub enum LifespanPolicy {
    /// Constant hazard `1/n`: a uniformly random node leaves each step.
    Exponential,
    /// Age-dependent hazard from [`calibrate_hazard`].
    HazardGamma(HazardCalibration),
    /// The oldest node leaves each step.
    Fifo,
}

fn check_gamma_n(gamma: f64, n: f64) -> Result<()> {
    if !(gamma > 1.0) || !gamma.is_finite() {
        return Err(invalid("gamma", format!("must be finite and > 1, got {gamma}")));
    }
    if !(n > 0.0) || !n.is_finite() {
        return Err(invalid("n", format!("must be positive, got {n}")));
    }
    Ok(())
}

const MEAN_REL_TOL: f64 = 1e-6;

/// Piecewise hazard with the breakpoint at age `n`.
pub fn calibrate_hazard(gamma: f64, n: f64) -> Result<HazardCalibration> {
    calibrate_hazard_with_breakpoint(gamma, n, n)
}

/// Solves for the young-age hazard `h0` such that the piecewise hazard
/// (`h0` before `breakpoint`, `(gamma - 1)/(2n)` after) has mean lifespan `n`.
pub fn calibrate_hazard_with_breakpoint(gamma: f64, n: f64, breakpoint: f64) -> Result<HazardCalibration> {
    check_gamma_n(gamma, n)?;
    if !(breakpoint >= 0.0) || !breakpoint.is_finite() {
        return Err(invalid("breakpoint", format!("must be finite and >= 0, got {breakpoint}")));
    }
    let tail = (gamma - 1.0) / (2.0 * n);
    if (gamma - 3.0).abs() < 1e-12 {
        return Ok(HazardCalibration::Piecewise {
            gamma,
            n,
            young_hazard: 1.0 / n,
            breakpoint: 0.0,
            tail_hazard: 1.0 / n,
            adjustment: HazardAdjustment::Unchanged,
        });
    }
    // The mean decreases in h0 from breakpoint + 1/tail (h0 = 0) toward 0.
    let ceiling = breakpoint + 1.0 / tail;
    if ceiling < n * (1.0 - MEAN_REL_TOL) {
        return Err(Error::CalibrationInfeasible(format!(
            "with breakpoint {breakpoint} the longest achievable mean lifespan is {ceiling}, \
             below n = {n}; move the breakpoint past {}",
            n - 1.0 / tail
        )));
    }
    if breakpoint == 0.0 {
        return Err(Error::CalibrationInfeasible(format!(
            "a zero breakpoint leaves only the tail hazard, whose mean lifespan {} != n = {n}",
            1.0 / tail
        )));
    }
    let mean = |h0: f64| piecewise_mean(h0, breakpoint, tail);
    let (mut lo, mut hi) = (0.0, 1.0 / n);
    while mean(hi) > n {
        hi *= 2.0;
        if hi > 1e12 / n {
            return Err(Error::Numerical("young hazard bracket failed".into()));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mean(mid) > n {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    let young = 0.5 * (lo + hi);
    if ((mean(young) - n) / n).abs() > MEAN_REL_TOL {
        return Err(Error::Numerical(format!(
            "mean lifespan {} missed n = {n}",
            mean(young)
        )));
    }
    let adjustment = if young > tail {
        HazardAdjustment::IncreasedYoung
    } else {
        HazardAdjustment::DecreasedYoung
    };
    Ok(HazardCalibration::Piecewise {
        gamma,
        n,
        young_hazard: young,
        breakpoint,
        tail_hazard: tail,
        adjustment,
    })
}

/// Constant tail hazard with a maximum age chosen so the mean lifespan is
/// `n`. Only fat tails (`gamma < 3`) can be closed this way.
pub fn calibrate_hazard_truncated(gamma: f64, n: f64) -> Result<HazardCalibration> {
    check_gamma_n(gamma, n)?;
    let tail = (gamma - 1.0) / (2.0 * n);
    if n * tail >= 1.0 {
        return Err(Error::CalibrationInfeasible(format!(
            "truncation only shortens lifespans; the untruncated mean {} is already <= n = {n}",
            1.0 / tail
        )));
    }
    let max_age = -(-n * tail).ln_1p() / tail;
    Ok(HazardCalibration::Truncated {
        gamma,
        n,
        tail_hazard: tail,
        max_age,
    })
}

/// `(2/k) S(2n log(k/m))` for `k >= m`, zero below `m`.
pub fn eq5_density(k: f64, m: f64, n: f64, survival: impl Fn(f64) -> f64) -> f64 {
    if k < m {
        return 0.0;
    }
    (2.0 / k) * survival(2.0 * n * (k / m).ln())
}

/// Predicted steady-state degree density.
pub fn predicted_degree_density(k: f64, m: f64, n: f64, policy: &LifespanPolicy) -> f64 {
    if k < m {
        return 0.0;
    }
    match policy {
        LifespanPolicy::Exponential => 2.0 * m * m / (k * k * k),
        LifespanPolicy::Fifo => {
            if k <= m * 0.5f64.exp() {
                2.0 / k
            } else {
                0.0
            }
        }
        LifespanPolicy::HazardGamma(cal) => eq5_density(k, m, n, |t| cal.survival(t)),
    }
}
