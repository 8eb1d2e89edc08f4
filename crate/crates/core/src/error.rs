use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degenerate edge rates: lambda + mu must be positive")]
    DegenerateRates,
    #[error("stationary probability {0} has no finite rate pair; use one-sided rates directly")]
    DegenerateProbability(f64),
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("negative time {0}")]
    NegativeTime(f64),
    #[error("{pairs} node pairs exceed the resource cap of {cap} nodes (n = {n})")]
    ResourceCap { n: usize, pairs: u64, cap: usize },
    #[error("distribution is not normalized: total mass {0}")]
    NotNormalized(f64),
    #[error("not enough data: {0}")]
    InsufficientData(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("hazard calibration infeasible: {0}")]
    CalibrationInfeasible(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
