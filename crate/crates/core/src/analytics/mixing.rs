//! Mixing time of `k` independent telegraph edges started all-on.

use serde::{Deserialize, Serialize};

use super::tv::tv_binomial;
use crate::error::{invalid, Error, Result};
use crate::model::EdgeParams;

/// Coarse grid used to check that TV is nonincreasing before bisecting.
const MONOTONE_GRID: usize = 64;
/// Fine grid of the scan fallback.
const SCAN_GRID: usize = 4096;
const REL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixingQuery {
    pub k: u64,
    pub params: EdgeParams,
    pub level: f64,
}

impl MixingQuery {
    pub fn new(k: u64, params: EdgeParams) -> Self {
        Self { k, params, level: 0.25 }
    }

    pub fn with_level(mut self, level: f64) -> Self {
        self.level = level;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MixingMethod {
    Bisection,
    GridScan,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixingTime {
    pub time: f64,
    pub method: MixingMethod,
    /// `false` when the monotonicity grid check failed and the scan was used.
    pub monotone_verified: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "regime")]
pub enum Regime {
    ConstantP,
    Sparse { c: f64 },
}

/// `p(t) = p + (1 - p) exp(-(lambda + mu) t)`: the on-probability of an
/// edge that started on.
pub fn worst_case_p_t(p: f64, params: &EdgeParams, t: f64) -> Result<f64> {
    if t.is_nan() || t < 0.0 {
        return Err(Error::NegativeTime(t));
    }
    let rate = params
        .relaxation_rate()
        .ok_or_else(|| invalid("params", "instant removal has no finite relaxation rate"))?;
    Ok(p + (1.0 - p) * (-rate * t).exp())
}

/// Time at which `TV(Bin(k, p(t)), Bin(k, p))` falls to `q.level`.
pub fn mixing_time_numeric(q: &MixingQuery) -> Result<MixingTime> {
    if q.k == 0 {
        return Err(invalid("k", "must be >= 1"));
    }
    if !(q.level > 0.0 && q.level < 1.0) {
        return Err(invalid("level", format!("must lie in (0, 1), got {}", q.level)));
    }
    let p = q.params.stationary()?.p;
    if p > 0.5 {
        return Err(invalid("p", format!("worst-case analysis needs p <= 1/2, got {p}")));
    }
    let rate = q
        .params
        .relaxation_rate()
        .filter(|r| *r > 0.0)
        .ok_or_else(|| invalid("params", "relaxation rate must be finite and positive"))?;
    let tv_at = |t: f64| -> Result<f64> { tv_binomial(q.k, worst_case_p_t(p, &q.params, t)?, p) };

    if tv_at(0.0)? <= q.level {
        return Ok(MixingTime {
            time: 0.0,
            method: MixingMethod::Bisection,
            monotone_verified: true,
        });
    }
    let mut hi = 20.0 / rate;
    let mut expansions = 0;
    while tv_at(hi)? > q.level {
        hi *= 2.0;
        expansions += 1;
        if expansions > 60 {
            return Err(Error::Numerical("mixing bracket failed to close".into()));
        }
    }

    let grid: Vec<f64> = (0..=MONOTONE_GRID)
        .map(|i| tv_at(hi * i as f64 / MONOTONE_GRID as f64))
        .collect::<Result<_>>()?;
    let monotone = grid.windows(2).all(|w| w[1] <= w[0] + 1e-12);

    if monotone {
        let time = bisect(0.0, hi, |t| Ok(tv_at(t)? > q.level))?;
        return Ok(MixingTime {
            time,
            method: MixingMethod::Bisection,
            monotone_verified: true,
        });
    }

    // First grid cell where TV drops to the level, refined inside the cell.
    let step = hi / SCAN_GRID as f64;
    let mut prev = 0.0;
    for i in 1..=SCAN_GRID {
        let t = step * i as f64;
        if tv_at(t)? <= q.level {
            let time = bisect(prev, t, |s| Ok(tv_at(s)? > q.level))?;
            return Ok(MixingTime {
                time,
                method: MixingMethod::GridScan,
                monotone_verified: false,
            });
        }
        prev = t;
    }
    Err(Error::Numerical("grid scan never reached the level".into()))
}

/// Boundary between `above(t) == true` on the left and `false` on the right.
fn bisect(mut lo: f64, mut hi: f64, above: impl Fn(f64) -> Result<bool>) -> Result<f64> {
    while hi - lo > REL_TOL * hi {
        let mid = 0.5 * (lo + hi);
        if above(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Leading-order mixing time: `log k / (2 (lambda + mu))` for constant `p`,
/// `c log k / (alpha k)` when `p = c / k`.
///
/// `k` is real-valued so the formula can be evaluated off the integers.
pub fn mixing_time_asymptotic(k: f64, p: f64, alpha: f64, regime: Regime) -> Result<f64> {
    if !(k >= 2.0) || !k.is_finite() {
        return Err(invalid("k", format!("must be finite and >= 2, got {k}")));
    }
    if !(alpha > 0.0) {
        return Err(invalid("alpha", format!("must be positive, got {alpha}")));
    }
    let log_k = k.ln();
    match regime {
        Regime::ConstantP => {
            if !(p > 0.0 && p < 1.0) {
                return Err(invalid("p", format!("must lie in (0, 1), got {p}")));
            }
            let rate = alpha / (p * (1.0 - p));
            Ok(log_k / (2.0 * rate))
        }
        Regime::Sparse { c } => Ok(c * log_k / (alpha * k)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::derive_rates;

    #[test]
    fn p_t_endpoints() {
        let params = EdgeParams::new(0.01, 0.01).unwrap();
        assert_eq!(worst_case_p_t(0.5, &params, 0.0).unwrap(), 1.0);
        assert!((worst_case_p_t(0.5, &params, 1e5).unwrap() - 0.5).abs() < 1e-15);
        let v = worst_case_p_t(0.5, &params, 50.0).unwrap();
        assert!((v - (0.5 + 0.5 * (-1.0f64).exp())).abs() < 1e-15);
    }

    #[test]
    fn asymptotic_examples() {
        let params = derive_rates(0.5, 1.0).unwrap();
        let rate = params.relaxation_rate().unwrap();
        let e2 = std::f64::consts::E.powi(2);
        let t = mixing_time_asymptotic(e2, 0.5, 1.0, Regime::ConstantP).unwrap();
        assert!((t - 1.0 / rate).abs() < 1e-14);

        let sparse = mixing_time_asymptotic(1e4, 2e-4, 1.0, Regime::Sparse { c: 2.0 }).unwrap();
        assert!((sparse - 1.842_068_074_395_237e-3).abs() < 1e-15);

        let a = mixing_time_asymptotic(1e3, 0.3, 1.0, Regime::ConstantP).unwrap();
        let b = mixing_time_asymptotic(1e3, 0.3, 2.0, Regime::ConstantP).unwrap();
        assert!((a / b - 2.0).abs() < 1e-14);
    }

    #[test]
    fn level_boundaries() {
        let params = derive_rates(0.3, 1.0).unwrap();
        let tiny = mixing_time_numeric(&MixingQuery::new(100, params).with_level(1e-6)).unwrap();
        let quarter = mixing_time_numeric(&MixingQuery::new(100, params)).unwrap();
        assert!(tiny.time > quarter.time);
        // TV at t = 0 is 1 - 0.3^100, effectively 1.
        let almost_one = 1.0 - 1e-9;
        let early = mixing_time_numeric(&MixingQuery::new(100, params).with_level(almost_one)).unwrap();
        assert!(early.time < 0.2 * quarter.time);
        assert!(mixing_time_numeric(&MixingQuery::new(100, params).with_level(0.0)).is_err());
        let dense = derive_rates(0.7, 1.0).unwrap();
        assert!(mixing_time_numeric(&MixingQuery::new(100, dense)).is_err());
    }

    #[test]
    fn numeric_hits_the_level() {
        let params = derive_rates(0.2, 0.5).unwrap();
        let q = MixingQuery::new(500, params);
        let m = mixing_time_numeric(&q).unwrap();
        assert_eq!(m.method, MixingMethod::Bisection);
        let at = tv_binomial(500, worst_case_p_t(0.2, &params, m.time).unwrap(), 0.2).unwrap();
        let before = tv_binomial(500, worst_case_p_t(0.2, &params, m.time * 0.99).unwrap(), 0.2).unwrap();
        let after = tv_binomial(500, worst_case_p_t(0.2, &params, m.time * 1.01).unwrap(), 0.2).unwrap();
        assert!(before >= 0.25 && after <= 0.25, "{before} {at} {after}");
    }
}
