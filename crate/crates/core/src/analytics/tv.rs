//! Total-variation distance on countable spaces and between binomial laws.

use std::collections::BTreeMap;

use statrs::function::beta::beta_reg;
use statrs::function::gamma::ln_gamma;

use crate::error::{invalid, Error, Result};

const NORMALIZATION_TOL: f64 = 1e-12;

/// Above this many trials binomial CDFs switch from log-space summation to
/// the regularized incomplete beta function.
pub const DIRECT_CDF_LIMIT: u64 = 100_000;

/// Probability mass function on a finite set of integer outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct FinitePmf {
    support: Vec<i64>,
    mass: Vec<f64>,
}

impl FinitePmf {
    pub fn new(support: Vec<i64>, mass: Vec<f64>) -> Result<Self> {
        if support.len() != mass.len() {
            return Err(invalid("mass", "support and mass lengths differ"));
        }
        if mass.iter().any(|m| !m.is_finite() || *m < 0.0) {
            return Err(invalid("mass", "masses must be finite and nonnegative"));
        }
        let total: f64 = mass.iter().sum();
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::NotNormalized(total));
        }
        let mut merged: BTreeMap<i64, f64> = BTreeMap::new();
        for (&x, &m) in support.iter().zip(&mass) {
            if merged.insert(x, m).is_some() {
                return Err(invalid("support", format!("duplicate outcome {x}")));
            }
        }
        let (support, mass) = merged.into_iter().unzip();
        Ok(Self { support, mass })
    }

    /// Empirical pmf of integer samples.
    pub fn empirical(samples: &[i64]) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InsufficientData("empirical pmf of no samples".into()));
        }
        let mut counts: BTreeMap<i64, usize> = BTreeMap::new();
        for &x in samples {
            *counts.entry(x).or_default() += 1;
        }
        let n = samples.len() as f64;
        let (support, mass) = counts.into_iter().map(|(x, c)| (x, c as f64 / n)).unzip();
        Ok(Self { support, mass })
    }

    pub fn binomial(k: u64, p: f64) -> Result<Self> {
        check_probability("p", p)?;
        let support = (0..=k as i64).collect();
        let mass = (0..=k).map(|i| binomial_pmf(k, i, p)).collect();
        Self::new(support, mass)
    }

    /// Poisson pmf truncated where the remaining tail is below 1e-16,
    /// renormalized.
    pub fn poisson(mean: f64) -> Result<Self> {
        if !mean.is_finite() || mean <= 0.0 {
            return Err(invalid("mean", format!("must be positive, got {mean}")));
        }
        let hi = (mean + 40.0 * mean.sqrt() + 40.0).ceil() as i64;
        let support: Vec<i64> = (0..=hi).collect();
        let mut mass: Vec<f64> = support
            .iter()
            .map(|&x| (x as f64 * mean.ln() - mean - ln_gamma(x as f64 + 1.0)).exp())
            .collect();
        let total: f64 = mass.iter().sum();
        mass.iter_mut().for_each(|m| *m /= total);
        Self::new(support, mass)
    }

    pub fn support(&self) -> &[i64] {
        &self.support
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    pub fn prob(&self, x: i64) -> f64 {
        self.support
            .binary_search(&x)
            .map(|i| self.mass[i])
            .unwrap_or(0.0)
    }
}

/// Both sides of the crossing-event identity together with the half-L1 sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TvForms {
    pub half_l1: f64,
    /// `xi(E) - nu(E)` with `E = {w : xi(w) >= nu(w)}`.
    pub on_crossing_set: f64,
    /// `nu(E^c) - xi(E^c)`.
    pub on_complement: f64,
}

/// All three forms of the total-variation distance.
pub fn tv_forms(a: &FinitePmf, b: &FinitePmf) -> TvForms {
    let mut outcomes: Vec<i64> = a.support.iter().chain(&b.support).copied().collect();
    outcomes.sort_unstable();
    outcomes.dedup();
    let mut l1 = 0.0;
    let mut on_e = 0.0;
    let mut on_ec = 0.0;
    for x in outcomes {
        let (xi, nu) = (a.prob(x), b.prob(x));
        l1 += (xi - nu).abs();
        if xi >= nu {
            on_e += xi - nu;
        } else {
            on_ec += nu - xi;
        }
    }
    TvForms {
        half_l1: 0.5 * l1,
        on_crossing_set: on_e,
        on_complement: on_ec,
    }
}

/// Total-variation distance, cross-checked against the crossing-event form.
pub fn tv(a: &FinitePmf, b: &FinitePmf) -> Result<f64> {
    let forms = tv_forms(a, b);
    let spread = (forms.half_l1 - forms.on_crossing_set)
        .abs()
        .max((forms.on_crossing_set - forms.on_complement).abs());
    if spread > 1e-9 {
        return Err(Error::Numerical(format!(
            "TV forms disagree by {spread:e}: {forms:?}"
        )));
    }
    Ok(forms.half_l1.clamp(0.0, 1.0))
}

fn check_probability(name: &'static str, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return Err(invalid(name, format!("must lie in [0, 1], got {p}")));
    }
    Ok(())
}

/// `ln Pr[Bin(k, p) = i]`.
pub fn ln_binomial_pmf(k: u64, i: u64, p: f64) -> f64 {
    if i > k {
        return f64::NEG_INFINITY;
    }
    if p == 0.0 {
        return if i == 0 { 0.0 } else { f64::NEG_INFINITY };
    }
    if p == 1.0 {
        return if i == k { 0.0 } else { f64::NEG_INFINITY };
    }
    let (kf, xf) = (k as f64, i as f64);
    ln_gamma(kf + 1.0) - ln_gamma(xf + 1.0) - ln_gamma(kf - xf + 1.0)
        + xf * p.ln()
        + (kf - xf) * (-p).ln_1p()
}

pub fn binomial_pmf(k: u64, i: u64, p: f64) -> f64 {
    ln_binomial_pmf(k, i, p).exp()
}

/// `Pr[Bin(k, p) <= x]`.
pub fn binomial_cdf(k: u64, x: i64, p: f64) -> f64 {
    if x < 0 {
        return 0.0;
    }
    let x = x as u64;
    if x >= k {
        return 1.0;
    }
    if p == 0.0 {
        return 1.0;
    }
    if p == 1.0 {
        return 0.0;
    }
    if k <= DIRECT_CDF_LIMIT {
        (0..=x).map(|i| binomial_pmf(k, i, p)).sum::<f64>().min(1.0)
    } else {
        beta_reg((k - x) as f64, (x + 1) as f64, 1.0 - p)
    }
}

/// `k a_k(q)`: the pmf of `Bin(k, p)` dominates that of `Bin(k, q)` exactly
/// on the integers at or below this point (for `p < q`).
pub fn crossing_point(k: u64, p: f64, q: f64) -> f64 {
    let a = ((1.0 - q) / (1.0 - p)).ln() / ((p * (1.0 - q)) / (q * (1.0 - p))).ln();
    k as f64 * a
}

/// Half-L1 distance between two binomial pmfs, summed term by term.
pub fn tv_binomial_direct(k: u64, p: f64, q: f64) -> f64 {
    let sum: f64 = (0..=k)
        .map(|i| (binomial_pmf(k, i, p) - binomial_pmf(k, i, q)).abs())
        .sum();
    (0.5 * sum).clamp(0.0, 1.0)
}

/// `TV(Bin(k, p), Bin(k, q))` through the crossing point:
/// `Pr[X_p <= k a_k] - Pr[X_q <= k a_k]` for `p < q`.
pub fn tv_binomial(k: u64, p: f64, q: f64) -> Result<f64> {
    if k == 0 {
        return Err(invalid("k", "must be >= 1"));
    }
    check_probability("p", p)?;
    check_probability("q", q)?;
    if p == q {
        return Ok(0.0);
    }
    if p == 0.0 || p == 1.0 || q == 0.0 || q == 1.0 {
        return Ok(tv_binomial_direct(k, p, q));
    }
    let (lo, hi) = if p < q { (p, q) } else { (q, p) };
    let x = crossing_index(k, lo, hi);
    let value = binomial_cdf(k, x, lo) - binomial_cdf(k, x, hi);
    Ok(value.clamp(0.0, 1.0))
}

/// Largest integer in the crossing set, corrected against the exact
/// log-likelihood ratio when `k a_k` rounds badly.
fn crossing_index(k: u64, lo: f64, hi: f64) -> i64 {
    let ratio = |i: i64| {
        let i = i as f64;
        i * (lo / hi).ln() + (k as f64 - i) * ((1.0 - lo) / (1.0 - hi)).ln()
    };
    let mut x = crossing_point(k, lo, hi).floor() as i64;
    x = x.clamp(-1, k as i64);
    while x >= 0 && ratio(x) < 0.0 {
        x -= 1;
    }
    while x < k as i64 && ratio(x + 1) >= 0.0 {
        x += 1;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bernoulli(p: f64) -> FinitePmf {
        FinitePmf::new(vec![0, 1], vec![1.0 - p, p]).unwrap()
    }

    #[test]
    fn tv_basic_cases() {
        let a = bernoulli(0.3);
        assert_eq!(tv(&a, &a).unwrap(), 0.0);
        let x = FinitePmf::new(vec![0, 1], vec![0.5, 0.5]).unwrap();
        let y = FinitePmf::new(vec![2, 3], vec![0.25, 0.75]).unwrap();
        assert!((tv(&x, &y).unwrap() - 1.0).abs() < 1e-15);
        assert!((tv(&bernoulli(0.5), &bernoulli(0.75)).unwrap() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn rejects_unnormalized() {
        assert!(matches!(
            FinitePmf::new(vec![0, 1], vec![0.5, 0.6]),
            Err(Error::NotNormalized(_))
        ));
        assert!(FinitePmf::new(vec![0, 0], vec![0.5, 0.5]).is_err());
        assert!(FinitePmf::new(vec![0], vec![-0.0, 1.0]).is_err());
    }

    #[test]
    fn binomial_tv_small_cases() {
        assert!((tv_binomial(1, 0.2, 0.7).unwrap() - 0.5).abs() < 1e-15);
        // (0.25, 0.5, 0.25) vs (0.0625, 0.375, 0.5625)
        assert!((tv_binomial(2, 0.5, 0.75).unwrap() - 0.3125).abs() < 1e-15);
        assert_eq!(tv_binomial(5, 0.4, 0.4).unwrap(), 0.0);
        assert!((tv_binomial(3, 0.0, 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(tv_binomial(0, 0.1, 0.2).is_err());
    }

    #[test]
    fn binomial_tv_symmetric() {
        for &(p, q) in &[(0.1, 0.35), (0.7, 0.2), (0.01, 0.02)] {
            let a = tv_binomial(40, p, q).unwrap();
            let b = tv_binomial(40, q, p).unwrap();
            assert!((a - b).abs() < 1e-15);
            assert!((a - tv_binomial_direct(40, p, q)).abs() < 1e-12);
        }
    }

    #[test]
    fn incomplete_beta_branch_agrees_with_summation() {
        let k = DIRECT_CDF_LIMIT + 1;
        for &(x, p) in &[(30_000i64, 0.3), (30_500, 0.3), (2, 2.0 / k as f64)] {
            let summed: f64 = (0..=x as u64).map(|i| binomial_pmf(k, i, p)).sum();
            assert!((binomial_cdf(k, x, p) - summed).abs() < 1e-10, "x={x} p={p}");
        }
    }

    #[test]
    fn poisson_reference_is_normalized() {
        let pmf = FinitePmf::poisson(100.0).unwrap();
        assert!((pmf.mass().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!((pmf.prob(100) - 0.039_860_996_809_148_14).abs() < 1e-12);
    }
}
