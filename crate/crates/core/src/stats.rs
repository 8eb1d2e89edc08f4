//! Estimators and tests used to compare simulation output with theory.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF, Normal};

use crate::analytics::FinitePmf;
use crate::error::{invalid, Error, Result};
use crate::turnover::DegreeHistogram;

/// Where a sample set came from.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SampleMeta {
    pub scenario: String,
    pub first_seed: u64,
    pub last_seed: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SampleSet {
    pub values: Vec<f64>,
    pub meta: SampleMeta,
}

impl SampleSet {
    pub fn new(values: Vec<f64>) -> Self {
        Self {
            values,
            meta: SampleMeta::default(),
        }
    }

    pub fn with_meta(values: Vec<f64>, meta: SampleMeta) -> Self {
        Self { values, meta }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Unbiased sample variance.
    pub fn variance(&self) -> f64 {
        let n = self.values.len();
        if n < 2 {
            return 0.0;
        }
        let m = self.mean();
        self.values.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1) as f64
    }

    pub fn std_err(&self) -> f64 {
        (self.variance() / self.values.len() as f64).sqrt()
    }

    /// Linear-interpolated quantile, `q` in `[0, 1]`.
    pub fn quantile(&self, q: f64) -> Result<f64> {
        if self.values.is_empty() {
            return Err(Error::InsufficientData("quantile of no samples".into()));
        }
        if !(0.0..=1.0).contains(&q) {
            return Err(invalid("q", format!("must lie in [0, 1], got {q}")));
        }
        let mut sorted = self.values.clone();
        sorted.sort_by(f64::total_cmp);
        let pos = q * (sorted.len() - 1) as f64;
        let lo = pos.floor() as usize;
        let hi = pos.ceil() as usize;
        Ok(sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo]))
    }
}

impl From<Vec<f64>> for SampleSet {
    fn from(values: Vec<f64>) -> Self {
        Self::new(values)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanCi {
    pub mean: f64,
    pub lo: f64,
    pub hi: f64,
    pub std_err: f64,
}

/// Two-sided normal quantile for confidence `level`.
pub fn normal_quantile(level: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&level) {
        return Err(invalid("level", format!("must lie in [0, 1), got {level}")));
    }
    if level == 0.0 {
        return Ok(0.0);
    }
    let normal = Normal::standard();
    Ok(normal.inverse_cdf(0.5 + level / 2.0))
}

/// Normal-approximation confidence interval for the mean.
pub fn mean_ci(samples: &SampleSet, level: f64) -> Result<MeanCi> {
    if samples.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "confidence interval needs >= 2 samples, got {}",
            samples.len()
        )));
    }
    let z = normal_quantile(level)?;
    let mean = samples.mean();
    let se = samples.std_err();
    Ok(MeanCi {
        mean,
        lo: mean - z * se,
        hi: mean + z * se,
        std_err: se,
    })
}

/// Half-L1 distance between the empirical pmf of `samples` and `reference`.
pub fn empirical_tv(samples: &[i64], reference: &FinitePmf) -> Result<f64> {
    let empirical = FinitePmf::empirical(samples)?;
    Ok(crate::analytics::tv_forms(&empirical, reference).half_l1.clamp(0.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsResult {
    pub statistic: f64,
    pub p_value: f64,
}

/// Survival function of the Kolmogorov distribution.
pub fn kolmogorov_survival(x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    if x < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let kf = k as f64;
        let term = (-2.0 * kf * kf * x * x).exp();
        sum += if k % 2 == 1 { term } else { -term };
        if term < 1e-18 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Asymptotic p-value with the Stephens small-sample correction.
fn ks_p_value(statistic: f64, effective_n: f64) -> f64 {
    let root = effective_n.sqrt();
    kolmogorov_survival((root + 0.12 + 0.11 / root) * statistic)
}

fn sorted(values: &[f64]) -> Result<Vec<f64>> {
    if values.is_empty() {
        return Err(Error::InsufficientData("KS test of an empty sample".into()));
    }
    if values.iter().any(|x| x.is_nan()) {
        return Err(invalid("samples", "NaN observation"));
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// Two-sample Kolmogorov–Smirnov statistic and asymptotic p-value.
pub fn ks_two_sample(a: &SampleSet, b: &SampleSet) -> Result<KsResult> {
    let (x, y) = (sorted(&a.values)?, sorted(&b.values)?);
    let (n, m) = (x.len() as f64, y.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < x.len() && j < y.len() {
        let t = x[i].min(y[j]);
        while i < x.len() && x[i] <= t {
            i += 1;
        }
        while j < y.len() && y[j] <= t {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    Ok(KsResult {
        statistic: d,
        p_value: ks_p_value(d, n * m / (n + m)),
    })
}

/// One-sample Kolmogorov–Smirnov test against a continuous CDF.
pub fn ks_one_sample(samples: &SampleSet, cdf: impl Fn(f64) -> f64) -> Result<KsResult> {
    let x = sorted(&samples.values)?;
    let n = x.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &v) in x.iter().enumerate() {
        let f = cdf(v);
        d = d.max(f - i as f64 / n).max((i + 1) as f64 / n - f);
    }
    Ok(KsResult {
        statistic: d,
        p_value: ks_p_value(d, n),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChiSquareResult {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

/// Pearson goodness of fit of integer counts against category
/// probabilities, pooling adjacent categories until each expects >= 5.
pub fn chi_square_gof(counts: &[u64], probs: &[f64]) -> Result<ChiSquareResult> {
    if counts.len() != probs.len() || counts.is_empty() {
        return Err(invalid("counts", "counts and probabilities must align"));
    }
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return Err(Error::InsufficientData("no observations".into()));
    }
    let total = total as f64;
    let mut pooled: Vec<(f64, f64)> = Vec::new();
    let (mut obs, mut exp) = (0.0, 0.0);
    for (&c, &p) in counts.iter().zip(probs) {
        obs += c as f64;
        exp += p * total;
        if exp >= 5.0 {
            pooled.push((obs, exp));
            obs = 0.0;
            exp = 0.0;
        }
    }
    if exp > 0.0 || obs > 0.0 {
        match pooled.last_mut() {
            Some(last) => {
                last.0 += obs;
                last.1 += exp;
            }
            None => pooled.push((obs, exp)),
        }
    }
    if pooled.len() < 2 {
        return Err(Error::InsufficientData("fewer than two pooled categories".into()));
    }
    let statistic: f64 = pooled.iter().map(|(o, e)| (o - e).powi(2) / e).sum();
    let dof = pooled.len() - 1;
    let dist = ChiSquared::new(dof as f64).map_err(|e| Error::Numerical(e.to_string()))?;
    Ok(ChiSquareResult {
        statistic,
        dof,
        p_value: 1.0 - dist.cdf(statistic),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub gamma_hat: f64,
    pub k_min: u64,
    pub n_tail: u64,
    pub std_err: f64,
}

/// Minimum tail observations for a fit.
pub const MIN_TAIL: u64 = 10;

/// Continuous-MLE (Hill) exponent of the degree tail `k >= k_min`, with the
/// usual half-integer shift of the cutoff for discrete data.
pub fn fit_power_law(hist: &DegreeHistogram, k_min: u64) -> Result<FitResult> {
    fit_power_law_shifted(hist, k_min, 0.5)
}

/// Hill estimate `1 + n / sum ln(k_i / (k_min - shift))`.
pub fn fit_power_law_shifted(hist: &DegreeHistogram, k_min: u64, shift: f64) -> Result<FitResult> {
    let x_min = k_min as f64 - shift;
    if !(x_min > 0.0) {
        return Err(invalid("k_min", format!("k_min - shift must be positive, got {x_min}")));
    }
    let tail = hist.counts().range(k_min..);
    let (mut n_tail, mut log_sum) = (0u64, 0.0);
    let mut distinct = 0;
    for (&k, &c) in tail {
        if c == 0 {
            continue;
        }
        distinct += 1;
        n_tail += c;
        log_sum += c as f64 * (k as f64 / x_min).ln();
    }
    if n_tail < MIN_TAIL {
        return Err(Error::InsufficientData(format!(
            "{n_tail} observations with degree >= {k_min}, need {MIN_TAIL}"
        )));
    }
    if distinct < 2 || !(log_sum > 0.0) {
        return Err(Error::InsufficientData(
            "tail has a single distinct degree; the exponent is unidentified".into(),
        ));
    }
    let gamma_hat = 1.0 + n_tail as f64 / log_sum;
    Ok(FitResult {
        gamma_hat,
        k_min,
        n_tail,
        std_err: (gamma_hat - 1.0) / (n_tail as f64).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ci_of_constant_samples_is_a_point() {
        let s = SampleSet::new(vec![2.5; 10]);
        let ci = mean_ci(&s, 0.95).unwrap();
        assert_eq!((ci.lo, ci.mean, ci.hi), (2.5, 2.5, 2.5));
        let s = SampleSet::new(vec![1.0, 2.0, 3.0]);
        let ci = mean_ci(&s, 0.0).unwrap();
        assert_eq!((ci.lo, ci.hi), (2.0, 2.0));
        assert!(mean_ci(&SampleSet::new(vec![1.0]), 0.9).is_err());
    }

    #[test]
    fn normal_quantile_reference_values() {
        assert!((normal_quantile(0.95).unwrap() - 1.959_963_984_540_054).abs() < 1e-9);
        assert!((normal_quantile(0.99).unwrap() - 2.575_829_303_548_901).abs() < 1e-9);
    }

    #[test]
    fn empirical_tv_cases() {
        let uniform = FinitePmf::new((0..10).collect(), vec![0.1; 10]).unwrap();
        assert!((empirical_tv(&[3; 50], &uniform).unwrap() - 0.9).abs() < 1e-12);
        let samples = [1, 1, 2, 5, 5, 5];
        let own = FinitePmf::empirical(&samples).unwrap();
        assert!(empirical_tv(&samples, &own).unwrap().abs() < 1e-15);
    }

    #[test]
    fn ks_extremes() {
        let a = SampleSet::new(vec![0.3, 0.1, 0.7, 0.2]);
        let r = ks_two_sample(&a, &a).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert!((r.p_value - 1.0).abs() < 1e-12);
        let b = SampleSet::new(vec![5.0, 6.0, 7.0]);
        assert_eq!(ks_two_sample(&a, &b).unwrap().statistic, 1.0);
        assert!(ks_two_sample(&a, &SampleSet::default()).is_err());
    }

    #[test]
    fn kolmogorov_survival_reference() {
        // Q(1.36) is the classic 5% critical point.
        assert!((kolmogorov_survival(1.3581) - 0.05).abs() < 1e-3);
        assert!((kolmogorov_survival(1.9495) - 0.001).abs() < 1e-4);
    }

    #[test]
    fn chi_square_perfect_fit() {
        let r = chi_square_gof(&[25, 50, 25], &[0.25, 0.5, 0.25]).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert_eq!(r.dof, 2);
        assert!((r.p_value - 1.0).abs() < 1e-12);
    }

    fn hist(pairs: &[(u64, u64)], m: u64) -> DegreeHistogram {
        DegreeHistogram::from_counts(pairs.iter().copied(), m)
    }

    #[test]
    fn power_law_error_paths() {
        assert!(fit_power_law(&hist(&[(4, 5), (5, 3)], 2), 4).is_err());
        assert!(fit_power_law(&hist(&[(4, 100)], 2), 4).is_err());
        assert!(fit_power_law(&hist(&[(4, 100), (9, 3)], 2), 0).is_err());
    }

    #[test]
    fn power_law_scale_invariance() {
        let h = hist(&[(3, 40), (4, 25), (6, 9), (9, 5), (20, 1)], 3);
        let doubled = hist(&[(6, 40), (8, 25), (12, 9), (18, 5), (40, 1)], 6);
        let a = fit_power_law_shifted(&h, 3, 0.5).unwrap();
        let b = fit_power_law_shifted(&doubled, 6, 1.0).unwrap();
        assert!((a.gamma_hat - b.gamma_hat).abs() < 1e-12);
        let a = fit_power_law_shifted(&h, 3, 0.0).unwrap();
        let b = fit_power_law_shifted(&doubled, 6, 0.0).unwrap();
        assert!((a.gamma_hat - b.gamma_hat).abs() < 1e-12);
    }
}
