//! Acceptance tolerances and the statistics used to judge them.

use dynet_core::analytics::{
    bound_tau_beta_inf, crossing_point, harmonic_form_tau_beta_inf, lemma4_hitting_times, lemma4_max_residual,
    tv_binomial,
};
use dynet_core::rng::seeded;
use dynet_core::simulator::{simulate_dynamic_graph, simulate_si, SiConfig, SimLimits};
use dynet_core::turnover::{
    calibrate_hazard, calibrate_hazard_truncated, predicted_degree_density, simulate_pa_turnover,
    simulate_turnover_er, HazardCalibration, LifespanPolicy, PaConfig, TurnoverConfig,
};
use dynet_core::{sample_stationary_graph, EdgeParams, InfectionRate};

pub const LEMMA4_REL_TOL: f64 = 0.05;
pub const LEMMA4_TIME_LIMIT: f64 = 1.0;

pub const PRODUCT_TV_TOL: f64 = 1e-12;
pub const PRODUCT_TV_MAX_K: u32 = 12;
pub const PRODUCT_TV_GRID: [f64; 5] = [0.05, 0.25, 0.5, 0.75, 0.95];
pub const PRODUCT_TV_TIME_LIMIT: f64 = 10.0;

pub const MIXING_DENSE_RANGE: (f64, f64) = (0.9, 1.1);
pub const MIXING_SPARSE_RANGE: (f64, f64) = (0.8, 1.2);
pub const MIXING_TIME_LIMIT: f64 = 60.0;

pub const CONNECTIVITY_RATIO_RANGE: (f64, f64) = (0.8, 1.3);
pub const CONNECTIVITY_TIME_LIMIT: f64 = 120.0;

/// Allowed excess of the mean over the ceiling, in standard errors.
pub const CEILING_SE: f64 = 3.0;
pub const FLOOR_QUANTILE: f64 = 0.05;
pub const FLOOR_FACTOR: f64 = 0.7;
pub const SCALING_MIN_P: f64 = 1e-3;

pub const TURNOVER_TV_TOL: f64 = 0.05;
/// Agreement band for the effective edge probability, in standard errors.
pub const EDGE_PROB_SIGMAS: f64 = 3.0;

pub const PA_GAMMA_RANGE: (f64, f64) = (2.7, 3.3);
pub const PA_CCDF_POINTS: [u64; 2] = [4, 8];
pub const PA_CCDF_SE: f64 = 3.0;
pub const FIFO_MIN_FRACTION: f64 = 0.99;
/// Allowed spill past `m sqrt(e)` when counting degrees in range.
pub const FIFO_UPPER_SLACK: u64 = 3;
pub const FIFO_SLOPE: f64 = -1.0;
pub const FIFO_SLOPE_TOL: f64 = 0.2;

pub const NORMALIZATION_TOL: f64 = 1e-6;
pub const HARMONIC_TOL: f64 = 1e-12;
pub const RESIDUAL_TOL: f64 = 1e-9;
pub const CROSSING_MAX_K: u64 = 200;
pub const PROPERTY_TIME_LIMIT: f64 = 60.0;

pub fn within(range: (f64, f64), x: f64) -> bool {
    x >= range.0 && x <= range.1
}

pub fn show_range(range: (f64, f64)) -> String {
    format!("[{}, {}]", range.0, range.1)
}

/// Least-squares slope of `y` on `x` and its standard error, propagated
/// from independent per-point standard errors `y_se`.
pub fn slope_with_se(x: &[f64], y: &[f64], y_se: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let var: f64 = x.iter().zip(y_se).map(|(a, s)| ((a - mx) / sxx).powi(2) * s * s).sum();
    (sxy / sxx, var.sqrt())
}

/// TV between product measures of `k` Bernoulli coordinates, summed over
/// all `2^k` configurations.
pub fn product_space_tv(k: u32, p: f64, q: f64) -> f64 {
    let mut sum = 0.0;
    for mask in 0u32..(1 << k) {
        let ones = mask.count_ones() as i32;
        let zeros = k as i32 - ones;
        let a = p.powi(ones) * (1.0 - p).powi(zeros);
        let b = q.powi(ones) * (1.0 - q).powi(zeros);
        sum += (a - b).abs();
    }
    0.5 * sum
}

/// Worst disagreement between product-space and binomial TV over the grid.
pub fn product_tv_discrepancy() -> f64 {
    let mut worst: f64 = 0.0;
    for k in 1..=PRODUCT_TV_MAX_K {
        for &p in &PRODUCT_TV_GRID {
            for &q in &PRODUCT_TV_GRID {
                let binomial = tv_binomial(k as u64, p, q).expect("grid values are valid");
                worst = worst.max((product_space_tv(k, p, q) - binomial).abs());
            }
        }
    }
    worst
}

pub fn moving_average(xs: &[f64], half: usize) -> Vec<f64> {
    (0..xs.len())
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + half + 1).min(xs.len());
            xs[lo..hi].iter().sum::<f64>() / (hi - lo) as f64
        })
        .collect()
}

/// First grid time at which the curve reaches `level`, interpolated.
pub fn crossing_time(grid: &[f64], curve: &[f64], level: f64) -> Option<f64> {
    let i = curve.iter().position(|&v| v >= level)?;
    if i == 0 {
        return Some(grid[0]);
    }
    let (t0, t1, v0, v1) = (grid[i - 1], grid[i], curve[i - 1], curve[i]);
    Some(t0 + (level - v0) / (v1 - v0) * (t1 - t0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Shape {
    pub monotone: bool,
    /// Sign changes of the smoothed second difference.
    pub inflections: usize,
    pub s_shaped: bool,
}

/// Monotone with one inflection: the smoothed increments rise to a single
/// peak and then fall. Differences below `1e-3` of the peak increment are
/// treated as flat.
pub fn s_shape(curve: &[f64], half_window: usize) -> Shape {
    let monotone = curve.windows(2).all(|w| w[1] >= w[0]);
    let smooth = moving_average(curve, half_window);
    let inc: Vec<f64> = smooth.windows(2).map(|w| w[1] - w[0]).collect();
    let inc = moving_average(&inc, half_window);
    let scale = inc.iter().cloned().fold(0.0, f64::max);
    // Near the ends the averaging windows are truncated, which bends the
    // smoothed curve on its own; only second differences with full windows
    // on both passes count.
    let second: Vec<f64> = inc.windows(2).map(|w| w[1] - w[0]).collect();
    let trim = (2 * half_window).min(second.len() / 2);
    let signs: Vec<i8> = second[trim..second.len() - trim]
        .iter()
        .copied()
        .filter(|d| d.abs() > 1e-3 * scale)
        .map(|d| if d > 0.0 { 1 } else { -1 })
        .collect();
    let inflections = signs.windows(2).filter(|w| w[0] != w[1]).count();
    Shape {
        monotone,
        inflections,
        s_shaped: monotone && inflections == 1 && signs.first() == Some(&1),
    }
}

/// Composite Simpson rule on `[a, b]` with `panels` (even) subintervals.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    let mut s = f(a) + f(b);
    for i in 1..panels {
        s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

/// `integral_m^inf density(k) dk` on the log scale `k = m e^u`, split at
/// kinks of the integrand. Each piece stops just short of its right end so
/// that a jump there (FIFO cutoff, maximum age) is never sampled.
pub fn density_mass(density: impl Fn(f64) -> f64, m: f64, kinks: &[f64], u_max: f64) -> f64 {
    let g = |u: f64| {
        let k = m * u.exp();
        density(k) * k
    };
    let mut cuts = vec![0.0];
    cuts.extend(kinks.iter().copied().filter(|&u| u > 0.0 && u < u_max));
    cuts.push(u_max);
    cuts.windows(2).map(|w| simpson(g, w[0], w[1] - 1e-12, 20_000)).sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyOutcome {
    pub deterministic: bool,
    pub worst_mass_error: f64,
    pub worst_harmonic_error: f64,
    pub worst_residual: f64,
    pub crossing_mismatches: usize,
}

impl PropertyOutcome {
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.deterministic {
            out.push("determinism".to_string());
        }
        if self.worst_mass_error > NORMALIZATION_TOL {
            out.push(format!("normalization {:.2e}", self.worst_mass_error));
        }
        if self.worst_harmonic_error > HARMONIC_TOL {
            out.push(format!("harmonic identity {:.2e}", self.worst_harmonic_error));
        }
        if self.worst_residual > RESIDUAL_TOL {
            out.push(format!("recurrence residual {:.2e}", self.worst_residual));
        }
        if self.crossing_mismatches > 0 {
            out.push(format!("crossing set mismatches {}", self.crossing_mismatches));
        }
        out
    }
}

/// Determinism, density normalization, the birth-chain harmonic identity,
/// hitting-time recurrence residuals, and binomial crossing sets.
pub fn property_suites() -> PropertyOutcome {
    let params = EdgeParams::new(0.3, 0.2).expect("valid rates");
    let g0 = sample_stationary_graph(60, 0.6, &mut seeded(1)).expect("valid p");
    let dynamic = || simulate_dynamic_graph(60, &params, &g0, 5.0, &SimLimits::default(), &mut seeded(2)).ok();
    let si_cfg = SiConfig::new(80, params, InfectionRate::Finite(0.5));
    let si = || simulate_si(&si_cfg, &mut seeded(3)).ok();
    let pa_cfg = PaConfig::new(500, 2, LifespanPolicy::Exponential, 2000);
    let pa = || simulate_pa_turnover(&pa_cfg, &mut seeded(4)).ok();
    let er_cfg = TurnoverConfig::new(50, params, 50.0);
    let er = || simulate_turnover_er(&er_cfg, &mut seeded(5)).ok();
    let deterministic = dynamic().is_some_and(|a| Some(a) == dynamic())
        && si().is_some_and(|a| Some(a) == si())
        && pa().is_some_and(|a| Some(a) == pa())
        && er().is_some_and(|a| Some(a) == er());

    let (m, n) = (2.0, 1000.0);
    let mut worst_mass: f64 = 0.0;
    let mass = density_mass(|k| predicted_degree_density(k, m, n, &LifespanPolicy::Exponential), m, &[], 40.0);
    worst_mass = worst_mass.max((mass - 1.0).abs());
    let mass = density_mass(|k| predicted_degree_density(k, 1.0, n, &LifespanPolicy::Fifo), 1.0, &[], 0.5);
    worst_mass = worst_mass.max((mass - 1.0).abs());
    for cal in [calibrate_hazard(4.0, n), calibrate_hazard(2.0, n), calibrate_hazard_truncated(2.0, n)] {
        let cal = cal.expect("calibration feasible for these gammas");
        // The integrand kinks where 2n log(k/m) crosses the hazard breakpoint.
        let kink = match cal {
            HazardCalibration::Piecewise { breakpoint, .. } => breakpoint,
            HazardCalibration::Truncated { max_age, .. } => max_age,
        } / (2.0 * n);
        let policy = LifespanPolicy::HazardGamma(cal);
        let mass = density_mass(|k| predicted_degree_density(k, m, n, &policy), m, &[kink], 40.0);
        worst_mass = worst_mass.max((mass - 1.0).abs());
    }

    let mut worst_harmonic: f64 = 0.0;
    for n in 2..=300u64 {
        for k in 2..=n {
            let exact = bound_tau_beta_inf(n, k, 1.0).expect("valid").exact;
            let closed = harmonic_form_tau_beta_inf(n, k, 1.0).expect("valid");
            worst_harmonic = worst_harmonic.max((exact - closed).abs() / closed);
        }
    }

    let mut worst_residual: f64 = 0.0;
    for &(n_edges, lambda, mu, beta) in &[
        (10u64, 1.0, 1.0, 1.0),
        (1000, 0.01, 0.01, 0.015),
        (100_000, 1.0, 1.0, 1.0),
        (5000, 3.0, 0.1, 0.2),
    ] {
        let params = EdgeParams::new(lambda, mu).expect("valid rates");
        let times = lemma4_hitting_times(n_edges, &params, beta).expect("solvable");
        worst_residual = worst_residual.max(lemma4_max_residual(&times, &params, beta).expect("valid"));
    }

    // Bin(k, p) outweighs Bin(k, q), p < q, exactly on {i <= k a_k}.
    let mut mismatches = 0;
    let probs = [0.02, 0.1, 0.3, 0.45, 0.5, 0.7, 0.93];
    for k in 1..=CROSSING_MAX_K {
        for &p in &probs {
            for &q in probs.iter().filter(|&&q| q > p) {
                let a = crossing_point(k, p, q);
                for i in 0..=k {
                    let log_ratio = i as f64 * (p / q).ln() + (k - i) as f64 * ((1.0 - p) / (1.0 - q)).ln();
                    if log_ratio.abs() < 1e-9 {
                        continue;
                    }
                    if (log_ratio > 0.0) != (i as f64 <= a) {
                        mismatches += 1;
                    }
                }
            }
        }
    }

    PropertyOutcome {
        deterministic,
        worst_mass_error: worst_mass,
        worst_harmonic_error: worst_harmonic,
        worst_residual,
        crossing_mismatches: mismatches,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_a_line() {
        let x = [0.0, 1.0, 2.0, 3.0];
        let y = [1.0, 3.0, 5.0, 7.0];
        let (slope, se) = slope_with_se(&x, &y, &[0.1; 4]);
        assert!((slope - 2.0).abs() < 1e-12);
        // var = sum ((x - 1.5)/5)^2 0.01 = 0.01 * 5 / 25
        assert!((se - (0.002f64).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn product_tv_small_case() {
        // k = 1: TV of two Bernoullis is |p - q|.
        assert!((product_space_tv(1, 0.2, 0.7) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn logistic_curve_is_s_shaped() {
        let grid: Vec<f64> = (0..400).map(|i| i as f64 * 0.05).collect();
        let curve: Vec<f64> = grid.iter().map(|t| 100.0 / (1.0 + (-(t - 10.0)).exp())).collect();
        let shape = s_shape(&curve, 10);
        assert!(shape.s_shaped, "{shape:?}");
        assert!((crossing_time(&grid, &curve, 50.0).unwrap() - 10.0).abs() < 1e-2);
        let concave: Vec<f64> = grid.iter().map(|t| 100.0 * (1.0 - (-t).exp())).collect();
        assert!(!s_shape(&concave, 10).s_shaped);
    }

    #[test]
    fn simpson_is_exact_on_cubics() {
        assert!((simpson(|x| x * x * x, 0.0, 2.0, 2) - 4.0).abs() < 1e-12);
    }
}
