use serde::Serialize;

use dynet_core::analytics::bound_tau_beta_inf;
use dynet_core::simulator::connectivity_time;

use super::fmt_list;
use crate::checks::*;
use crate::{check, Ctx, Result};

#[derive(Serialize)]
struct Row {
    n: usize,
    trial: usize,
    seed: u64,
    time: f64,
    /// `time` in units of `log n / (lambda n)`.
    time_scaled: f64,
}

pub(super) fn run(ctx: &mut Ctx<'_>) -> Result<()> {
    let lambda = ctx.cfg.lambda.expect("validated");
    let trials = ctx.cfg.trials();
    let table = ctx.file("trials.csv");
    let mut rows = Vec::new();
    let (mut xs, mut dist, mut dist_se) = (Vec::new(), Vec::new(), Vec::new());
    let mut lines = Vec::new();
    let mut in_range = true;
    for n in ctx.cfg.sizes() {
        ctx.limits.check(n)?;
        let runs = ctx.trials(trials, |rng| connectivity_time(n, lambda, rng))?;
        let scale = (n as f64).ln() / (lambda * n as f64);
        let times: Vec<f64> = runs.iter().map(|t| t.value).collect();
        rows.extend(runs.iter().map(|t| Row {
            n,
            trial: t.index,
            seed: t.seed,
            time: t.value,
            time_scaled: t.value / scale,
        }));
        ctx.mean_aggregate(format!("mean_time[n={n}]"), &times, format!("{table}:time[n={n}]"));
        let agg = ctx.report.aggregates.last().expect("just pushed").clone();
        let (ratio, ratio_se) = (agg.value / scale, agg.std_err.unwrap_or(0.0) / scale);
        ctx.aggregate(format!("ratio[n={n}]"), ratio, times.len(), format!("{table}:time_scaled[n={n}]"));
        let bound = bound_tau_beta_inf(n as u64, n as u64, lambda)?.simplified;
        ctx.theory(format!("log_n_over_lambda_n[n={n}]"), scale);
        ctx.theory(format!("upper_bound[n={n}]"), bound);
        in_range &= within(CONNECTIVITY_RATIO_RANGE, ratio) && agg.value <= bound;
        xs.push((n as f64).ln());
        dist.push((ratio - 1.0).abs());
        dist_se.push(ratio_se);
        lines.push(format!("n={n}: ratio {ratio:.4}±{ratio_se:.4}, mean {:.4e} <= {bound:.4e}", agg.value));
    }
    if ctx.wants(4) {
        // Trending toward 1: |ratio - 1| must not grow with log n beyond
        // two standard errors of the fitted slope.
        let (slope, se) = slope_with_se(&xs, &dist, &dist_se);
        let trend = slope - 2.0 * se <= 0.0;
        ctx.check(
            check(
                4,
                "connectivity time ~ log n / (lambda n)",
                in_range && trend,
                format!("{}; d|ratio-1|/dlog n = {slope:+.4} ± {se:.4}", fmt_list(&lines)),
            )
            .with("trend_slope", slope)
            .with("trend_slope_se", se)
            .limit(CONNECTIVITY_TIME_LIMIT),
        );
    }
    ctx.table("trials.csv", rows)?;
    Ok(())
}
