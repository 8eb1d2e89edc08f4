use serde::Serialize;

use dynet_core::analytics::FinitePmf;
use dynet_core::stats::{empirical_tv, fit_power_law, SampleSet};
use dynet_core::turnover::{
    effective_edge_probability, effective_edge_probability_pair_lifetime, predicted_degree_density,
    simulate_pa_turnover, simulate_turnover_er, DegreeHistogram, PaConfig, TurnoverConfig,
};

use super::edge_params;
use crate::checks::*;
use crate::{check, Ctx, Result};

/// Batches per trial for the batch-means standard error.
const BATCHES: usize = 50;

#[derive(Serialize)]
struct SampleRow {
    trial: usize,
    seed: u64,
    time: f64,
    nodes: usize,
    edges: usize,
    /// Edges over alive pairs; empty with fewer than two nodes.
    pair_fraction: Option<f64>,
}

pub(super) fn er(ctx: &mut Ctx<'_>) -> Result<()> {
    let params = edge_params(ctx);
    let n = ctx.cfg.n.expect("validated");
    let mut cfg = TurnoverConfig::new(n, params, ctx.cfg.horizon.expect("validated"));
    if let Some(dt) = ctx.cfg.sample_interval {
        cfg.sample_interval = dt;
    }
    if let Some(b) = ctx.cfg.burn_in {
        cfg.burn_in = b;
    }
    ctx.limits.check(n)?;
    let runs = ctx.trials(ctx.cfg.trials(), |rng| simulate_turnover_er(&cfg, rng))?;
    let table = ctx.file("samples.csv");

    let mut rows = Vec::new();
    let mut counts = Vec::new();
    let mut batch_means = Vec::new();
    for run in &runs {
        rows.extend(run.value.samples.iter().map(|s| SampleRow {
            trial: run.index,
            seed: run.seed,
            time: s.time,
            nodes: s.nodes,
            edges: s.edges,
            pair_fraction: s.pair_fraction(),
        }));
        counts.extend(run.value.samples.iter().map(|s| s.nodes as i64));
        // Successive samples are correlated; batch means absorb that.
        let freq: Vec<f64> = run.value.samples.iter().filter_map(|s| s.pair_fraction()).collect();
        let size = freq.len() / BATCHES;
        if size > 0 {
            batch_means.extend(freq.chunks_exact(size).take(BATCHES).map(|c| c.iter().sum::<f64>() / size as f64));
        }
    }

    let p = params.stationary()?.p;
    let printed = effective_edge_probability(p, &params);
    let rederived = effective_edge_probability_pair_lifetime(p, &params);
    ctx.theory("p", p);
    ctx.theory("p_effective_printed", printed);
    ctx.theory("p_effective_pair_lifetime", rederived);
    ctx.theory("mean_nodes", n as f64);

    let node_values: Vec<f64> = counts.iter().map(|&c| c as f64).collect();
    ctx.mean_aggregate("mean_nodes", &node_values, format!("{table}:nodes"));
    let tv = empirical_tv(&counts, &FinitePmf::poisson(n as f64)?)?;
    ctx.aggregate("tv_nodes_vs_poisson", tv, counts.len(), format!("{table}:nodes"));
    let freq = SampleSet::new(batch_means);
    let (observed, se) = (freq.mean(), freq.std_err());
    ctx.mean_aggregate("edge_frequency", &freq.values, format!("{table}:pair_fraction (batch means)"));

    if ctx.wants(9) {
        let matches = |target: f64| (observed - target).abs() <= EDGE_PROB_SIGMAS * se;
        let verdict = match (matches(printed), matches(rederived)) {
            (true, false) => "printed form matches",
            (false, true) => "pair-lifetime form matches",
            (true, true) => "both match",
            (false, false) => "neither matches",
        };
        ctx.check(
            check(
                9,
                "Poisson node count; effective edge probability",
                tv <= TURNOVER_TV_TOL,
                format!(
                    "TV(N, Poisson({n})) = {tv:.4} (tol {TURNOVER_TV_TOL}); edge frequency {observed:.5} ± {se:.5} vs printed {printed:.5}, pair-lifetime {rederived:.5}: {verdict}"
                ),
            )
            .with("tv", tv)
            .with("edge_frequency", observed)
            .with("edge_frequency_se", se)
            .with("printed_matches", matches(printed) as u8 as f64)
            .with("pair_lifetime_matches", matches(rederived) as u8 as f64),
        );
    }
    ctx.table("samples.csv", rows)?;
    Ok(())
}

#[derive(Serialize)]
struct DegreeRow {
    degree: u64,
    count: u64,
    predicted_density: f64,
}

pub(super) fn pa(ctx: &mut Ctx<'_>) -> Result<()> {
    let n = ctx.cfg.n.expect("validated");
    let m = ctx.cfg.m.expect("validated");
    let policy = ctx.cfg.lifespan_policy().expect("validated");
    let mut cfg = PaConfig::new(n, m, policy, ctx.cfg.steps.expect("validated"));
    cfg.average_last = ctx.cfg.average_last;
    let runs = ctx.trials(ctx.cfg.trials(), |rng| simulate_pa_turnover(&cfg, rng))?;

    // Pool trials; the trailing-window table replaces the final snapshot
    // when one was requested.
    let mut hist = DegreeHistogram::new(m as u64);
    for run in &runs {
        hist.merge(run.value.averaged.as_ref().unwrap_or(&run.value.histogram));
    }
    let table = ctx.file("degrees.csv");
    ctx.meta("policy", policy);
    ctx.meta(
        "flags",
        runs.iter().map(|r| r.value.flags).collect::<Vec<_>>(),
    );
    let degree_sums: Vec<f64> = runs.iter().map(|r| r.value.mean_degree_sum).collect();
    ctx.mean_aggregate("mean_degree_sum", &degree_sums, "run metadata (mean over steps)");
    ctx.aggregate("mean_degree", hist.mean(), hist.total() as usize, format!("{table}:count"));
    ctx.theory("mean_degree_sum_2nm", 2.0 * (n * m) as f64);

    let k_min = ctx.cfg.k_min.unwrap_or(2 * m as u64);
    match fit_power_law(&hist, k_min) {
        Ok(fit) => {
            ctx.aggregate("gamma_hat", fit.gamma_hat, fit.n_tail as usize, format!("{table}:count[degree>={k_min}]"));
            ctx.aggregate("gamma_hat_se", fit.std_err, fit.n_tail as usize, format!("{table}:count[degree>={k_min}]"));
        }
        Err(e) => ctx.note(format!("power-law fit skipped: {e}")),
    }

    if ctx.wants(10) {
        exponential_check(ctx, &hist, m as u64, k_min)?;
    }
    if ctx.wants(11) {
        fifo_check(ctx, &hist, m as u64);
    }

    let (mf, nf) = (m as f64, n as f64);
    let rows = hist.counts().iter().map(|(&degree, &count)| DegreeRow {
        degree,
        count,
        predicted_density: predicted_degree_density(degree as f64, mf, nf, &policy),
    });
    ctx.table("degrees.csv", rows.collect::<Vec<_>>())?;
    Ok(())
}

fn exponential_check(ctx: &mut Ctx<'_>, hist: &DegreeHistogram, m: u64, k_min: u64) -> Result<()> {
    let fit = fit_power_law(hist, k_min)?;
    let mut ok = within(PA_GAMMA_RANGE, fit.gamma_hat);
    let mut lines = vec![format!(
        "gamma_hat {:.3} ± {:.3} (k_min {}, want {})",
        fit.gamma_hat,
        fit.std_err,
        fit.k_min,
        show_range(PA_GAMMA_RANGE)
    )];
    let mut c = check(10, "exponential removal: k^-3 tail", true, String::new()).with("gamma_hat", fit.gamma_hat);
    for k in PA_CCDF_POINTS {
        let observed = hist.ccdf(k);
        let predicted = (m * m) as f64 / (k * k) as f64;
        let se = (predicted * (1.0 - predicted) / hist.total() as f64).sqrt();
        ok &= (observed - predicted).abs() <= PA_CCDF_SE * se;
        lines.push(format!("CCDF({k}) {observed:.4} vs {predicted:.4} ± {PA_CCDF_SE} x {se:.4}"));
        c = c.with(&format!("ccdf[{k}]"), observed);
    }
    lines.push(format!("mean degree {:.3} (2m = {})", hist.mean(), 2 * m));
    c.pass = ok;
    c.detail = lines.join("; ");
    ctx.check(c);
    Ok(())
}

fn fifo_check(ctx: &mut Ctx<'_>, hist: &DegreeHistogram, m: u64) {
    let upper = (m as f64 * 0.5f64.exp()).ceil() as u64;
    let fraction = hist.fraction_within(m, upper + FIFO_UPPER_SLACK);
    let (xs, ys): (Vec<f64>, Vec<f64>) = (m..=upper)
        .filter(|&k| hist.count(k) > 0)
        .map(|k| ((k as f64).ln(), (hist.count(k) as f64 / hist.total() as f64).ln()))
        .unzip();
    let slope = if xs.len() >= 2 { slope_with_se(&xs, &ys, &vec![0.0; xs.len()]).0 } else { f64::NAN };
    let ok = fraction >= FIFO_MIN_FRACTION && (slope - FIFO_SLOPE).abs() <= FIFO_SLOPE_TOL;
    ctx.check(
        check(
            11,
            "FIFO removal: 2/k on [m, m sqrt e]",
            ok,
            format!(
                "fraction in [{m}, {}] = {fraction:.4} (want >= {FIFO_MIN_FRACTION}); pmf log-log slope on [{m}, {upper}] = {slope:.3} (want {FIFO_SLOPE} ± {FIFO_SLOPE_TOL}); fraction below m = {:.4}",
                upper + FIFO_UPPER_SLACK,
                1.0 - hist.ccdf(m)
            ),
        )
        .with("fraction_in_range", fraction)
        .with("slope", slope),
    );
}
