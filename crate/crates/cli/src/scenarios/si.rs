use serde::Serialize;

use dynet_core::analytics::{bound_tau_beta_finite, bound_tau_beta_inf, full_infection_ceiling, lower_bound_tau_n};
use dynet_core::simulator::{simulate_si, simulate_si_with_edges, SiConfig, SiStart, StopRule};
use dynet_core::stats::{ks_two_sample, SampleSet};
use dynet_core::{EdgeParams, GraphSnapshot, InfectionRate};

use super::{edge_params, fmt_list, infection_rate};
use crate::checks::*;
use crate::config::StartKind;
use crate::{check, Ctx, Result};

#[derive(Serialize)]
struct Row {
    n: usize,
    variant: &'static str,
    trial: usize,
    seed: u64,
    /// Infected count when the run stopped.
    infected: usize,
    end_time: f64,
    /// Hitting time of the target count; empty if not reached.
    tau: Option<f64>,
}

struct Group {
    n: usize,
    target: usize,
    variant: &'static str,
    taus: Vec<Option<f64>>,
}

impl Group {
    fn reached(&self) -> Vec<f64> {
        self.taus.iter().flatten().copied().collect()
    }

    fn complete(&self) -> bool {
        self.taus.iter().all(Option::is_some)
    }
}

fn si_config(ctx: &Ctx<'_>, n: usize, params: EdgeParams, beta: InfectionRate, target: usize) -> SiConfig {
    let mut cfg = SiConfig::new(n, params, beta);
    if ctx.cfg.start == Some(StartKind::Empty) {
        cfg.start = SiStart::Snapshot(GraphSnapshot::empty(n));
    }
    cfg.stop = StopRule {
        horizon: ctx.cfg.horizon,
        target: Some(target),
    };
    cfg.limits = ctx.limits;
    cfg
}

pub(super) fn run(ctx: &mut Ctx<'_>) -> Result<()> {
    let params = edge_params(ctx);
    let beta = infection_rate(ctx);
    let trials = ctx.cfg.trials();
    let table = ctx.file("trials.csv");
    let mut variants = vec![("base", params, beta)];
    if let Some(r) = ctx.cfg.scale {
        variants.push(("scaled", params.scaled(r)?, beta.scaled(r)));
    }

    let mut rows = Vec::new();
    let mut groups = Vec::new();
    for n in ctx.cfg.sizes() {
        let target = ctx.cfg.target.unwrap_or(n);
        for &(variant, params, beta) in &variants {
            let cfg = si_config(ctx, n, params, beta, target);
            let runs = ctx.trials(trials, |rng| simulate_si(&cfg, rng))?;
            let taus: Vec<Option<f64>> = runs.iter().map(|t| t.value.hitting_time(target)).collect();
            rows.extend(runs.iter().zip(&taus).map(|(t, &tau)| Row {
                n,
                variant,
                trial: t.index,
                seed: t.seed,
                infected: t.value.infected(),
                end_time: t.value.end_time,
                tau,
            }));
            let group = Group {
                n,
                target,
                variant,
                taus,
            };
            let filter = format!("n={n},variant={variant}");
            let reached = group.reached();
            ctx.aggregate(
                format!("reached_fraction[{filter}]"),
                reached.len() as f64 / trials as f64,
                trials,
                format!("{table}:tau[{filter}]"),
            );
            if !reached.is_empty() {
                ctx.mean_aggregate(format!("mean_tau_{target}[{filter}]"), &reached, format!("{table}:tau[{filter}]"));
            }
            groups.push(group);
        }
        theory(ctx, n, target, params, beta)?;
    }

    if ctx.wants(5) {
        ceiling_check(ctx, &groups, params, beta)?;
    }
    if ctx.wants(6) {
        floor_check(ctx, &groups, params, beta)?;
    }
    if ctx.wants(7) {
        scaling_check(ctx, &groups);
    }
    ctx.table("trials.csv", rows)?;

    if ctx.cfg.export_trajectory == Some(true) {
        // The full-state simulator records every edge; it draws differently
        // from the lumped one, so this is its own run from the first seed.
        let n = ctx.cfg.sizes()[0];
        let target = ctx.cfg.target.unwrap_or(n);
        let cfg = si_config(ctx, n, params, beta, target);
        let mut rng = dynet_core::rng::seeded(ctx.cfg.seed());
        let run = simulate_si_with_edges(&cfg, &mut rng)?;
        let file = ctx.jsonl("trajectory.jsonl", run.events.to_jsonl());
        ctx.meta("trajectory", serde_json::json!({
            "file": file,
            "n": n,
            "seed": ctx.cfg.seed(),
            "initial_edges": run.events.initial.edge_count(),
            "initially_infected": run.events.initially_infected,
            "horizon": run.events.horizon,
        }));
    }
    Ok(())
}

fn theory(ctx: &mut Ctx<'_>, n: usize, target: usize, params: EdgeParams, beta: InfectionRate) -> Result<()> {
    let lambda = params.lambda();
    if n >= 2 {
        ctx.theory(format!("tau_n_floor[n={n}]"), lower_bound_tau_n(n as f64, beta, lambda)?);
    }
    if target >= 2 {
        match beta {
            InfectionRate::Finite(b) => {
                let bound = bound_tau_beta_finite(n as u64, target as u64, b, lambda)?;
                ctx.theory(format!("tau_{target}_upper_sum[n={n}]"), bound.sum);
                ctx.theory(format!("tau_{target}_upper_integral[n={n}]"), bound.integral);
            }
            InfectionRate::Infinite => {
                let bound = bound_tau_beta_inf(n as u64, target as u64, lambda)?;
                ctx.theory(format!("tau_{target}_upper[n={n}]"), bound.exact);
            }
        }
    }
    if let InfectionRate::Finite(b) = beta {
        ctx.theory("tau_n_ceiling", full_infection_ceiling(b, lambda)?);
    }
    Ok(())
}

fn ceiling_check(ctx: &mut Ctx<'_>, groups: &[Group], params: EdgeParams, beta: InfectionRate) -> Result<()> {
    let InfectionRate::Finite(b) = beta else { unreachable!("validated") };
    let ceiling = full_infection_ceiling(b, params.lambda())?;
    let mut ok = true;
    let mut lines = Vec::new();
    let mut c = check(5, "mean tau_n below sqrt(pi^3/(2 beta lambda))", true, String::new());
    for g in groups.iter().filter(|g| g.variant == "base") {
        let s = SampleSet::new(g.reached());
        let complete = g.complete() && g.target == g.n;
        ok &= complete && s.mean() <= ceiling + CEILING_SE * s.std_err();
        lines.push(format!(
            "n={}: mean {:.4} (SE {:.4}){}",
            g.n,
            s.mean(),
            s.std_err(),
            if complete { "" } else { ", some runs stopped short" }
        ));
        c = c.with(&format!("mean_tau_n[n={}]", g.n), s.mean());
    }
    c.pass = ok;
    c.detail = format!("{}; ceiling {ceiling:.4} + {CEILING_SE} SE", fmt_list(&lines));
    ctx.check(c.with("ceiling", ceiling));
    Ok(())
}

fn floor_check(ctx: &mut Ctx<'_>, groups: &[Group], params: EdgeParams, beta: InfectionRate) -> Result<()> {
    let mut ok = true;
    let mut lines = Vec::new();
    let mut c = check(
        6,
        "lower quantile of tau_n above a fraction of sqrt(2 log n/(beta lambda n))",
        true,
        String::new(),
    );
    for g in groups.iter().filter(|g| g.variant == "base") {
        let floor = lower_bound_tau_n(g.n as f64, beta, params.lambda())?;
        let complete = g.complete() && g.target == g.n;
        let q = SampleSet::new(g.reached()).quantile(FLOOR_QUANTILE)?;
        ok &= complete && q >= FLOOR_FACTOR * floor;
        lines.push(format!(
            "n={}: q{:02.0} {q:.4} vs {FLOOR_FACTOR} x {floor:.4} = {:.4}",
            g.n,
            FLOOR_QUANTILE * 100.0,
            FLOOR_FACTOR * floor
        ));
        c = c.with(&format!("quantile[n={}]", g.n), q).with(&format!("floor[n={}]", g.n), floor);
    }
    let start = match ctx.cfg.start {
        Some(StartKind::Empty) => "empty start",
        _ => "stationary start",
    };
    c.pass = ok;
    c.detail = format!("{start}; {}", fmt_list(&lines));
    ctx.check(c);
    Ok(())
}

fn scaling_check(ctx: &mut Ctx<'_>, groups: &[Group]) {
    let r = ctx.cfg.scale.expect("validated");
    let mut ok = true;
    let mut lines = Vec::new();
    let mut c = check(7, "tau_k/r under (alpha, beta) ~ tau_k under (r alpha, r beta)", true, String::new());
    for pair in groups.chunks(2) {
        let [base, scaled] = pair else { unreachable!("variants come in pairs") };
        if !base.complete() || !scaled.complete() {
            ok = false;
            lines.push(format!("n={}: some runs stopped before the target", base.n));
            continue;
        }
        let slow = SampleSet::new(base.reached().iter().map(|t| t / r).collect());
        let fast = SampleSet::new(scaled.reached());
        match ks_two_sample(&slow, &fast) {
            Ok(ks) => {
                ok &= ks.p_value >= SCALING_MIN_P;
                lines.push(format!(
                    "n={}, k={}, r={r}: D = {:.4}, p = {:.4}",
                    base.n, base.target, ks.statistic, ks.p_value
                ));
                c = c.with(&format!("ks_p[n={}]", base.n), ks.p_value);
            }
            Err(e) => {
                ok = false;
                lines.push(format!("n={}: {e}", base.n));
            }
        }
    }
    c.pass = ok;
    c.detail = format!("{} (reject below p = {SCALING_MIN_P})", fmt_list(&lines));
    ctx.check(c);
}
