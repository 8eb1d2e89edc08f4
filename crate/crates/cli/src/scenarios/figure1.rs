//! Mean infection curves at the default parameters and under sweeps of
//! each of lambda, mu and beta.

use serde::Serialize;

use dynet_core::simulator::{simulate_si, simulate_si_with_edges, SiConfig, StopRule};
use dynet_core::{EdgeParams, InfectionRate};

use super::edge_params;
use crate::checks::{crossing_time, s_shape};
use crate::{check, Ctx, Result};

const DEFAULT_HORIZON: f64 = 30.0;
const DEFAULT_GRID_POINTS: usize = 601;
const DEFAULT_FACTORS: [f64; 2] = [0.5, 2.0];
/// Half-width of the moving averages used to judge the curve's shape.
const SMOOTHING: usize = 10;

#[derive(Serialize)]
struct CurveRow<'a> {
    series: &'a str,
    lambda: f64,
    mu: f64,
    beta: f64,
    t: f64,
    infected: f64,
}

#[derive(Serialize)]
struct SeriesRow<'a> {
    series: &'a str,
    lambda: f64,
    mu: f64,
    beta: f64,
    trials: usize,
    first_seed: u64,
    t50: Option<f64>,
    t50_shift: Option<f64>,
}

struct Series {
    name: String,
    lambda: f64,
    mu: f64,
    beta: f64,
    first_seed: u64,
    trials: usize,
    curve: Vec<f64>,
}

pub(super) fn run(ctx: &mut Ctx<'_>) -> Result<()> {
    let n = ctx.cfg.sizes()[0];
    let base = edge_params(ctx);
    let (lambda, mu) = (base.lambda(), base.mu().expect("figure1 rates are finite"));
    let beta = ctx.cfg.finite_beta().expect("validated");
    let horizon = ctx.cfg.horizon.unwrap_or(DEFAULT_HORIZON);
    let points = ctx.cfg.grid_points.unwrap_or(DEFAULT_GRID_POINTS);
    let grid: Vec<f64> = (0..points).map(|i| horizon * i as f64 / (points - 1) as f64).collect();
    let factors = ctx.cfg.sweep_factors.clone().unwrap_or(DEFAULT_FACTORS.to_vec());
    let trials = ctx.cfg.trials();

    let mut specs = vec![("default".to_string(), lambda, mu, beta)];
    for &f in &factors {
        specs.push((format!("lambda_x{f}"), lambda * f, mu, beta));
        specs.push((format!("mu_x{f}"), lambda, mu * f, beta));
        specs.push((format!("beta_x{f}"), lambda, mu, beta * f));
    }

    let mut single = None;
    let mut series = Vec::new();
    for (name, l, m, b) in specs {
        let mut cfg = SiConfig::new(n, EdgeParams::new(l, m)?, InfectionRate::Finite(b));
        cfg.stop = StopRule::horizon(horizon);
        cfg.limits = ctx.limits;
        let runs = ctx.trials(trials, |rng| simulate_si(&cfg, rng))?;
        let mut curve = vec![0.0; grid.len()];
        for run in &runs {
            for (c, &t) in curve.iter_mut().zip(&grid) {
                *c += run.value.infected_at(t) as f64 / trials as f64;
            }
        }
        if single.is_none() {
            single = Some(grid.iter().map(|&t| runs[0].value.infected_at(t) as f64).collect::<Vec<_>>());
        }
        series.push(Series {
            name,
            lambda: l,
            mu: m,
            beta: b,
            first_seed: runs[0].seed,
            trials,
            curve,
        });
    }

    let half = n as f64 / 2.0;
    let t50s: Vec<Option<f64>> = series.iter().map(|s| crossing_time(&grid, &s.curve, half)).collect();
    let base_t50 = t50s[0];
    let shift = |i: usize| Some(t50s[i]? - base_t50?);
    let summary: Vec<SeriesRow> = series
        .iter()
        .enumerate()
        .map(|(i, s)| SeriesRow {
            series: &s.name,
            lambda: s.lambda,
            mu: s.mu,
            beta: s.beta,
            trials: s.trials,
            first_seed: s.first_seed,
            t50: t50s[i],
            t50_shift: shift(i),
        })
        .collect();
    let curves_file = ctx.file("curves.csv");
    for (s, t50) in series.iter().zip(&t50s) {
        if let Some(t) = t50 {
            ctx.aggregate(format!("t50[{}]", s.name), *t, s.trials, format!("{curves_file}:infected[series={}]", s.name));
        }
    }

    if ctx.wants(8) {
        let shape = s_shape(&series[0].curve, SMOOTHING);
        let index = |name: &str| series.iter().position(|s| s.name == name).expect("0.5 is among the factors");
        let shifts = [index("lambda_x0.5"), index("beta_x0.5"), index("mu_x0.5")].map(shift);
        let (pass, detail) = match (base_t50, shifts) {
            (Some(t50), [Some(dl), Some(db), Some(dm)]) => (
                shape.s_shaped && dl.abs() > dm.abs() && db.abs() > dm.abs(),
                format!(
                    "monotone {}, smoothed inflections {}; T50 {t50:.2}, shifts: lambda/2 {dl:+.2}, beta/2 {db:+.2}, mu/2 {dm:+.2}",
                    shape.monotone, shape.inflections
                ),
            ),
            _ => (false, format!("some mean curve never reached n/2 = {half} by t = {horizon}")),
        };
        let mut c = check(8, "S-shaped mean curve, weaker dependence on mu", pass, detail)
            .with("inflections", shape.inflections as f64);
        for (key, v) in ["shift_lambda_half", "shift_beta_half", "shift_mu_half"].iter().zip(shifts) {
            if let Some(v) = v {
                c = c.with(key, v);
            }
        }
        ctx.check(c);
    }

    let single = single.expect("at least one series");
    let mut rows = Vec::with_capacity(grid.len() * (series.len() + 1));
    rows.extend(grid.iter().zip(&single).map(|(&t, &x)| CurveRow {
        series: "default_single_run",
        lambda,
        mu,
        beta,
        t,
        infected: x,
    }));
    for s in &series {
        rows.extend(grid.iter().zip(&s.curve).map(|(&t, &x)| CurveRow {
            series: &s.name,
            lambda: s.lambda,
            mu: s.mu,
            beta: s.beta,
            t,
            infected: x,
        }));
    }
    ctx.table("curves.csv", rows)?;
    ctx.table("series.csv", summary)?;

    if ctx.cfg.export_trajectory == Some(true) {
        let mut cfg = SiConfig::new(n, base, InfectionRate::Finite(beta));
        cfg.stop = StopRule::horizon(horizon);
        cfg.limits = ctx.limits;
        let run = simulate_si_with_edges(&cfg, &mut dynet_core::rng::seeded(ctx.cfg.seed()))?;
        let file = ctx.jsonl("trajectory.jsonl", run.events.to_jsonl());
        ctx.meta("trajectory", serde_json::json!({ "file": file, "n": n, "seed": ctx.cfg.seed(), "horizon": horizon }));
    }
    Ok(())
}
