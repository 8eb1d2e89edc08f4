//! Scenarios without Monte Carlo: absorbing-chain times, mixing times,
//! hitting-time bounds and the property suites.

use serde::Serialize;

use dynet_core::analytics::{
    bound_tau_beta_finite, bound_tau_beta_inf, full_infection_ceiling, harmonic_form_tau_beta_inf,
    lemma4_hitting_times, lemma4_max_residual, lemma4_t0_asymptotic, lower_bound_tau_n, mixing_time_asymptotic,
    mixing_time_numeric, MixingMethod, MixingQuery, Regime,
};
use dynet_core::{derive_rates, InfectionRate};

use super::{edge_params, fmt_list};
use crate::checks::*;
use crate::{check, Ctx, Result};

#[derive(Serialize)]
struct Lemma4Row {
    n_edges: u64,
    t0_exact: f64,
    t0_asymptotic: f64,
    relative_deviation: f64,
    max_residual: f64,
}

#[derive(Serialize)]
struct HittingRow {
    n_edges: u64,
    state: u64,
    hitting_time: f64,
}

pub(super) fn lemma4(ctx: &mut Ctx<'_>) -> Result<()> {
    let params = edge_params(ctx);
    let beta = ctx.cfg.finite_beta().expect("validated");
    let sizes = ctx.cfg.sizes();
    let mut rows = Vec::new();
    let mut states = Vec::new();
    for &n in &sizes {
        let n = n as u64;
        let times = lemma4_hitting_times(n, &params, beta)?;
        let asymptotic = lemma4_t0_asymptotic(n, params.lambda(), beta)?;
        rows.push(Lemma4Row {
            n_edges: n,
            t0_exact: times[0],
            t0_asymptotic: asymptotic,
            relative_deviation: times[0] / asymptotic - 1.0,
            max_residual: lemma4_max_residual(&times, &params, beta)?,
        });
        ctx.theory(format!("t0_asymptotic[n_edges={n}]"), asymptotic);
        ctx.theory(format!("t0_exact[n_edges={n}]"), times[0]);
        states.extend(times.iter().enumerate().map(|(k, &t)| HittingRow {
            n_edges: n,
            state: k as u64,
            hitting_time: t,
        }));
    }
    if ctx.wants(1) {
        let worst = rows.iter().map(|r| r.relative_deviation.abs()).fold(0.0, f64::max);
        let lines: Vec<String> = rows
            .iter()
            .map(|r| format!("N = {}: t0 = {:.6e}, deviation {:+.4}", r.n_edges, r.t0_exact, r.relative_deviation))
            .collect();
        ctx.check(
            check(
                1,
                "t0 approaches sqrt(pi/(2 beta lambda N))",
                worst <= LEMMA4_REL_TOL,
                format!("{} (tol {LEMMA4_REL_TOL})", fmt_list(&lines)),
            )
            .with("max_abs_relative_deviation", worst)
            .limit(LEMMA4_TIME_LIMIT),
        );
    }
    ctx.table("summary.csv", rows)?;
    ctx.table("hitting_times.csv", states)?;
    Ok(())
}

#[derive(Serialize)]
struct MixingRow {
    regime: &'static str,
    k: u64,
    p: f64,
    alpha: f64,
    level: f64,
    numeric: f64,
    asymptotic: f64,
    ratio: f64,
    method: &'static str,
    monotone_verified: bool,
}

pub(super) fn mixing(ctx: &mut Ctx<'_>) -> Result<()> {
    let params = edge_params(ctx);
    let st = params.stationary()?;
    let k = ctx.cfg.k.expect("validated");
    let level = ctx.cfg.level.unwrap_or(0.25);
    let mut cases = vec![("constant_p", params, st.p, Regime::ConstantP)];
    if let Some(c) = ctx.cfg.c {
        let p = c / k as f64;
        cases.push(("sparse", derive_rates(p, st.alpha)?, p, Regime::Sparse { c }));
    }
    let mut rows = Vec::new();
    for (regime, params, p, asym_regime) in cases {
        let numeric = mixing_time_numeric(&MixingQuery::new(k, params).with_level(level))?;
        let asymptotic = mixing_time_asymptotic(k as f64, p, st.alpha, asym_regime)?;
        ctx.theory(format!("mixing_time_numeric[{regime}]"), numeric.time);
        ctx.theory(format!("mixing_time_asymptotic[{regime}]"), asymptotic);
        ctx.theory(format!("ratio[{regime}]"), numeric.time / asymptotic);
        rows.push(MixingRow {
            regime,
            k,
            p,
            alpha: st.alpha,
            level,
            numeric: numeric.time,
            asymptotic,
            ratio: numeric.time / asymptotic,
            method: match numeric.method {
                MixingMethod::Bisection => "bisection",
                MixingMethod::GridScan => "grid_scan",
            },
            monotone_verified: numeric.monotone_verified,
        });
    }
    if ctx.wants(3) {
        let dense = rows[0].ratio;
        let sparse = rows[1].ratio;
        ctx.check(
            check(
                3,
                "mixing time vs leading-order asymptotics",
                within(MIXING_DENSE_RANGE, dense) && within(MIXING_SPARSE_RANGE, sparse),
                format!(
                    "p = {}: ratio {dense:.4} (want {}); p = c/k: ratio {sparse:.4} (want {})",
                    rows[0].p,
                    show_range(MIXING_DENSE_RANGE),
                    show_range(MIXING_SPARSE_RANGE)
                ),
            )
            .with("ratio_constant_p", dense)
            .with("ratio_sparse", sparse)
            .limit(MIXING_TIME_LIMIT),
        );
    }
    ctx.table("mixing.csv", rows)?;
    Ok(())
}

#[derive(Serialize)]
struct BoundRow {
    n: u64,
    k: u64,
    birth_chain_exact: f64,
    birth_chain_harmonic: f64,
    birth_chain_simplified: f64,
    contact_sum: Option<f64>,
    contact_integral: Option<f64>,
}

pub(super) fn bounds(ctx: &mut Ctx<'_>) -> Result<()> {
    let n = ctx.cfg.n.expect("validated") as u64;
    let lambda = ctx.cfg.lambda.expect("validated");
    let beta = ctx.cfg.finite_beta();
    let ks: Vec<u64> = match ctx.cfg.k {
        Some(k) => vec![k],
        None => (2..=n).collect(),
    };
    let mut rows = Vec::with_capacity(ks.len());
    for k in ks {
        let chain = bound_tau_beta_inf(n, k, lambda)?;
        let contact = beta.map(|b| bound_tau_beta_finite(n, k, b, lambda)).transpose()?;
        rows.push(BoundRow {
            n,
            k,
            birth_chain_exact: chain.exact,
            birth_chain_harmonic: harmonic_form_tau_beta_inf(n, k, lambda)?,
            birth_chain_simplified: chain.simplified,
            contact_sum: contact.map(|c| c.sum),
            contact_integral: contact.map(|c| c.integral),
        });
    }
    ctx.theory("tau_n_floor[beta=inf]", lower_bound_tau_n(n as f64, InfectionRate::Infinite, lambda)?);
    if let Some(b) = beta {
        ctx.theory("tau_n_ceiling", full_infection_ceiling(b, lambda)?);
        ctx.theory("tau_n_floor", lower_bound_tau_n(n as f64, InfectionRate::Finite(b), lambda)?);
    }
    ctx.table("bounds.csv", rows)?;

    if ctx.wants(2) {
        let worst = product_tv_discrepancy();
        ctx.check(
            check(
                2,
                "product-space TV equals binomial TV",
                worst <= PRODUCT_TV_TOL,
                format!(
                    "max |difference| {worst:.2e} over k <= {PRODUCT_TV_MAX_K} and a {0}x{0} grid (tol {PRODUCT_TV_TOL:.0e})",
                    PRODUCT_TV_GRID.len()
                ),
            )
            .with("max_abs_difference", worst)
            .limit(PRODUCT_TV_TIME_LIMIT),
        );
    }
    if ctx.wants(12) {
        let out = property_suites();
        let failures = out.failures();
        ctx.check(
            check(
                12,
                "property suites",
                failures.is_empty(),
                format!(
                    "determinism {}, max mass error {:.1e}, harmonic {:.1e}, residual {:.1e}, crossing mismatches {}{}",
                    out.deterministic,
                    out.worst_mass_error,
                    out.worst_harmonic_error,
                    out.worst_residual,
                    out.crossing_mismatches,
                    if failures.is_empty() { String::new() } else { format!("; failed: {}", failures.join(", ")) }
                ),
            )
            .with("max_mass_error", out.worst_mass_error)
            .with("max_harmonic_error", out.worst_harmonic_error)
            .with("max_residual", out.worst_residual)
            .with("crossing_mismatches", out.crossing_mismatches as f64)
            .limit(PROPERTY_TIME_LIMIT),
        );
    }
    Ok(())
}
