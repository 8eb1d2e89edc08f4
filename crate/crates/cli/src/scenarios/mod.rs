//! One module per scenario family. Each reads its parameters from the
//! validated config, writes its tables through [`Ctx`], and appends the
//! checks the config selects.

mod analytic;
mod connectivity;
mod figure1;
mod si;
mod turnover;

use dynet_core::{EdgeParams, InfectionRate};

use crate::config::ScenarioKind;
use crate::{Ctx, Result};

pub(crate) fn dispatch(ctx: &mut Ctx<'_>) -> Result<()> {
    match ctx.cfg.kind() {
        ScenarioKind::Lemma4 => analytic::lemma4(ctx),
        ScenarioKind::Mixing => analytic::mixing(ctx),
        ScenarioKind::Bounds => analytic::bounds(ctx),
        ScenarioKind::Connectivity => connectivity::run(ctx),
        ScenarioKind::Si => si::run(ctx),
        ScenarioKind::Figure1 => figure1::run(ctx),
        ScenarioKind::TurnoverEr => turnover::er(ctx),
        ScenarioKind::PaTurnover => turnover::pa(ctx),
    }
}

// Validation has already established these, so failures here are bugs.

fn edge_params(ctx: &Ctx<'_>) -> EdgeParams {
    ctx.cfg.edge_params().expect("validated config has edge rates")
}

fn infection_rate(ctx: &Ctx<'_>) -> InfectionRate {
    ctx.cfg.infection_rate().expect("validated config has beta")
}

fn fmt_list(items: &[String]) -> String {
    items.join("; ")
}
