//! What `dynet list` prints.

use serde::Serialize;

use crate::config::ScenarioKind;

#[derive(Debug, Clone, Serialize)]
pub struct CatalogEntry {
    pub kind: ScenarioKind,
    pub parameters: &'static str,
    pub outputs: &'static str,
    pub criteria: &'static [u32],
    /// The claim the scenario checks.
    pub anchor: &'static str,
}

pub fn list_scenarios() -> Vec<CatalogEntry> {
    ScenarioKind::ALL.iter().map(|&kind| entry(kind)).collect()
}

fn entry(kind: ScenarioKind) -> CatalogEntry {
    let (parameters, outputs, anchor) = match kind {
        ScenarioKind::Si => (
            "n | ns, (lambda, mu) | (p, alpha), beta (number or \"inf\"), trials, target, horizon, start, scale, export_trajectory",
            "trials.csv, trajectory.jsonl",
            "SI hitting times: the n-independent ceiling on E[tau_n], the sqrt(2 log n/(beta lambda n)) floor, and time scaling under (r alpha, r beta)",
        ),
        ScenarioKind::Connectivity => (
            "n | ns, lambda, trials",
            "trials.csv",
            "connectivity time of the pure-birth edge process ~ log n/(lambda n) and its harmonic upper bound",
        ),
        ScenarioKind::Mixing => (
            "k, (lambda, mu) | (p, alpha), c, level",
            "mixing.csv",
            "mixing time of k independent edges: log k/(2(lambda+mu)) for fixed p, c log k/(alpha k) for p = c/k",
        ),
        ScenarioKind::Lemma4 => (
            "n | ns (potential infective edges N), (lambda, mu) | (p, alpha), beta",
            "summary.csv, hitting_times.csv",
            "expected time to the first infection across a cut: t0 ~ sqrt(pi/(2 beta lambda N))",
        ),
        ScenarioKind::TurnoverEr => (
            "n, (lambda, mu) | (p, alpha), horizon, sample_interval, burn_in, trials",
            "samples.csv",
            "Erdos-Renyi graph with node turnover: Poisson(n) node count and a slightly smaller effective edge probability",
        ),
        ScenarioKind::PaTurnover => (
            "n, m, steps, policy (exponential | fifo | hazard_gamma | hazard_truncated), gamma, breakpoint, average_last, k_min, trials",
            "degrees.csv",
            "preferential attachment with node removal: k^-3 tail under exponential lifespans, 2/k on [m, m sqrt e] under FIFO",
        ),
        ScenarioKind::Figure1 => (
            "n (100), lambda (0.01), mu (0.01), beta (0.015), trials, horizon, grid_points, sweep_factors, export_trajectory",
            "curves.csv, series.csv, trajectory.jsonl",
            "mean infected count over time at the default parameters and as lambda, mu and beta vary",
        ),
        ScenarioKind::Bounds => (
            "n, lambda, beta, k",
            "bounds.csv",
            "hitting-time upper bounds (birth-chain sum and its harmonic form, contact-process sum and integral); TV and density property suites",
        ),
    };
    CatalogEntry {
        kind,
        parameters,
        outputs,
        criteria: kind.supported_criteria(),
        anchor,
    }
}

pub fn render(entries: &[CatalogEntry]) -> String {
    let mut out = String::new();
    for e in entries {
        let criteria: Vec<String> = e.criteria.iter().map(|c| c.to_string()).collect();
        out.push_str(&format!(
            "{}\n  verifies:   {}\n  parameters: {}\n  outputs:    {}\n  criteria:   {}\n",
            e.kind,
            e.anchor,
            e.parameters,
            e.outputs,
            criteria.join(", ")
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_kind_once() {
        let entries = list_scenarios();
        for kind in ScenarioKind::ALL {
            assert_eq!(entries.iter().filter(|e| e.kind == kind).count(), 1, "{kind}");
        }
        let text = render(&entries);
        assert!(text.contains("figure1") && text.contains("lemma4"));
    }
}
