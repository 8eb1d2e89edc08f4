//! Acceptance suite: runs each shipped `scenarios/cNN_*.json` through the
//! same code path as `dynet run --check` and prints one `PASS`/`FAIL` line
//! per criterion.
//!
//! `cargo test -p dynet-cli --test acceptance -- --nocapture --test-threads=1`
//! shows the lines in order and keeps the wall-clock budgets honest.

use std::path::PathBuf;
use std::time::Instant;

use dynet_cli::{run, RunOptions, ScenarioConfig};

fn scenario(stem: &str) -> ScenarioConfig {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(format!("{stem}.json"));
    ScenarioConfig::load(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn accept(criterion: u32, stem: &str) {
    let config = scenario(stem);
    let start = Instant::now();
    let output = run(&config, &RunOptions::default()).unwrap_or_else(|e| panic!("{stem}: {e}"));
    let elapsed = start.elapsed().as_secs_f64();
    let check = output
        .report
        .checks
        .iter()
        .find(|c| c.criterion == criterion)
        .unwrap_or_else(|| panic!("{stem} did not evaluate criterion {criterion}"));
    let line = check.line(Some(elapsed));
    println!("{line}");
    assert!(check.pass && !check.over_budget(Some(elapsed)), "{line}");
}

#[test]
fn c01_lemma4_asymptote() {
    accept(1, "c01_lemma4");
}

#[test]
fn c02_product_space_tv() {
    accept(2, "c02_product_tv");
}

#[test]
fn c03_mixing_time_asymptotics() {
    accept(3, "c03_mixing");
}

#[test]
fn c04_connectivity_time() {
    accept(4, "c04_connectivity");
}

#[test]
fn c05_full_infection_ceiling() {
    accept(5, "c05_si_ceiling");
}

#[test]
fn c06_full_infection_floor() {
    accept(6, "c06_si_floor");
}

#[test]
fn c07_time_scaling() {
    accept(7, "c07_time_scaling");
}

#[test]
fn c08_figure1_shape_and_sensitivity() {
    accept(8, "c08_figure1");
}

#[test]
fn c09_turnover_er() {
    accept(9, "c09_turnover_er");
}

#[test]
fn c10_pa_exponential_removal() {
    accept(10, "c10_pa_exponential");
}

#[test]
fn c11_pa_fifo_removal() {
    accept(11, "c11_pa_fifo");
}

#[test]
fn c12_property_suites() {
    accept(12, "c12_properties");
}
