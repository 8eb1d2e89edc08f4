//! Experiment runner: scenario configs in, CSV trial rows and a JSON report
//! out.
//!
//! [`run`] does all the work in memory and returns the artifacts;
//! [`write_outputs`] puts them on disk. Trial `i` of a run seeded with `s`
//! uses seed `s + i`, counting across every group of trials in the
//! scenario, so any single trial can be replayed in isolation.

pub mod catalog;
pub mod checks;
pub mod config;
pub mod error;
pub mod report;
mod scenarios;

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use dynet_core::rng::seeded;
use dynet_core::simulator::SimLimits;
use dynet_core::SimRng;

pub use config::{Diagnostic, ScenarioConfig, ScenarioKind};
pub use error::{CliError, Result};
pub use report::{Aggregate, CheckResult, RunReport};

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Worker threads; `None` uses every core.
    pub jobs: Option<usize>,
    /// Overrides the config's seed.
    pub seed: Option<u64>,
    pub limits: SimLimits,
}

/// A file produced by a run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifact {
    pub file: String,
    pub contents: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub report: RunReport,
    pub artifacts: Vec<Artifact>,
}

impl RunOutput {
    pub fn report_file(&self) -> String {
        format!("{}.report.json", self.report.name)
    }

    pub fn artifact(&self, file: &str) -> Option<&Artifact> {
        self.artifacts.iter().find(|a| a.file == file)
    }
}

/// Validates, then runs every trial and evaluates the selected criteria.
pub fn run(config: &ScenarioConfig, options: &RunOptions) -> Result<RunOutput> {
    let mut config = config.clone();
    if let Some(seed) = options.seed {
        config.seed = Some(seed);
    }
    let diags = config.validate();
    if !diags.is_empty() {
        return Err(CliError::Invalid(diags));
    }
    config.seed = Some(config.seed());
    config.schema_version = Some(config::CONFIG_SCHEMA_VERSION);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.jobs.unwrap_or(0))
        .build()
        .expect("thread pool");
    let mut ctx = Ctx {
        report: RunReport::new(&config),
        cfg: &config,
        pool,
        limits: options.limits,
        next_seed: config.seed(),
        artifacts: Vec::new(),
    };
    scenarios::dispatch(&mut ctx)?;
    ctx.report.outputs = ctx.artifacts.iter().map(|a| a.file.clone()).collect();
    Ok(RunOutput {
        report: ctx.report,
        artifacts: ctx.artifacts,
    })
}

/// Writes the artifacts and `<name>.report.json` into `dir`.
pub fn write_outputs(output: &RunOutput, dir: &Path) -> Result<Vec<PathBuf>> {
    let io = |path: &Path| {
        let path = path.display().to_string();
        move |source| CliError::Io { path, source }
    };
    std::fs::create_dir_all(dir).map_err(io(dir))?;
    let mut written = Vec::new();
    for a in &output.artifacts {
        let path = dir.join(&a.file);
        std::fs::write(&path, &a.contents).map_err(io(&path))?;
        written.push(path);
    }
    let path = dir.join(output.report_file());
    std::fs::write(&path, output.report.to_json()).map_err(io(&path))?;
    written.push(path);
    Ok(written)
}

pub(crate) struct Ctx<'a> {
    pub cfg: &'a ScenarioConfig,
    pub report: RunReport,
    pub limits: SimLimits,
    pool: rayon::ThreadPool,
    next_seed: u64,
    artifacts: Vec<Artifact>,
}

/// One trial's result with the seed that produced it.
pub(crate) struct Trial<T> {
    pub index: usize,
    pub seed: u64,
    pub value: T,
}

impl Ctx<'_> {
    /// Runs `count` trials on the pool, claiming the next `count` seeds.
    pub fn trials<T: Send>(
        &mut self,
        count: usize,
        f: impl Fn(&mut SimRng) -> dynet_core::Result<T> + Sync + Send,
    ) -> Result<Vec<Trial<T>>> {
        let first = self.next_seed;
        self.next_seed += count as u64;
        let values: dynet_core::Result<Vec<T>> = self
            .pool
            .install(|| (0..count).into_par_iter().map(|i| f(&mut seeded(first + i as u64))).collect());
        Ok(values?
            .into_iter()
            .enumerate()
            .map(|(index, value)| Trial {
                index,
                seed: first + index as u64,
                value,
            })
            .collect())
    }

    pub fn wants(&self, criterion: u32) -> bool {
        self.cfg.selected_criteria().contains(&criterion)
    }

    pub fn file(&self, suffix: &str) -> String {
        format!("{}_{suffix}", self.report.name)
    }

    /// Serializes `rows` as CSV; the header comes from the row type.
    pub fn table<S: Serialize>(&mut self, suffix: &str, rows: impl IntoIterator<Item = S>) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in rows {
            w.serialize(row)?;
        }
        let contents = w.into_inner().map_err(|e| CliError::Csv(e.into_error().into()))?;
        let file = self.file(suffix);
        self.artifacts.push(Artifact {
            file: file.clone(),
            contents,
        });
        Ok(file)
    }

    pub fn jsonl(&mut self, suffix: &str, text: String) -> String {
        let file = self.file(suffix);
        self.artifacts.push(Artifact {
            file: file.clone(),
            contents: text.into_bytes(),
        });
        file
    }

    pub fn theory(&mut self, name: impl Into<String>, value: f64) {
        self.report.theory.insert(name.into(), value);
    }

    pub fn aggregate(&mut self, name: impl Into<String>, value: f64, count: usize, source: impl Into<String>) {
        self.report.aggregates.push(Aggregate {
            name: name.into(),
            value,
            std_err: None,
            ci: None,
            count,
            source: source.into(),
        });
    }

    /// Mean with standard error and 95% normal interval.
    pub fn mean_aggregate(&mut self, name: impl Into<String>, values: &[f64], source: impl Into<String>) {
        let s = dynet_core::stats::SampleSet::new(values.to_vec());
        let (value, std_err) = (s.mean(), s.std_err());
        let ci = dynet_core::stats::mean_ci(&s, 0.95).ok().map(|c| [c.lo, c.hi]);
        self.report.aggregates.push(Aggregate {
            name: name.into(),
            value,
            std_err: Some(std_err),
            ci,
            count: values.len(),
            source: source.into(),
        });
    }

    pub fn check(&mut self, check: CheckResult) {
        self.report.checks.push(check);
    }

    pub fn meta(&mut self, key: &str, value: impl Serialize) {
        let value = serde_json::to_value(value).expect("metadata serializes");
        self.report.metadata.insert(key.to_string(), value);
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.report.notes.push(note.into());
    }
}

/// Builder-style shorthand for [`CheckResult`].
pub(crate) fn check(criterion: u32, name: &str, pass: bool, detail: String) -> CheckResult {
    CheckResult {
        criterion,
        name: name.to_string(),
        pass,
        measured: Default::default(),
        detail,
        time_limit_secs: None,
    }
}

impl CheckResult {
    pub(crate) fn with(mut self, key: &str, value: f64) -> Self {
        self.measured.insert(key.to_string(), value);
        self
    }

    pub(crate) fn limit(mut self, secs: f64) -> Self {
        self.time_limit_secs = Some(secs);
        self
    }
}
