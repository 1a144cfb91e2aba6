//! Regenerates the worst sample behind a report row.

use serde::Serialize;

use crate::config::Experiment;
use crate::error::{CliError, Result};
use crate::experiments::probes;
use crate::report::Report;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Replay {
    pub row: usize,
    pub experiment: String,
    pub n: usize,
    pub param: String,
    pub seed: u64,
    pub sample: Option<u64>,
    pub recorded: f64,
    pub value: f64,
    /// Whether the recomputed value is bit-identical to the recorded one.
    pub matches: bool,
    pub inputs: Vec<(String, String)>,
}

/// Recomputes row `row` of `report` from its stored configuration, optionally under another seed.
pub fn replay(report: &Report, row: usize, seed: Option<u64>) -> Result<Replay> {
    let r = report.rows.get(row).ok_or(CliError::RowNotFound(row))?;
    let not_found = || CliError::ProbeNotFound {
        experiment: r.experiment.clone(),
        n: r.n,
        param: r.param.clone(),
    };
    let experiment = Experiment::from_name(&r.experiment).ok_or_else(not_found)?;
    let mut config = report.meta.config.clone();
    let seed = seed.unwrap_or(report.meta.seed);
    config.seed = seed;
    let probe = probes(&config, experiment)?
        .into_iter()
        .find(|p| p.n == r.n && p.param == r.param)
        .ok_or_else(not_found)?;
    let (value, inputs) = probe.replay(seed, r.sample)?;
    Ok(Replay {
        row,
        experiment: r.experiment.clone(),
        n: r.n,
        param: r.param.clone(),
        seed,
        sample: r.sample,
        recorded: r.value,
        value,
        matches: value.to_bits() == r.value.to_bits(),
        inputs,
    })
}
