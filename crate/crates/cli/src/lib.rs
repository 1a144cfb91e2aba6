//! Deterministic experiment runner for `znlab-core`.
//!
//! Every experiment is a list of probes. A probe draws its samples from per-sample ChaCha
//! streams keyed by the seed and the probe name, so a report is reproducible bit for bit at
//! any thread count, and any row can be replayed from its recorded sample offset.

pub mod config;
pub mod error;
pub mod experiments;
pub mod probe;
pub mod replay;
pub mod report;
pub mod sample;

use std::io::Write;

use znlab_core::growth_profile;
use znlab_core::orlicz::write_growth_csv;

pub use config::{Experiment, ExperimentConfig, Format};
pub use error::{CliError, Result};
pub use replay::{replay, Replay};
pub use report::{Report, Row};

/// Runs the configured experiment and assembles its report.
pub fn run(config: &ExperimentConfig) -> Result<Report> {
    config.validate()?;
    let mut rows = Vec::new();
    for probe in experiments::probes(config, config.experiment)? {
        rows.push(probe.evaluate(config.seed)?);
    }
    Ok(Report::new(config, rows))
}

/// Writes the report in the configured format.
pub fn write_report<W: Write>(config: &ExperimentConfig, report: &Report, out: W) -> Result<()> {
    match config.format {
        Format::Csv => report.write_csv(out),
        Format::Json => report.write_json(out),
    }
}

/// The growth table `n,N,quasinorm,logpow,ratio` for every configured order of the growth experiment.
pub fn write_growth_profile<W: Write>(config: &ExperimentConfig, mut out: W) -> Result<()> {
    let lengths = config.growth_lengths();
    let mut rows = Vec::new();
    for n in config.orders(Experiment::Growth) {
        rows.extend(
            growth_profile::<f64>(n, &lengths).map_err(|source| CliError::Sample {
                experiment: Experiment::Growth.to_string(),
                n,
                param: "profile".into(),
                sample: None,
                source,
            })?,
        );
    }
    write_growth_csv(&rows, &mut out)?;
    Ok(())
}
