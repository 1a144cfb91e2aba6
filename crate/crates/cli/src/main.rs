use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use znlab_cli::config::{parse_budget, parse_lengths};
use znlab_cli::{
    replay, run, write_growth_profile, write_report, CliError, Experiment, ExperimentConfig,
    Format, Report,
};

/// Alias so clap treats `--Ns` as a single value parsed into a list.
type LengthList = Vec<u64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Command {
    Norm,
    Pairing,
    Lemma4,
    Quasilinearity,
    Growth,
    Witness,
    Commutator,
    Telescope,
    AdjointCheck,
    Corners,
    ReportAll,
    /// Recompute one row of a JSON report.
    Replay,
}

impl Command {
    fn experiment(self) -> Option<Experiment> {
        Experiment::from_name(self.to_possible_value()?.get_name())
    }
}

/// Reproducible experiments on Kalton-Peck maps and Rochberg spaces.
///
/// Exit status: 0 when every gate passes, 1 when a gate fails, 2 on errors.
/// ZN_LAB_THREADS caps the number of worker threads.
#[derive(Debug, Parser)]
#[command(name = "zn-lab", version)]
struct Args {
    command: Command,
    /// Orders, comma separated.
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<usize>>,
    /// Largest support index of random vectors.
    #[arg(long)]
    dim: Option<u64>,
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Luxemburg solver tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Override a gate budget, e.g. --budget duality=100.
    #[arg(long = "budget", value_parser = parse_budget)]
    budgets: Vec<(String, f64)>,
    /// Flat lengths for growth: a list such as 1024,2^20 or a range 2^10..2^60.
    #[arg(long = "Ns", value_parser = parse_lengths)]
    lengths: Option<LengthList>,
    /// Operator expression profiled by the corners experiment.
    #[arg(long)]
    op: Option<String>,
    /// Report destination; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Also write the growth table to this path.
    #[arg(long)]
    profile_out: Option<PathBuf>,
    /// TOML file with ExperimentConfig fields; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Report to replay.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Row index (0-based) to replay.
    #[arg(long)]
    row: Option<usize>,
}

impl Args {
    fn config(&self, experiment: Experiment) -> Result<ExperimentConfig, CliError> {
        let mut c = match &self.config {
            Some(path) => ExperimentConfig::from_file(path)?,
            None => ExperimentConfig::default(),
        };
        c.experiment = experiment;
        if let Some(n) = &self.n {
            c.n = Some(n.clone());
        }
        if let Some(v) = self.dim {
            c.dim = v;
        }
        if let Some(v) = self.samples {
            c.samples = v;
        }
        if let Some(v) = self.seed {
            c.seed = v;
        }
        if let Some(v) = self.tol {
            c.tol = v;
        }
        for (name, value) in &self.budgets {
            c.budgets.insert(name.clone(), *value);
        }
        if let Some(v) = &self.lengths {
            c.lengths = Some(v.clone());
        }
        if let Some(v) = &self.op {
            c.op = Some(v.clone());
        }
        if let Some(v) = &self.out {
            c.out = Some(v.clone());
        }
        if let Some(v) = self.format {
            c.format = v;
        }
        if let Some(v) = &self.profile_out {
            c.profile_out = Some(v.clone());
        }
        Ok(c)
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(text) = std::env::var("ZN_LAB_THREADS") else {
        return Ok(());
    };
    let threads: usize = text
        .trim()
        .parse()
        .ok()
        .filter(|&t| t >= 1)
        .ok_or_else(|| {
            CliError::ConfigInvalid(format!(
                "ZN_LAB_THREADS must be a positive integer, got {text:?}"
            ))
        })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::ConfigInvalid(e.to_string()))
}

fn run_experiment(args: &Args, experiment: Experiment) -> Result<bool, CliError> {
    let config = args.config(experiment)?;
    let report = run(&config)?;
    match &config.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            write_report(&config, &report, &mut w)?;
            w.flush()?;
        }
        None => write_report(&config, &report, io::stdout().lock())?,
    }
    if let Some(path) = &config.profile_out {
        let mut w = BufWriter::new(File::create(path)?);
        write_growth_profile(&config, &mut w)?;
        w.flush()?;
    }
    let mut err = io::stderr().lock();
    for line in report.gate_lines() {
        writeln!(err, "{line}")?;
    }
    writeln!(
        err,
        "{} of {} gates passed (seed {}, config {})",
        report.summary.passed,
        report.summary.gates,
        config.seed,
        &report.meta.config_hash[..12]
    )?;
    Ok(report.summary.pass)
}

fn run_replay(args: &Args) -> Result<bool, CliError> {
    let path = args
        .report
        .as_ref()
        .ok_or_else(|| CliError::ConfigInvalid("replay needs --report PATH".into()))?;
    let row = args
        .row
        .ok_or_else(|| CliError::ConfigInvalid("replay needs --row INDEX".into()))?;
    let report = Report::from_json(&std::fs::read_to_string(path)?)?;
    let r = replay(&report, row, args.seed)?;
    serde_json::to_writer_pretty(io::stdout().lock(), &r)?;
    println!();
    Ok(r.matches)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let outcome = configure_threads().and_then(|()| match args.command.experiment() {
        Some(experiment) => run_experiment(&args, experiment),
        None => run_replay(&args),
    });
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("zn-lab: {e}");
            ExitCode::from(2)
        }
    }
}
