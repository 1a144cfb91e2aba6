//! Experiment configuration: the TOML file form, flag overrides, defaults and budgets.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};

#[derive(
    Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, ValueEnum,
)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
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
}

impl Experiment {
    pub const ALL: [Experiment; 10] = [
        Experiment::Norm,
        Experiment::Pairing,
        Experiment::Lemma4,
        Experiment::Quasilinearity,
        Experiment::Growth,
        Experiment::Witness,
        Experiment::Commutator,
        Experiment::Telescope,
        Experiment::AdjointCheck,
        Experiment::Corners,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Norm => "norm",
            Experiment::Pairing => "pairing",
            Experiment::Lemma4 => "lemma4",
            Experiment::Quasilinearity => "quasilinearity",
            Experiment::Growth => "growth",
            Experiment::Witness => "witness",
            Experiment::Commutator => "commutator",
            Experiment::Telescope => "telescope",
            Experiment::AdjointCheck => "adjoint-check",
            Experiment::Corners => "corners",
            Experiment::ReportAll => "report-all",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL
            .into_iter()
            .chain([Experiment::ReportAll])
            .find(|e| e.name() == name)
    }

    /// Orders run when none are configured.
    pub fn default_orders(self) -> Vec<usize> {
        match self {
            Experiment::Norm => (1..=6).collect(),
            Experiment::Pairing => (2..=5).collect(),
            Experiment::Lemma4 => (1..=5).collect(),
            Experiment::Quasilinearity => (1..=4).collect(),
            Experiment::Growth => (2..=4).collect(),
            Experiment::Witness => (1..=5).collect(),
            Experiment::Commutator => (1..=5).collect(),
            Experiment::Telescope => (2..=8).collect(),
            Experiment::AdjointCheck => (1..=4).collect(),
            Experiment::Corners => (2..=4).collect(),
            Experiment::ReportAll => Vec::new(),
        }
    }

    pub fn min_order(self) -> usize {
        match self {
            Experiment::Growth | Experiment::Telescope | Experiment::Corners => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Budget names accepted by `--budget name=value`.
pub const BUDGET_NAMES: [&str; 7] = [
    "quasi_triangle",
    "duality",
    "quasilinearity",
    "commutator",
    "equivalence",
    "domain_invariance",
    "growth_drift",
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub n: Option<Vec<usize>>,
    pub dim: u64,
    pub samples: u64,
    pub seed: u64,
    pub tol: f64,
    pub budgets: BTreeMap<String, f64>,
    /// Flat lengths for the growth experiment.
    #[serde(rename = "Ns")]
    pub lengths: Option<Vec<u64>>,
    /// Operator expression profiled by the corners experiment.
    pub op: Option<String>,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub profile_out: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            experiment: Experiment::ReportAll,
            n: None,
            dim: 64,
            samples: 1000,
            seed: 0,
            tol: 1e-12,
            budgets: BTreeMap::new(),
            lengths: None,
            op: None,
            out: None,
            format: Format::Csv,
            profile_out: None,
        }
    }
}

impl ExperimentConfig {
    pub fn new(experiment: Experiment) -> Self {
        ExperimentConfig {
            experiment,
            ..Default::default()
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        let invalid = |m: String| Err(CliError::ConfigInvalid(m));
        if self.samples == 0 {
            return invalid("samples must be at least 1".into());
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return invalid(format!("tol must be positive, got {}", self.tol));
        }
        if self.dim == 0 {
            return invalid("dim must be at least 1".into());
        }
        if let Some(ns) = &self.n {
            if ns.is_empty() {
                return invalid("n must name at least one order".into());
            }
            if self.experiment != Experiment::ReportAll {
                let min = self.experiment.min_order();
                if let Some(bad) = ns.iter().find(|&&n| n < min) {
                    return invalid(format!("{} needs n >= {min}, got {bad}", self.experiment));
                }
            }
        }
        for (name, value) in &self.budgets {
            if !BUDGET_NAMES.contains(&name.as_str()) {
                return invalid(format!(
                    "unknown budget {name:?}; known: {}",
                    BUDGET_NAMES.join(", ")
                ));
            }
            if value.is_nan() || *value <= 0.0 {
                return invalid(format!("budget {name} must be positive, got {value}"));
            }
        }
        if let Some(lengths) = &self.lengths {
            if lengths.is_empty() || lengths.iter().any(|&l| l < 2) {
                return invalid("Ns must be lengths >= 2".into());
            }
        }
        Ok(())
    }

    /// The orders run for `experiment`: the configured list, or its defaults.
    pub fn orders(&self, experiment: Experiment) -> Vec<usize> {
        match &self.n {
            Some(ns) => ns
                .iter()
                .copied()
                .filter(|&n| n >= experiment.min_order())
                .collect(),
            None => experiment.default_orders(),
        }
    }

    pub fn growth_lengths(&self) -> Vec<u64> {
        self.lengths
            .clone()
            .unwrap_or_else(|| (10..=60).map(|a| 1u64 << a).collect())
    }

    /// The configured value of a budget at order `n`, or its default.
    pub fn budget(&self, name: &str, n: usize) -> f64 {
        if let Some(&v) = self.budgets.get(name) {
            return v;
        }
        match name {
            "quasi_triangle" | "duality" | "quasilinearity" => 4f64.powi(n as i32),
            "commutator" => 8.0 * n as f64,
            "equivalence" => match n {
                0..=2 => 10.0,
                3 => 16.0,
                4 => 64.0,
                _ => 4f64.powi(n as i32),
            },
            "domain_invariance" => 4.0,
            "growth_drift" => 0.05,
            other => panic!("unknown budget {other}"),
        }
    }

    /// SHA-256 of the configuration with the output destinations cleared.
    pub fn hash(&self) -> String {
        let mut c = self.clone();
        c.out = None;
        c.profile_out = None;
        c.format = Format::Csv;
        let text = serde_json::to_string(&c).expect("config serializes");
        hex::encode(Sha256::digest(text.as_bytes()))
    }
}

/// Parses `a,b,c` where each item is an integer or `2^k`, or a range `2^a..2^b` of powers of two.
pub fn parse_lengths(text: &str) -> std::result::Result<Vec<u64>, String> {
    let text = text.trim();
    if let Some((lo, hi)) = text.split_once("..") {
        let exp = |s: &str| -> std::result::Result<u32, String> {
            s.trim()
                .strip_prefix("2^")
                .and_then(|e| e.parse().ok())
                .filter(|&e: &u32| e < 64)
                .ok_or_else(|| format!("range bounds must be powers 2^k with k < 64, got {s:?}"))
        };
        let (a, b) = (exp(lo)?, exp(hi)?);
        if a > b {
            return Err(format!("empty range {text:?}"));
        }
        return Ok((a..=b).map(|k| 1u64 << k).collect());
    }
    text.split(',').map(parse_length).collect()
}

fn parse_length(item: &str) -> std::result::Result<u64, String> {
    let item = item.trim();
    if let Some(e) = item.strip_prefix("2^") {
        let e: u32 = e.parse().map_err(|_| format!("bad exponent in {item:?}"))?;
        return 1u64
            .checked_shl(e)
            .filter(|_| e < 64)
            .ok_or_else(|| format!("{item} overflows"));
    }
    item.parse().map_err(|_| format!("bad length {item:?}"))
}

/// Parses `name=value`.
pub fn parse_budget(text: &str) -> std::result::Result<(String, f64), String> {
    let (name, value) = text
        .split_once('=')
        .ok_or_else(|| format!("expected name=value, got {text:?}"))?;
    let value: f64 = value
        .trim()
        .parse()
        .map_err(|_| format!("bad budget value in {text:?}"))?;
    Ok((name.trim().to_string(), value))
}
