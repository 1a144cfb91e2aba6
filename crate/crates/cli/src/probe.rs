//! A probe is one gated quantity: a per-sample metric aggregated over seeded samples, or a
//! deterministic computation, compared against a bound.

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::Experiment;
use crate::error::{CliError, Result};
use crate::report::Row;
use crate::sample::{sample_rng, SampleRng, Trace};

pub type MetricFn =
    Arc<dyn Fn(&mut SampleRng, &mut Trace) -> znlab_core::Result<f64> + Send + Sync>;
pub type FixedFn = Arc<dyn Fn(&mut Trace) -> znlab_core::Result<f64> + Send + Sync>;

/// Where a gate's bound comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    #[serde(rename = "paper constant")]
    PaperConstant,
    #[serde(rename = "configured budget")]
    ConfiguredBudget,
    #[serde(rename = "exact identity")]
    ExactIdentity,
    #[serde(rename = "negative control")]
    NegativeControl,
    #[serde(rename = "recorded")]
    Recorded,
}

impl Provenance {
    pub fn label(self) -> &'static str {
        match self {
            Provenance::PaperConstant => "paper constant",
            Provenance::ConfiguredBudget => "configured budget",
            Provenance::ExactIdentity => "exact identity",
            Provenance::NegativeControl => "negative control",
            Provenance::Recorded => "recorded",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Check {
    /// Worst case is the maximum; passes when `value <= bound * (1 + slack)`.
    AtMost {
        bound: f64,
        slack: f64,
    },
    /// Worst case is the minimum; passes when `value >= bound`.
    AtLeast(f64),
    /// Passes when the maximum strictly exceeds the bound.
    Exceeds(f64),
    Equals(f64),
    NonZero,
    /// Reports the maximum; always passes.
    Recorded,
}

impl Check {
    fn bound(self) -> Option<f64> {
        match self {
            Check::AtMost { bound, .. } => Some(bound),
            Check::AtLeast(b) | Check::Exceeds(b) | Check::Equals(b) => Some(b),
            Check::NonZero => Some(0.0),
            Check::Recorded => None,
        }
    }

    fn passes(self, value: f64) -> bool {
        match self {
            Check::AtMost { bound, slack } => value <= bound * (1.0 + slack),
            Check::AtLeast(b) => value >= b,
            Check::Exceeds(b) => value > b,
            Check::Equals(b) => value == b,
            Check::NonZero => value != 0.0 && !value.is_nan(),
            Check::Recorded => true,
        }
    }

    /// Whether `candidate` is a worse outcome than `current`; NaN is worst of all.
    fn worse(self, candidate: f64, current: f64) -> bool {
        if current.is_nan() {
            return false;
        }
        if candidate.is_nan() {
            return true;
        }
        match self {
            Check::AtLeast(_) => candidate < current,
            _ => candidate > current,
        }
    }
}

#[derive(Clone)]
pub enum ProbeKind {
    Sampled { samples: u64, metric: MetricFn },
    Fixed(FixedFn),
}

#[derive(Clone)]
pub struct Probe {
    pub experiment: Experiment,
    pub n: usize,
    pub param: String,
    pub check: Check,
    pub provenance: Provenance,
    pub kind: ProbeKind,
}

impl Probe {
    pub fn sampled<F>(
        experiment: Experiment,
        n: usize,
        param: impl Into<String>,
        samples: u64,
        f: F,
    ) -> Self
    where
        F: Fn(&mut SampleRng, &mut Trace) -> znlab_core::Result<f64> + Send + Sync + 'static,
    {
        Probe {
            experiment,
            n,
            param: param.into(),
            check: Check::Recorded,
            provenance: Provenance::Recorded,
            kind: ProbeKind::Sampled {
                samples,
                metric: Arc::new(f),
            },
        }
    }

    pub fn fixed<F>(experiment: Experiment, n: usize, param: impl Into<String>, f: F) -> Self
    where
        F: Fn(&mut Trace) -> znlab_core::Result<f64> + Send + Sync + 'static,
    {
        Probe {
            experiment,
            n,
            param: param.into(),
            check: Check::Recorded,
            provenance: Provenance::Recorded,
            kind: ProbeKind::Fixed(Arc::new(f)),
        }
    }

    pub fn gate(mut self, check: Check, provenance: Provenance) -> Self {
        self.check = check;
        self.provenance = provenance;
        self
    }

    pub fn at_most(self, bound: f64, provenance: Provenance) -> Self {
        self.gate(Check::AtMost { bound, slack: 0.0 }, provenance)
    }

    pub fn key(&self) -> String {
        format!("{}/{}/{}", self.experiment, self.n, self.param)
    }

    fn error(&self, sample: Option<u64>, source: znlab_core::Error) -> CliError {
        CliError::Sample {
            experiment: self.experiment.to_string(),
            n: self.n,
            param: self.param.clone(),
            sample,
            source,
        }
    }

    /// Runs every sample (in parallel) and aggregates in sample order.
    pub fn evaluate(&self, seed: u64) -> Result<Row> {
        let (value, sample) = match &self.kind {
            ProbeKind::Fixed(f) => (f(&mut Trace::off()).map_err(|e| self.error(None, e))?, None),
            ProbeKind::Sampled { samples, metric } => {
                let key = self.key();
                let values: Vec<znlab_core::Result<f64>> = (0..*samples)
                    .into_par_iter()
                    .map(|i| metric(&mut sample_rng(seed, &key, i), &mut Trace::off()))
                    .collect();
                let mut best: Option<(f64, u64)> = None;
                for (i, v) in values.into_iter().enumerate() {
                    let v = v.map_err(|e| self.error(Some(i as u64), e))?;
                    match best {
                        Some((b, _)) if !self.check.worse(v, b) => {}
                        _ => best = Some((v, i as u64)),
                    }
                }
                let (v, i) = best.expect("samples >= 1");
                (v, Some(i))
            }
        };
        Ok(self.row(value, sample))
    }

    /// Recomputes a single sample (or the fixed value) with its inputs traced.
    pub fn replay(&self, seed: u64, sample: Option<u64>) -> Result<(f64, Vec<(String, String)>)> {
        let mut trace = Trace::on();
        let value = match (&self.kind, sample) {
            (ProbeKind::Sampled { metric, .. }, Some(i)) => {
                metric(&mut sample_rng(seed, &self.key(), i), &mut trace)
                    .map_err(|e| self.error(Some(i), e))?
            }
            (ProbeKind::Sampled { metric, .. }, None) => {
                metric(&mut sample_rng(seed, &self.key(), 0), &mut trace)
                    .map_err(|e| self.error(Some(0), e))?
            }
            (ProbeKind::Fixed(f), _) => f(&mut trace).map_err(|e| self.error(None, e))?,
        };
        Ok((value, trace.into_inputs()))
    }

    fn row(&self, value: f64, sample: Option<u64>) -> Row {
        let bound = self.check.bound();
        let ratio = bound.map(|b| {
            if b != 0.0 {
                value / b
            } else if value == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        });
        Row {
            experiment: self.experiment.to_string(),
            n: self.n,
            param: self.param.clone(),
            value,
            bound,
            ratio,
            pass: self.check.passes(value),
            provenance: self.provenance,
            sample,
        }
    }
}
