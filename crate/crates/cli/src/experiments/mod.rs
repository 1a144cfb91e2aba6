//! Probe lists for each experiment.

mod growth;
mod kp;
mod norm;
mod operators;

use znlab_core::{Result as CoreResult, RochbergVector};

use crate::config::{Experiment, ExperimentConfig};
use crate::error::Result;
use crate::probe::Probe;

/// The probes `experiment` runs under `config`, in report order.
pub fn probes(config: &ExperimentConfig, experiment: Experiment) -> Result<Vec<Probe>> {
    let orders = config.orders(experiment);
    Ok(match experiment {
        Experiment::Norm => norm::norm(config, &orders),
        Experiment::Pairing => norm::pairing(config, &orders),
        Experiment::Witness => norm::witness(config, &orders),
        Experiment::Lemma4 => kp::lemma4(config, &orders),
        Experiment::Quasilinearity => kp::quasilinearity(config, &orders),
        Experiment::Commutator => kp::commutator(config, &orders),
        Experiment::Growth => growth::growth(config, &orders),
        Experiment::Telescope => growth::telescope(&orders),
        Experiment::AdjointCheck => operators::adjoint_check(config, &orders),
        Experiment::Corners => operators::corners(config, &orders)?,
        Experiment::ReportAll => {
            let mut all = Vec::new();
            for e in Experiment::ALL {
                all.extend(probes(config, e)?);
            }
            all
        }
    })
}

/// Largest entry of `a - b` over all coordinates, relative to `1 + max |b|`.
fn coord_gap(a: &RochbergVector<f64>, b: &RochbergVector<f64>) -> CoreResult<f64> {
    let mut worst = 0.0f64;
    for (p, q) in a.coords().iter().zip(b.coords()) {
        let d = p.sub(q)?.max_abs() / (1.0 + q.max_abs());
        worst = if d.is_nan() { d } else { worst.max(d) };
    }
    Ok(worst)
}

fn flag(failed: bool) -> f64 {
    if failed {
        1.0
    } else {
        0.0
    }
}
