use rand::Rng;
use znlab_core::commutator::domain_ratio_profile;
use znlab_core::operators::flat_blocks;
use znlab_core::scalar::relative_gap;
use znlab_core::{
    commutator_defect, domain_invariance_check, lemma4_sum, quasilinearity_defect, CoordVector,
    OperatorAtom, ScaleOperator,
};

use crate::config::{Experiment, ExperimentConfig};
use crate::probe::{Check, Probe, Provenance};
use crate::sample::{contractive, coord, permutation, unimodular};

pub(super) fn lemma4(cfg: &ExperimentConfig, orders: &[usize]) -> Vec<Probe> {
    let dim = cfg.dim;
    let mut out = Vec::new();
    for &n in orders {
        let bound = 2f64.powi(n as i32 - 1);
        out.push(
            Probe::sampled(
                Experiment::Lemma4,
                n,
                "constant",
                cfg.samples,
                move |rng, tr| {
                    let x = coord(rng, dim);
                    let y = coord(rng, dim);
                    tr.record("x", &x);
                    tr.record("x_dual", &y);
                    let (value, _) = lemma4_sum(n, &x, &y);
                    Ok(value / (x.l2_norm() * y.l2_norm()))
                },
            )
            .gate(
                Check::AtMost { bound, slack: 1e-9 },
                Provenance::PaperConstant,
            ),
        );
    }
    out
}

pub(super) fn quasilinearity(cfg: &ExperimentConfig, orders: &[usize]) -> Vec<Probe> {
    let dim = cfg.dim;
    let mut out = Vec::new();
    for &m in orders {
        out.push(
            Probe::sampled(
                Experiment::Quasilinearity,
                m,
                "constant",
                cfg.samples,
                move |rng, tr| {
                    let x = coord(rng, dim);
                    let y = coord(rng, dim);
                    tr.record("x", &x);
                    tr.record("y", &y);
                    let (d, b) = quasilinearity_defect(m, &x, &y)?;
                    Ok(d / b)
                },
            )
            .at_most(
                cfg.budget("quasilinearity", m),
                Provenance::ConfiguredBudget,
            ),
        );
    }
    out
}

pub(super) fn commutator(cfg: &ExperimentConfig, orders: &[usize]) -> Vec<Probe> {
    let (dim, s) = (cfg.dim, cfg.samples);
    let e = Experiment::Commutator;
    let mut out = Vec::new();
    for &k in orders {
        out.push(
            Probe::sampled(e, k, "permutation_defect", s, move |rng, tr| {
                let p = permutation(rng, dim);
                let x = coord(rng, dim);
                tr.record("permutation", &format!("{:?}", p.images()));
                tr.record("x", &x);
                commutator_defect(&ScaleOperator::permutation(p), k, &x)
            })
            .at_most(1e-12, Provenance::ExactIdentity),
        );
        out.push(
            Probe::sampled(e, k, "unimodular_defect", s, move |rng, tr| {
                let d = unimodular(rng, dim);
                let x = coord(rng, dim);
                tr.record("d", &d);
                tr.record("x", &x);
                commutator_defect(&ScaleOperator::multiplier(d), k, &x)
            })
            .at_most(1e-12, Provenance::ExactIdentity),
        );
        out.push(
            Probe::sampled(e, k, "contractive_defect", s, move |rng, tr| {
                let d = contractive(rng, dim);
                let x = coord(rng, dim);
                tr.record("d", &d);
                tr.record("x", &x);
                commutator_defect(&ScaleOperator::multiplier(d), k, &x)
            })
            .at_most(cfg.budget("commutator", k), Provenance::ConfiguredBudget),
        );
        out.push(Probe::sampled(e, k, "block_defect", s, move |rng, tr| {
            let len = rng.random_range(1..=4u64);
            let tau = ScaleOperator::block_map(flat_blocks(len, dim)?)?;
            let x = coord(rng, dim);
            tr.record("block_length", &len);
            tr.record("x", &x);
            commutator_defect(&tau, k, &x)
        }));

        // Domain invariance is read at order k + 1 so every k names a nontrivial domain.
        let n = k + 1;
        let geometric: Vec<f64> = (0..dim).map(|i| 0.5f64.powi(i as i32)).collect();
        let geometric = CoordVector::from_values(&geometric).expect("finite");
        out.push(
            Probe::sampled(e, k, "domain_invariance", s, move |rng, tr| {
                let x = coord(rng, dim);
                tr.record("x", &x);
                domain_invariance_check(&ScaleOperator::multiplier(geometric.clone()), n, &[x])
            })
            .at_most(
                cfg.budget("domain_invariance", n),
                Provenance::ConfiguredBudget,
            ),
        );
        out.push(
            Probe::sampled(e, k, "domain_permutation", s, move |rng, tr| {
                let p = permutation(rng, dim);
                let x = coord(rng, dim);
                tr.record("permutation", &format!("{:?}", p.images()));
                tr.record("x", &x);
                let r = domain_invariance_check(&ScaleOperator::permutation(p), n, &[x])?;
                Ok(relative_gap(r, 1.0))
            })
            .at_most(1e-9, Provenance::ExactIdentity),
        );
        // e_v -> v e_v is not a scale operator; its ratios must leave the scale-operator budget.
        let ramp: Vec<f64> = (1..=dim).map(|v| v as f64).collect();
        let ramp = OperatorAtom::Multiplier(CoordVector::from_values(&ramp).expect("finite"));
        out.push(
            Probe::sampled(e, k, "negative_control", s, move |rng, tr| {
                let x = coord(rng, dim);
                tr.record("x", &x);
                Ok(domain_ratio_profile(&ramp, n, &[x])?[0])
            })
            .gate(
                Check::Exceeds(cfg.budget("domain_invariance", n)),
                Provenance::NegativeControl,
            ),
        );
    }
    out
}
