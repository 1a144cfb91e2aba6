use znlab_core::operators::{flat_blocks, pairing_preservation_check};
use znlab_core::rochberg::default_witnesses;
use znlab_core::scalar::relative_gap;
use znlab_core::seq::DEFAULT_ENTRY_BUDGET;
use znlab_core::{
    duality_pairing, graph_vector, omega_lower_bound, OperatorMatrix, RochbergVector,
};

use rand::Rng;

use crate::config::{Experiment, ExperimentConfig};
use crate::probe::{Probe, Provenance};
use crate::sample::{coord, rochberg, scalar};

pub(super) fn norm(cfg: &ExperimentConfig, orders: &[usize]) -> Vec<Probe> {
    let (dim, s) = (cfg.dim, cfg.samples);
    let e = Experiment::Norm;
    let mut out = Vec::new();
    for &n in orders {
        out.push(
            Probe::sampled(e, n, "graph_isometry", s, move |rng, tr| {
                let u = coord(rng, dim);
                tr.record("u", &u);
                Ok(relative_gap(graph_vector(n, &u).quasinorm()?, u.l2_norm()))
            })
            .at_most(1e-9, Provenance::ExactIdentity),
        );
        for k in 1..=n {
            let iota = OperatorMatrix::iota(k, n).expect("1 <= k <= n");
            out.push(
                Probe::sampled(e, n, format!("iota_isometry_k{k}"), s, move |rng, tr| {
                    let v = rochberg(rng, k, dim);
                    tr.record("v", &v);
                    Ok(relative_gap(iota.apply(&v)?.quasinorm()?, v.quasinorm()?))
                })
                .at_most(1e-12, Provenance::ExactIdentity),
            );
        }
        out.push(
            Probe::sampled(e, n, "homogeneity", s, move |rng, tr| {
                let v = rochberg(rng, n, dim);
                let lambda = scalar(rng);
                tr.record("v", &v);
                tr.record("lambda", &lambda);
                Ok(relative_gap(
                    v.scale(lambda).quasinorm()?,
                    lambda.abs() * v.quasinorm()?,
                ))
            })
            .at_most(1e-9, Provenance::ExactIdentity),
        );
        out.push(
            Probe::sampled(e, n, "quasi_triangle", s, move |rng, tr| {
                let v = rochberg(rng, n, dim);
                let w = rochberg(rng, n, dim);
                tr.record("v", &v);
                tr.record("w", &w);
                Ok(v.add(&w)?.quasinorm()? / (v.quasinorm()? + w.quasinorm()?))
            })
            .at_most(
                cfg.budget("quasi_triangle", n),
                Provenance::ConfiguredBudget,
            ),
        );
    }
    out
}

pub(super) fn pairing(cfg: &ExperimentConfig, orders: &[usize]) -> Vec<Probe> {
    let (dim, s) = (cfg.dim, cfg.samples);
    let e = Experiment::Pairing;
    let mut out = Vec::new();
    for &n in orders {
        out.push(
            Probe::sampled(e, n, "duality_constant", s, move |rng, tr| {
                let x = rochberg(rng, n, dim);
                let y = rochberg(rng, n, dim);
                tr.record("x", &x);
                tr.record("y", &y);
                Ok(duality_pairing(&x, &y)?.abs() / (x.quasinorm()? * y.quasinorm()?))
            })
            .at_most(cfg.budget("duality", n), Provenance::ConfiguredBudget),
        );
        // Even orders: D(x)(x) = 0. Odd orders: the middle coordinate pairs with itself.
        out.push(
            Probe::sampled(e, n, "diagonal_form", s, move |rng, tr| {
                if n % 2 == 0 {
                    let x = rochberg(rng, n, dim);
                    tr.record("x", &x);
                    Ok(duality_pairing(&x, &x)?.abs())
                } else {
                    let u = coord(rng, dim);
                    let mut coords = vec![znlab_core::CoordVector::zero(); n];
                    coords[(n - 1) / 2] = u.clone();
                    let x = RochbergVector::new(coords)?;
                    tr.record("x", &x);
                    let sign = if n.div_ceil(2) % 2 == 0 { 1.0 } else { -1.0 };
                    Ok((duality_pairing(&x, &x)? - sign * u.pair(&u)).abs())
                }
            })
            .at_most(0.0, Provenance::ExactIdentity),
        );
        if n >= 2 {
            out.push(
                Probe::sampled(e, n, "preservation", s, move |rng, tr| {
                    let len = rng.random_range(1..=4u64);
                    let blocks = flat_blocks::<f64>(len, dim)?;
                    let t = OperatorMatrix::block_operator(n, &blocks)?;
                    let x = rochberg(rng, n, dim);
                    let y = rochberg(rng, n, dim);
                    tr.record("block_length", &len);
                    tr.record("x", &x);
                    tr.record("y", &y);
                    pairing_preservation_check(&t, &[(x, y)])
                })
                .at_most(1e-9, Provenance::PaperConstant),
            );
        }
    }
    out
}

pub(super) fn witness(cfg: &ExperimentConfig, orders: &[usize]) -> Vec<Probe> {
    let (dim, s) = (cfg.dim, cfg.samples);
    let e = Experiment::Witness;
    let mut out = Vec::new();
    for &n in orders {
        // Graph witnesses of +-e_i recover at least the sup norm of a top vector.
        out.push(
            Probe::sampled(e, n, "omega_sup_norm", s, move |rng, tr| {
                let u = coord(rng, dim);
                tr.record("u", &u);
                let x = RochbergVector::top(n, u.clone());
                let omega = omega_lower_bound(&x, &default_witnesses(&x, DEFAULT_ENTRY_BUDGET)?)?;
                Ok(u.max_abs() / omega)
            })
            .at_most(1.0 + 1e-12, Provenance::PaperConstant),
        );
        out.push(
            Probe::sampled(e, n, "omega_bounded", s, move |rng, tr| {
                let x = rochberg(rng, n, dim);
                tr.record("x", &x);
                let omega = omega_lower_bound(&x, &default_witnesses(&x, DEFAULT_ENTRY_BUDGET)?)?;
                Ok(omega / x.quasinorm()?)
            })
            .at_most(cfg.budget("duality", n), Provenance::ConfiguredBudget),
        );
    }
    out
}
