use std::sync::Arc;

use rand::Rng;
use znlab_core::operators::{flat_blocks, singularity_profile};
use znlab_core::{
    duality_pairing, graph_vector, CoordVector, FiniteOperator, OperatorAtom, OperatorExpr,
    OperatorMatrix, RochbergVector,
};

use super::{coord_gap, flag};
use crate::config::{Experiment, ExperimentConfig};
use crate::error::{CliError, Result};
use crate::probe::{Probe, Provenance};
use crate::sample::{coord, rochberg, SampleRng};

/// Largest truncation used for dense adjoint checks.
const MAX_TRUNCATION: u64 = 128;
/// Truncation of the random operators in the algebraic adjoint checks.
const SMALL: usize = 8;

/// `shift^s + diag(d_0, ..., d_{n-1})` with random multipliers on `1..=width`.
fn random_triangular(rng: &mut SampleRng, n: usize, width: u64) -> OperatorMatrix<f64> {
    let s = rng.random_range(0..=n);
    let mut r = OperatorMatrix::shift_power(n, s);
    for i in 0..n {
        let d = coord(rng, width);
        let slot = OperatorMatrix::from_fn(n, n, |a, b| {
            if a == i && b == i {
                OperatorAtom::Multiplier(d.clone())
            } else {
                OperatorAtom::Zero
            }
        });
        r = r.add(&slot).expect("same shape");
    }
    r
}

pub(super) fn adjoint_check(cfg: &ExperimentConfig, orders: &[usize]) -> Vec<Probe> {
    let (dim, s) = (cfg.dim, cfg.samples);
    let e = Experiment::AdjointCheck;
    // Blocks of length 2 read on a window of at most MAX_TRUNCATION coordinates.
    let count = (dim.min(MAX_TRUNCATION) / 2).max(1);
    let mut out = Vec::new();
    for &n in orders {
        let blocks = Arc::new(flat_blocks::<f64>(2, count).expect("count >= 1"));
        let t_u = Arc::new(
            OperatorMatrix::block_operator(n, &blocks)
                .and_then(|t| t.to_finite(count as usize, 2 * count as usize))
                .expect("normalized disjoint blocks"),
        );
        let t = t_u.clone();
        out.push(
            Probe::fixed(e, n, "left_inverse", move |_| {
                let left = t.adjoint_plus().compose(&t)?;
                Ok(left.max_abs_diff(&FiniteOperator::identity(n, count as usize)))
            })
            .at_most(1e-9, Provenance::PaperConstant),
        );
        let t = t_u.clone();
        out.push(
            Probe::fixed(e, n, "projector_idempotent", move |_| {
                let p = t.compose(&t.adjoint_plus())?;
                Ok(p.compose(&p)?.max_abs_diff(&p))
            })
            .at_most(1e-9, Provenance::ExactIdentity),
        );
        let t = t_u.clone();
        out.push(
            Probe::fixed(e, n, "projector_range", move |_| {
                let p = t.compose(&t.adjoint_plus())?;
                Ok(p.compose(&t)?.max_abs_diff(&t))
            })
            .at_most(1e-9, Provenance::ExactIdentity),
        );
        let bl = blocks.clone();
        out.push(
            Probe::sampled(e, n, "domain_identity", s, move |rng, tr| {
                let x = coord(rng, count);
                tr.record("x", &x);
                let t = OperatorMatrix::block_operator(n, &bl)?;
                let lhs = t.apply(&RochbergVector::bottom(n, x.clone()))?;
                let mut rhs = RochbergVector::zero(n);
                for (v, c) in x.entries() {
                    rhs = rhs.add(&graph_vector(n, &bl[v as usize - 1]).scale(c))?;
                }
                coord_gap(&lhs, &rhs)
            })
            .at_most(1e-12, Provenance::PaperConstant),
        );
        out.push(
            Probe::sampled(e, n, "double_adjoint", s, move |rng, _| {
                let a = random_triangular(rng, n, SMALL as u64).to_finite(SMALL, SMALL)?;
                Ok(a.adjoint_plus().adjoint_plus().max_abs_diff(&a))
            })
            .at_most(1e-12, Provenance::ExactIdentity),
        );
        out.push(
            Probe::sampled(e, n, "anti_morphism", s, move |rng, _| {
                let a = random_triangular(rng, n, SMALL as u64).to_finite(SMALL, SMALL)?;
                let b = random_triangular(rng, n, SMALL as u64).to_finite(SMALL, SMALL)?;
                let lhs = a.compose(&b)?.adjoint_plus();
                let rhs = b.adjoint_plus().compose(&a.adjoint_plus())?;
                Ok(lhs.max_abs_diff(&rhs))
            })
            .at_most(1e-9, Provenance::ExactIdentity),
        );
        out.push(
            Probe::sampled(e, n, "pairing_adjoint", s, move |rng, tr| {
                let a = random_triangular(rng, n, SMALL as u64).to_finite(SMALL, SMALL)?;
                let x = rochberg(rng, n, SMALL as u64);
                let y = rochberg(rng, n, SMALL as u64);
                tr.record("x", &x);
                tr.record("y", &y);
                let lhs = duality_pairing(&a.adjoint_plus().apply(&x)?, &y)?;
                let rhs = duality_pairing(&x, &a.apply(&y)?)?;
                Ok((lhs - rhs).abs() / (1.0 + rhs.abs()))
            })
            .at_most(1e-9, Provenance::ExactIdentity),
        );
        out.push(
            Probe::sampled(e, n, "finite_agreement", s, move |rng, tr| {
                let r = random_triangular(rng, n, SMALL as u64);
                let x = rochberg(rng, n, SMALL as u64);
                tr.record("x", &x);
                coord_gap(&r.to_finite(SMALL, SMALL)?.apply(&x)?, &r.apply(&x)?)
            })
            .at_most(1e-12, Provenance::ExactIdentity),
        );
    }
    out
}

pub(super) fn corners(cfg: &ExperimentConfig, orders: &[usize]) -> Result<Vec<Probe>> {
    let (dim, s) = (cfg.dim, cfg.samples);
    let e = Experiment::Corners;
    let op: Option<OperatorExpr<f64>> = match &cfg.op {
        Some(text) => Some(
            text.parse()
                .map_err(|err| CliError::ConfigInvalid(format!("op: {err}")))?,
        ),
        None => None,
    };
    let mut out = Vec::new();
    for &n in orders {
        out.push(
            Probe::fixed(e, n, "shift_nilpotent", move |_| {
                Ok(flag(!OperatorMatrix::<f64>::shift_power(n, n).is_zero()))
            })
            .at_most(0.0, Provenance::PaperConstant),
        );
        out.push(
            Probe::fixed(e, n, "shift_composition", move |_| {
                let mut mismatches = 0.0;
                for k in 0..=n {
                    for l in 0..=n {
                        let lhs = OperatorMatrix::<f64>::shift_power(n, k)
                            .compose(&OperatorMatrix::shift_power(n, l))?;
                        mismatches += flag(lhs != OperatorMatrix::shift_power(n, (k + l).min(n)));
                    }
                }
                Ok(mismatches)
            })
            .at_most(0.0, Provenance::ExactIdentity),
        );
        // Graph vectors of normalized flats on disjoint blocks of lengths 1, 2, ..., dim.
        out.push(
            Probe::fixed(e, n, "noncompact_witness", move |tr| {
                let mut offset = 0;
                let mut family = Vec::new();
                for len in 1..=dim {
                    let u = CoordVector::flat(len, 1.0 / (len as f64).sqrt(), offset)?;
                    offset += len;
                    family.push(graph_vector(n, &u));
                }
                tr.record("blocks", &dim);
                let profile = singularity_profile(&OperatorMatrix::shift_power(n, n - 1), &family)?;
                Ok(profile
                    .into_iter()
                    .map(|r| (r - 1.0).abs())
                    .fold(0.0, f64::max))
            })
            .at_most(1e-9, Provenance::PaperConstant),
        );
        out.push(
            Probe::sampled(e, n, "corner_commute", s, move |rng, _| {
                let r = random_triangular(rng, n, 4);
                let mut mismatches = 0.0;
                for k in 1..n {
                    let c = r.corner_extract(k)?;
                    let iota = OperatorMatrix::iota(k, n)?;
                    let pi = OperatorMatrix::pi(n, n - k)?;
                    mismatches += flag(r.compose(&iota)? != iota.compose(&c.leading)?);
                    mismatches += flag(pi.compose(&r)? != c.trailing.compose(&pi)?);
                }
                Ok(mismatches)
            })
            .at_most(0.0, Provenance::ExactIdentity),
        );
        if let Some(expr) = op.clone() {
            out.push(Probe::fixed(
                e,
                n,
                format!("op_profile={expr}"),
                move |_| {
                    let a = expr.to_matrix(n)?;
                    let family: Vec<RochbergVector<f64>> = (1..=dim)
                        .map(|v| graph_vector(n, &CoordVector::unit(v)))
                        .collect();
                    Ok(singularity_profile(&a, &family)?
                        .into_iter()
                        .fold(0.0, f64::max))
                },
            ));
        }
    }
    Ok(out)
}
