use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use znlab_core::orlicz::{luxemburg_solve, DEFAULT_MAX_ITER};
use znlab_core::scalar::relative_gap;
use znlab_core::{
    domain_norm, growth_profile, luxemburg_norm, telescope_coefficients, CoordVector,
    ExactTelescope, OrliczFunction,
};

use crate::config::{Experiment, ExperimentConfig};
use crate::probe::{Check, Probe, Provenance};
use crate::sample::{coord, SampleRng};

/// Reference window for the drift of `quasinorm / ln^{n-1} N`.
const DRIFT_FROM: u64 = 1 << 30;
const DRIFT_TO: u64 = 1 << 60;

/// Relative change of the growth ratio between the reference window ends, or the first and last
/// configured lengths when the window is not covered.
fn drift(n: usize, lengths: &[u64]) -> znlab_core::Result<f64> {
    let (a, b) = if lengths.contains(&DRIFT_FROM) && lengths.contains(&DRIFT_TO) {
        (DRIFT_FROM, DRIFT_TO)
    } else {
        (lengths[0], lengths[lengths.len() - 1])
    };
    let rows = growth_profile::<f64>(n, &[a, b])?;
    Ok((rows[1].ratio - rows[0].ratio).abs() / rows[0].ratio)
}

/// Random sparse vectors, with every fourth sample a normalized flat of length `2^a`, `a <= 60`.
fn mixed(rng: &mut SampleRng, dim: u64) -> CoordVector<f64> {
    if rng.random_ratio(1, 4) {
        CoordVector::normalized_flat(1u64 << rng.random_range(1..=60u32)).expect("length >= 2")
    } else {
        coord(rng, dim)
    }
}

pub(super) fn growth(cfg: &ExperimentConfig, orders: &[usize]) -> Vec<Probe> {
    let (dim, s, tol) = (cfg.dim, cfg.samples, cfg.tol);
    let e = Experiment::Growth;
    let lengths = cfg.growth_lengths();
    let mut out = vec![Probe::sampled(e, 1, "luxemburg_l2", s, move |rng, tr| {
        let x = coord(rng, dim);
        tr.record("x", &x);
        Ok(relative_gap(
            luxemburg_norm(OrliczFunction::new(0), &x, tol)?,
            x.l2_norm(),
        ))
    })
    .at_most(1e-9, Provenance::ExactIdentity)];
    for &n in orders {
        let j = n as u32 - 1;
        if n == 2 {
            let ls = lengths.clone();
            out.push(
                Probe::fixed(e, n, "flat_oracle", move |_| {
                    let mut worst = 0.0f64;
                    for row in growth_profile::<f64>(2, &ls)? {
                        worst =
                            worst.max(relative_gap(row.quasinorm, (row.length as f64).ln() + 1.0));
                    }
                    Ok(worst)
                })
                .at_most(1e-9, Provenance::ExactIdentity),
            );
            let top = *lengths.last().expect("lengths validated non-empty");
            out.push(
                Probe::fixed(e, n, "ratio_top", move |_| {
                    Ok((growth_profile::<f64>(2, &[top])?[0].ratio - 1.0).abs())
                })
                .at_most(cfg.budget("growth_drift", n), Provenance::ConfiguredBudget),
            );
        } else {
            let ls = lengths.clone();
            out.push(
                Probe::fixed(e, n, "ratio_drift", move |_| drift(n, &ls))
                    .at_most(cfg.budget("growth_drift", n), Provenance::ConfiguredBudget),
            );
        }
        out.push(
            Probe::sampled(e, n, "luxemburg_residual", s, move |rng, tr| {
                let x = mixed(rng, dim);
                tr.record("x", &x);
                Ok(luxemburg_solve(OrliczFunction::new(j), &x, tol, DEFAULT_MAX_ITER)?.residual)
            })
            .at_most(1e-10, Provenance::ExactIdentity),
        );
        out.push(Probe::sampled(e, n, "orlicz_chain", s, move |rng, tr| {
            let x = mixed(rng, dim);
            tr.record("x", &x);
            let lower = luxemburg_norm(OrliczFunction::new(j - 1), &x, tol)?;
            Ok(lower / luxemburg_norm(OrliczFunction::new(j), &x, tol)?)
        }));
        // Symmetric band: max(r, 1/r) for r = domain norm / Luxemburg norm.
        out.push(
            Probe::sampled(e, n, "equivalence", s, move |rng, tr| {
                let x = mixed(rng, dim);
                tr.record("x", &x);
                let r = domain_norm(n, &x)? / luxemburg_norm(OrliczFunction::new(j), &x, tol)?;
                Ok(r.max(1.0 / r))
            })
            .at_most(cfg.budget("equivalence", n), Provenance::ConfiguredBudget),
        );
    }
    out
}

pub(super) fn telescope(orders: &[usize]) -> Vec<Probe> {
    let e = Experiment::Telescope;
    let mut out = Vec::new();
    for &n in orders {
        let t: ExactTelescope = telescope_coefficients(n);
        for (s, alpha) in t.alphas.iter().enumerate() {
            let s = s + 1;
            let value = alpha.to_f64().expect("finite rational");
            let probe = Probe::fixed(e, n, format!("alpha_{s}={alpha}"), move |_| Ok(value));
            out.push(match s {
                1 => probe.gate(Check::Equals(2.0), Provenance::PaperConstant),
                2 => probe.gate(Check::Equals(-2.0), Provenance::ExactIdentity),
                _ => probe,
            });
        }
        // Nonzero-ness is decided on the exact rational, not its float image.
        let last = if t.final_coefficient.is_zero() {
            0.0
        } else {
            t.final_coefficient.to_f64().expect("finite rational")
        };
        out.push(
            Probe::fixed(e, n, format!("final={}", t.final_coefficient), move |_| {
                Ok(last)
            })
            .gate(Check::NonZero, Provenance::ExactIdentity),
        );
    }
    out
}
