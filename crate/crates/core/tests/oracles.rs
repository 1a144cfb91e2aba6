//! Values checked against independent computations: closed forms, a naive dense
//! re-implementation of the recursion, and frozen high-precision reference values.

#![allow(clippy::excessive_precision)]

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use znlab_core::operators::flat_blocks;
use znlab_core::orlicz::{luxemburg_solve, DEFAULT_MAX_ITER};
use znlab_core::*;

fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(num.into(), den.into())
}

/// `2^k / k!` on plain floats.
fn coef(k: u32) -> f64 {
    (1..=k).fold(1.0, |acc, i| acc * 2.0 / i as f64)
}

fn dense_kp(k: u32, x: &[f64]) -> Vec<f64> {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    x.iter()
        .map(|&v| {
            if v == 0.0 {
                0.0
            } else {
                coef(k) * v * (v.abs() / norm).ln().powi(k as i32)
            }
        })
        .collect()
}

fn dense_norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// The recursion written directly on equal-length arrays.
fn dense_quasinorm(coords: &[Vec<f64>]) -> f64 {
    let (x0, rest) = coords.split_last().unwrap();
    if rest.is_empty() {
        return dense_norm(x0);
    }
    let m = rest.len() as u32;
    let reduced: Vec<Vec<f64>> = rest
        .iter()
        .enumerate()
        .map(|(t, r)| {
            let kp = dense_kp(m - t as u32, x0);
            r.iter().zip(&kp).map(|(a, b)| a - b).collect()
        })
        .collect();
    dense_quasinorm(&reduced) + dense_norm(x0)
}

fn to_vector(coords: &[Vec<f64>]) -> RochbergVector<f64> {
    RochbergVector::new(
        coords
            .iter()
            .map(|c| CoordVector::from_values(c).unwrap())
            .collect(),
    )
    .unwrap()
}

fn fixtures() -> Vec<Vec<Vec<f64>>> {
    vec![
        vec![vec![0.5, -1.0, 0.0, 2.0], vec![1.0, 2.0, 3.0, 0.0]],
        vec![
            vec![0.3, 0.0, 0.0, -1.0],
            vec![0.0, 1.5, -0.5, 0.25],
            vec![0.6, 0.8, 0.0, 0.0],
        ],
        vec![
            vec![1.0, 0.0, 0.0, 0.0],
            vec![0.0, -2.0, 0.0, 1.0],
            vec![0.1, 0.2, 0.3, 0.4],
            vec![3.0, -1.0, 0.0, 0.5],
        ],
    ]
}

#[test]
fn quasinorm_matches_frozen_reference_values() {
    // 40-digit evaluations of the recursion.
    let frozen = [
        7.969_805_313_992_352_881_1,
        5.073_861_311_234_502_082_9,
        13.271_231_336_585_252_468,
    ];
    for (coords, expected) in fixtures().iter().zip(frozen) {
        let q = to_vector(coords).quasinorm().unwrap();
        assert!(
            (q - expected).abs() <= 1e-13 * expected,
            "{q} vs {expected}"
        );
        assert!((dense_quasinorm(coords) - expected).abs() <= 1e-13 * expected);
    }
}

#[test]
fn quasinorm_matches_dense_recursion() {
    let mut state = 0x2545_f491_4f6c_dd1du64;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
    };
    for n in 1..=6 {
        for _ in 0..200 {
            let coords: Vec<Vec<f64>> = (0..n)
                .map(|_| {
                    (0..12)
                        .map(|_| if next() > 0.3 { 0.0 } else { next() })
                        .collect()
                })
                .collect();
            let a = to_vector(&coords).quasinorm().unwrap();
            let b = dense_quasinorm(&coords);
            assert!((a - b).abs() <= 1e-12 * a.max(1e-300), "n={n}: {a} vs {b}");
        }
    }
}

#[test]
fn bottom_flat_matches_exponential_series() {
    // q((0, ..., 0, x)) = sum_{k<n} L^k / k! with L = ln N for the normalized flat x.
    for a in [10u32, 20, 30, 45, 60] {
        let len = 1u64 << a;
        let l = (len as f64).ln();
        let x = CoordVector::<f64>::normalized_flat(len).unwrap();
        for n in 1..=6 {
            let series: f64 = (0..n as u32)
                .map(|k| l.powi(k as i32) * coef(k) / 2f64.powi(k as i32))
                .sum();
            let q = RochbergVector::bottom(n, x.clone()).quasinorm().unwrap();
            assert!((q - series).abs() <= 1e-12 * series, "n={n} N=2^{a}");
        }
    }
}

#[test]
fn growth_ratios_match_frozen_values() {
    let rows3 = growth_profile::<f64>(3, &[1 << 30, 1 << 60]).unwrap();
    let rows4 = growth_profile::<f64>(4, &[1 << 30, 1 << 60]).unwrap();
    let frozen = [
        (rows3[0].ratio, 0.550_402_466_897_416_122_24),
        (rows3[1].ratio, 0.524_623_075_398_428_725_62),
        (rows4[0].ratio, 0.193_135_430_316_198_469_36),
        (rows4[1].ratio, 0.179_281_185_153_553_831_05),
    ];
    for (got, expected) in frozen {
        assert!((got - expected).abs() <= 1e-12 * expected);
    }
}

#[test]
fn telescope_matches_closed_form() {
    // alpha_s = (-1)^{s+1} 2^s / s!: the coefficients of 1 - e^{-2t}.
    let mut closed = Vec::new();
    let mut c = BigRational::one();
    for s in 1..=12i64 {
        c *= ratio(2, s);
        closed.push(if s % 2 == 1 { c.clone() } else { -c.clone() });
    }
    for n in 2..=13 {
        let t: ExactTelescope = telescope_coefficients(n);
        assert_eq!(t.alphas, closed[..n - 1]);
        assert_eq!(t.final_coefficient, closed[n - 2]);
        assert!(!t.final_coefficient.is_zero());
    }
    let eight: ExactTelescope = telescope_coefficients(8);
    let frozen = [
        ratio(2, 1),
        ratio(-2, 1),
        ratio(4, 3),
        ratio(-2, 3),
        ratio(4, 15),
        ratio(-4, 45),
        ratio(8, 315),
    ];
    assert_eq!(eight.alphas, frozen);
    assert!(eight
        .alphas
        .iter()
        .zip(eight.alphas.iter().skip(1))
        .all(|(a, b)| a.is_positive() != b.is_positive()));
}

#[test]
fn pairing_matches_one_based_formula() {
    // D_n(x)(y) = sum_{i+j=n+1} (-1)^i <x_i, y_j> with x_i the i-th entry from the left.
    for coords in fixtures() {
        let n = coords.len();
        let x = to_vector(&coords);
        let rev: Vec<Vec<f64>> = coords
            .iter()
            .rev()
            .map(|c| c.iter().map(|v| v * 0.5 - 1.0).collect())
            .collect();
        let y = to_vector(&rev);
        let mut expected = 0.0;
        for i in 1..=n {
            let j = n + 1 - i;
            let dot: f64 = coords[i - 1]
                .iter()
                .zip(&rev[j - 1])
                .map(|(a, b)| a * b)
                .sum();
            expected += if i % 2 == 0 { dot } else { -dot };
        }
        assert!((duality_pairing(&x, &y).unwrap() - expected).abs() < 1e-12);
    }
}

#[test]
fn commutator_example_matches_frozen_value() {
    let tau = ScaleOperator::multiplier(CoordVector::from_values(&[1.0, 0.5]).unwrap());
    let x = CoordVector::from_values(&[0.6, 0.8]).unwrap();
    let d = commutator_defect(&tau, 1, &x).unwrap();
    assert!((d - 0.489_654_137_118_943_220_99).abs() < 1e-13);
}

#[test]
fn luxemburg_matches_frozen_values() {
    let x = CoordVector::from_values(&[3.0, 4.0, 0.01]).unwrap();
    let frozen = [
        (1, 5.000_386_208_222_710_508_9),
        (2, 5.000_932_280_567_955_268_8),
        (3, 5.000_790_290_749_102_670_4),
    ];
    for (j, expected) in frozen {
        let s = luxemburg_solve(OrliczFunction::new(j), &x, 1e-14, DEFAULT_MAX_ITER).unwrap();
        assert!((s.rho - expected).abs() < 1e-12, "j={j}: {}", s.rho);
    }
}

#[test]
fn block_operator_truncation_identities() {
    for n in 1..=4 {
        for (len, count) in [(1u64, 5u64), (4, 8), (16, 8)] {
            let blocks = flat_blocks::<f64>(len, count).unwrap();
            let t = OperatorMatrix::block_operator(n, &blocks).unwrap();
            let in_m = count as usize;
            let out_m = (len * count) as usize;
            let fin = t.to_finite(in_m, out_m).unwrap();
            let plus = fin.adjoint_plus();
            let left = plus.compose(&fin).unwrap();
            assert!(left.max_abs_diff(&FiniteOperator::identity(n, in_m)) <= 1e-9);
            let p = fin.compose(&plus).unwrap();
            assert!(p.compose(&p).unwrap().max_abs_diff(&p) <= 1e-9);
            assert!(p.compose(&fin).unwrap().max_abs_diff(&fin) <= 1e-9);
        }
    }
}

#[test]
fn pairing_gram_flattening_matches_pairing() {
    for coords in fixtures() {
        let n = coords.len();
        let x = to_vector(&coords);
        let y = x
            .scale(-0.5)
            .add(&RochbergVector::top(n, CoordVector::unit(2)))
            .unwrap();
        let gram = PairingGram::new(n, 4);
        let jy = gram.apply(&y.truncate(4));
        let via: f64 = x.truncate(4).iter().zip(&jy).map(|(a, b)| a * b).sum();
        assert!((via - duality_pairing(&x, &y).unwrap()).abs() < 1e-12);
    }
}
