//! Kalton-Peck differentials on finitely supported sequences.
//!
//! `KP^k x = (2^k / k!) x ln^k(|x| / ||x||_2)` coordinatewise, with `0 ln^k 0 = 0`, and
//! `KP_{1,m} x = (KP^m x, ..., KP^1 x)`, highest derivative order first.

use crate::error::Result;
use crate::rochberg::RochbergVector;
use crate::scalar::{two_pow_over_factorial, Scalar};
use crate::seq::CoordVector;

/// Per-coordinate log ratio `ln(|x_i| / ||x||_2)` applied through `f(x_i, log_ratio)`.
///
/// For a flat block every coordinate has ratio `N^{-1/2}`, so the log ratio is computed as
/// `-ln(N) / 2` directly.
fn map_with_log_ratio<T, F>(x: &CoordVector<T>, f: F) -> CoordVector<T>
where
    T: Scalar,
    F: Fn(T, T) -> T,
{
    if x.is_zero() {
        return CoordVector::zero();
    }
    if let Some(flat) = x.as_flat() {
        let log_ratio = -T::from_count(flat.length).ln() / T::lit(2.0);
        return x.map_nonzero(|v| f(v, log_ratio));
    }
    let norm = x.l2_norm();
    x.map_nonzero(|v| f(v, (v.abs() / norm).ln()))
}

/// The `k`-th component `KP^k x`. `KP^0 x = x`.
pub fn kp_component<T: Scalar>(k: u32, x: &CoordVector<T>) -> CoordVector<T> {
    if k == 0 {
        return x.clone();
    }
    let c = two_pow_over_factorial::<T>(k);
    map_with_log_ratio(x, |v, l| c * v * l.powi(k as i32))
}

/// `KP_{1,m} x = (KP^m x, KP^{m-1} x, ..., KP^1 x)`.
pub fn kp_map<T: Scalar>(m: usize, x: &CoordVector<T>) -> Vec<CoordVector<T>> {
    if m == 0 {
        return Vec::new();
    }
    if x.is_zero() {
        return vec![CoordVector::zero(); m];
    }
    (1..=m as u32).rev().map(|k| kp_component(k, x)).collect()
}

/// `KP_{1,m} x` as an element of order `m`.
pub fn kp_tuple<T: Scalar>(m: usize, x: &CoordVector<T>) -> RochbergVector<T> {
    assert!(m >= 1, "KP_(1,m) needs m >= 1");
    RochbergVector::from_coords_unchecked(kp_map(m, x))
}

/// The quasilinearity defect of `KP_{1,m}` at `(x, y)`.
///
/// Returns `(||KP(x+y) - KP(x) - KP(y)||, ||x||_2 + ||y||_2)`; the ratio is the empirical
/// quasilinearity constant.
pub fn quasilinearity_defect<T: Scalar>(
    m: usize,
    x: &CoordVector<T>,
    y: &CoordVector<T>,
) -> Result<(T, T)> {
    assert!(m >= 1, "KP_(1,m) needs m >= 1");
    let sum = x.add(y)?;
    let diff = kp_tuple(m, &sum)
        .sub(&kp_tuple(m, x))?
        .sub(&kp_tuple(m, y))?;
    Ok((diff.quasinorm()?, x.l2_norm() + y.l2_norm()))
}

/// `|sum_{k=0}^{n-1} (-1)^k <KP^{n-1-k} x, KP^k x'>|` together with the bound
/// `2^{n-1} ||x||_2 ||x'||_2`.
pub fn lemma4_sum<T: Scalar>(n: usize, x: &CoordVector<T>, x_dual: &CoordVector<T>) -> (T, T) {
    assert!(n >= 1, "order must be at least 1");
    let top = n as u32 - 1;
    let mut sum = T::zero();
    for k in 0..=top {
        let term = kp_component(top - k, x).pair(&kp_component(k, x_dual));
        sum = if k % 2 == 0 { sum + term } else { sum - term };
    }
    let bound = T::lit(2.0).powi(top as i32) * x.l2_norm() * x_dual.l2_norm();
    (sum.abs(), bound)
}
