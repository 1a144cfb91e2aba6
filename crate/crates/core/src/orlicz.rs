//! Orlicz sequence norms for `t^2 log^{2j} t`, the telescoping coefficient recursion, and the
//! logarithmic growth of bottom-coordinate vectors.
//!
//! `t^2 log^{2j} t` vanishes at 1 and is not monotone near it, so the function used is its germ at
//! zero, normalized:
//!
//! ```text
//! f_j(t) = t^2 (ln(1/t) / j)^{2j}   for t <= e^{-j}
//! f_j(t) = t^2                      for t >= e^{-j}
//! ```
//!
//! The two pieces agree at `e^{-j}`, `f_j(1) = 1`, `f_0(t) = t^2`, and `f_j` is strictly
//! increasing with `f_j(t) <= t` on `[0, 1]`.

use std::io::{self, Write};

use num_traits::{FromPrimitive, Num};

use crate::error::{Error, Result};
use crate::kp::kp_map;
use crate::rochberg::RochbergVector;
use crate::scalar::Scalar;
use crate::seq::CoordVector;

pub const DEFAULT_MAX_ITER: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct OrliczFunction {
    pub j: u32,
}

impl OrliczFunction {
    pub fn new(j: u32) -> Self {
        Self { j }
    }

    /// The switch point `e^{-j}`.
    pub fn switch_point<T: Scalar>(&self) -> T {
        (-T::from_count(self.j as u64)).exp()
    }

    pub fn value<T: Scalar>(&self, t: T) -> T {
        assert!(
            t >= T::zero(),
            "Orlicz functions take non-negative arguments"
        );
        if t == T::zero() {
            return T::zero();
        }
        if self.j == 0 || t >= self.switch_point() {
            return t * t;
        }
        let ratio = -t.ln() / T::from_count(self.j as u64);
        t * t * ratio.powi(2 * self.j as i32)
    }

    /// `sum_i f(|x_i| / rho)`.
    pub fn modular<T: Scalar>(&self, x: &CoordVector<T>, rho: T) -> T {
        x.sum_map(|v| self.value(v.abs() / rho))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LuxemburgSolution<T> {
    pub rho: T,
    pub residual: T,
    pub iterations: usize,
}

/// Geometric bisection for the `rho` with `sum_i f(|x_i| / rho) = 1`.
///
/// The bracket starts at `[max |x_i|, ||x||_1]`: the largest term alone makes the modular at least
/// 1 at the left end, and `f(t) <= t` caps it by 1 at the right end.
pub fn luxemburg_solve<T: Scalar>(
    f: OrliczFunction,
    x: &CoordVector<T>,
    tol: T,
    max_iter: usize,
) -> Result<LuxemburgSolution<T>> {
    assert!(tol > T::zero(), "tolerance must be positive");
    if x.is_zero() {
        return Ok(LuxemburgSolution {
            rho: T::zero(),
            residual: T::zero(),
            iterations: 0,
        });
    }
    let excess = |rho: T| f.modular(x, rho) - T::one();
    let two = T::lit(2.0);
    let mut lo = x.max_abs();
    let mut hi = x.l1_norm();
    for _ in 0..64 {
        if excess(lo) >= T::zero() {
            break;
        }
        lo = lo / two;
    }
    for _ in 0..64 {
        if excess(hi) <= T::zero() {
            break;
        }
        hi = hi * two;
    }
    for rho in [lo, hi] {
        let r = excess(rho).abs();
        if r <= tol {
            return Ok(LuxemburgSolution {
                rho,
                residual: r,
                iterations: 0,
            });
        }
    }
    let mut residual = T::infinity();
    for it in 1..=max_iter {
        let mid = (lo * hi).sqrt();
        let r = excess(mid);
        residual = r.abs();
        if residual <= tol {
            return Ok(LuxemburgSolution {
                rho: mid,
                residual,
                iterations: it,
            });
        }
        if mid <= lo || mid >= hi {
            break;
        }
        if r > T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::ToleranceNotReached {
        iterations: max_iter,
        residual: residual.to_f64().unwrap_or(f64::NAN),
    })
}

pub fn luxemburg_norm<T: Scalar>(f: OrliczFunction, x: &CoordVector<T>, tol: T) -> Result<T> {
    luxemburg_solve(f, x, tol, DEFAULT_MAX_ITER).map(|s| s.rho)
}

/// The coefficients `alpha_1, ..., alpha_{n-1}` of the telescoping computation and the last
/// remaining coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TelescopeCoefficients<R> {
    pub n: usize,
    pub alphas: Vec<R>,
    pub final_coefficient: R,
}

fn two_pow_over_factorial_exact<R: Clone + Num + FromPrimitive>(j: usize) -> R {
    let two = R::from_u64(2).expect("2 is representable");
    (1..=j).fold(R::one(), |acc, k| {
        acc * two.clone() / R::from_usize(k).expect("small integers are representable")
    })
}

/// Step `s` removes the rightmost coefficient `alpha_s` of the current log-power expansion and
/// subtracts `alpha_s * 2^j / j!` from the shifted remainder.
pub fn telescope_coefficients<R: Clone + Num + FromPrimitive>(
    n: usize,
) -> TelescopeCoefficients<R> {
    assert!(n >= 2, "the telescope needs n >= 2");
    let c: Vec<R> = (1..n).map(two_pow_over_factorial_exact).collect();
    let mut b = c.clone();
    let mut alphas = Vec::with_capacity(n - 1);
    while let Some(alpha) = b.first().cloned() {
        b = b[1..]
            .iter()
            .zip(&c)
            .map(|(next, cj)| next.clone() - alpha.clone() * cj.clone())
            .collect();
        alphas.push(alpha);
    }
    let final_coefficient = alphas.last().cloned().expect("n >= 2 gives one step");
    TelescopeCoefficients {
        n,
        alphas,
        final_coefficient,
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GrowthRow<T> {
    pub n: usize,
    pub length: u64,
    pub quasinorm: T,
    pub logpow: T,
    pub ratio: T,
}

/// Quasinorm of `(0, ..., 0, x)` for the normalized flat `x` of each length against
/// `ln^{n-1} N`.
pub fn growth_profile<T: Scalar>(n: usize, lengths: &[u64]) -> Result<Vec<GrowthRow<T>>> {
    if n < 2 {
        return Err(Error::InvalidOrder { min: 2, got: n });
    }
    lengths
        .iter()
        .map(|&len| {
            if len < 2 {
                return Err(Error::InvalidVector(format!(
                    "growth length must be >= 2, got {len}"
                )));
            }
            let x = CoordVector::normalized_flat(len)?;
            let quasinorm = RochbergVector::bottom(n, x).quasinorm()?;
            let logpow = T::from_count(len).ln().powi(n as i32 - 1);
            Ok(GrowthRow {
                n,
                length: len,
                quasinorm,
                logpow,
                ratio: quasinorm / logpow,
            })
        })
        .collect()
}

pub fn write_growth_csv<T: Scalar, W: Write>(rows: &[GrowthRow<T>], mut out: W) -> io::Result<()> {
    writeln!(out, "n,N,quasinorm,logpow,ratio")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{:?},{:?},{:?}",
            r.n, r.length, r.quasinorm, r.logpow, r.ratio
        )?;
    }
    Ok(())
}

/// `||KP_{1,n-1} x|| + ||x||_2`, the graph norm of the domain of `KP_{1,n-1}`.
pub fn domain_norm<T: Scalar>(n: usize, x: &CoordVector<T>) -> Result<T> {
    if n < 2 {
        return Err(Error::InvalidOrder { min: 2, got: n });
    }
    let kp = RochbergVector::from_coords_unchecked(kp_map(n - 1, x));
    Ok(kp.quasinorm()? + x.l2_norm())
}
