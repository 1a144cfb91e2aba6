//! Operators acting on the scale and their commutators with `KP_{1,k}`.

use crate::error::{Error, Result};
use crate::kp::kp_tuple;
use crate::operators::{
    check_disjoint, check_normalized, OperatorAtom, OperatorMatrix, Permutation,
};
use crate::orlicz::domain_norm;
use crate::scalar::Scalar;
use crate::seq::CoordVector;

/// A coordinate operator bounded by `bound` on every `l_p`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScaleOperator<T: Scalar> {
    atom: OperatorAtom<T>,
    bound: T,
}

impl<T: Scalar> ScaleOperator<T> {
    pub fn identity() -> Self {
        Self {
            atom: OperatorAtom::Identity,
            bound: T::one(),
        }
    }

    pub fn multiplier(d: CoordVector<T>) -> Self {
        let bound = d.max_abs();
        Self {
            atom: OperatorAtom::Multiplier(d),
            bound,
        }
    }

    pub fn permutation(p: Permutation) -> Self {
        Self {
            atom: OperatorAtom::Permutation(p),
            bound: T::one(),
        }
    }

    pub fn block_map(blocks: Vec<CoordVector<T>>) -> Result<Self> {
        check_disjoint(&blocks)?;
        check_normalized(&blocks)?;
        Ok(Self {
            atom: OperatorAtom::BlockMap(blocks),
            bound: T::one(),
        })
    }

    pub fn atom(&self) -> &OperatorAtom<T> {
        &self.atom
    }

    pub fn bound(&self) -> T {
        self.bound
    }

    /// `T_n = diag(tau, ..., tau)`.
    pub fn lift(&self, n: usize) -> OperatorMatrix<T> {
        OperatorMatrix::diagonal(n, self.atom.clone())
    }

    pub fn apply(&self, x: &CoordVector<T>) -> Result<CoordVector<T>> {
        self.atom.apply(x)
    }
}

/// `||T_k KP_{1,k} x - KP_{1,k} tau x|| / ||x||_2`, zero at `x = 0`.
pub fn commutator_defect<T: Scalar>(
    tau: &ScaleOperator<T>,
    k: usize,
    x: &CoordVector<T>,
) -> Result<T> {
    if k == 0 {
        return Err(Error::InvalidOrder { min: 1, got: 0 });
    }
    if x.is_zero() {
        return Ok(T::zero());
    }
    let lifted = tau.lift(k).apply(&kp_tuple(k, x))?;
    let diff = lifted.sub(&kp_tuple(k, &tau.apply(x)?))?;
    Ok(diff.quasinorm()? / x.l2_norm())
}

/// `domain_norm(n, tau x) / domain_norm(n, x)` for each sample.
pub fn domain_ratio_profile<T: Scalar>(
    tau: &OperatorAtom<T>,
    n: usize,
    samples: &[CoordVector<T>],
) -> Result<Vec<T>> {
    samples
        .iter()
        .enumerate()
        .map(|(index, x)| {
            if x.is_zero() {
                return Err(Error::ZeroVectorInFamily { index });
            }
            Ok(domain_norm(n, &tau.apply(x)?)? / domain_norm(n, x)?)
        })
        .collect()
}

/// The largest domain norm ratio over the samples.
pub fn domain_invariance_check<T: Scalar>(
    tau: &ScaleOperator<T>,
    n: usize,
    samples: &[CoordVector<T>],
) -> Result<T> {
    Ok(domain_ratio_profile(&tau.atom, n, samples)?
        .into_iter()
        .fold(T::zero(), T::max))
}
