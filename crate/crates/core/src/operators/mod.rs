//! Operators on Rochberg spaces: coordinate atoms, operator matrices, dense truncations and
//! the pairing adjoint, plus diagnostics along families of vectors.

pub mod atom;
pub mod expr;
pub mod finite;
pub mod matrix;

pub use atom::{OperatorAtom, Permutation};
pub use expr::{flat_blocks, OperatorExpr};
pub use finite::FiniteOperator;
pub use matrix::{check_disjoint, check_normalized, Corners, OperatorMatrix};

use crate::error::{Error, Result};
use crate::rochberg::{duality_pairing, RochbergVector};
use crate::scalar::Scalar;

/// `max |D(T x)(T y) - D(x)(y)|` over the pairs.
pub fn pairing_preservation_check<T: Scalar>(
    t: &OperatorMatrix<T>,
    pairs: &[(RochbergVector<T>, RochbergVector<T>)],
) -> Result<T> {
    let mut worst = T::zero();
    for (x, y) in pairs {
        let before = duality_pairing(x, y)?;
        let after = duality_pairing(&t.apply(x)?, &t.apply(y)?)?;
        worst = worst.max((after - before).abs());
    }
    Ok(worst)
}

/// `||A v|| / ||v||` along the family.
pub fn singularity_profile<T: Scalar>(
    a: &OperatorMatrix<T>,
    family: &[RochbergVector<T>],
) -> Result<Vec<T>> {
    family
        .iter()
        .enumerate()
        .map(|(index, v)| {
            let q = v.quasinorm()?;
            if q == T::zero() {
                return Err(Error::ZeroVectorInFamily { index });
            }
            Ok(a.apply(v)?.quasinorm()? / q)
        })
        .collect()
}
