//! Numerics for the Rochberg spaces built on `l2`: Kalton-Peck maps, the recursive quasinorm,
//! the duality pairing, Orlicz norms, and operator matrices.
//!
//! Everything is generic over the scalar type; the aliases below fix it to `f64` or `f32`.

pub mod commutator;
pub mod dense;
pub mod error;
pub mod kp;
pub mod operators;
pub mod orlicz;
pub mod rochberg;
pub mod scalar;
pub mod seq;

pub use commutator::{commutator_defect, domain_invariance_check, ScaleOperator};
pub use dense::DenseMatrix;
pub use error::{Error, Result};
pub use kp::{kp_component, kp_map, kp_tuple, lemma4_sum, quasilinearity_defect};
pub use operators::{FiniteOperator, OperatorAtom, OperatorExpr, OperatorMatrix, Permutation};
pub use orlicz::{
    domain_norm, growth_profile, luxemburg_norm, telescope_coefficients, OrliczFunction,
    TelescopeCoefficients,
};
pub use rochberg::{duality_pairing, graph_vector, omega_lower_bound, PairingGram, RochbergVector};
pub use scalar::Scalar;
pub use seq::CoordVector;

pub type CoordVectorF64 = CoordVector<f64>;
pub type CoordVectorF32 = CoordVector<f32>;
pub type RochbergVectorF64 = RochbergVector<f64>;
pub type RochbergVectorF32 = RochbergVector<f32>;
pub type OperatorMatrixF64 = OperatorMatrix<f64>;
pub type OperatorMatrixF32 = OperatorMatrix<f32>;
pub type FiniteOperatorF64 = FiniteOperator<f64>;
pub type ScaleOperatorF64 = ScaleOperator<f64>;
pub type ExactTelescope = TelescopeCoefficients<num_rational::BigRational>;
