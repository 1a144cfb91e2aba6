use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_traits::{Float, FromPrimitive};

/// Real floating-point scalar the numerics are generic over: `f32` or `f64`.
pub trait Scalar:
    Float + FromPrimitive + Debug + Display + FromStr + Default + Send + Sync + 'static
{
    /// Lossy conversion from `f64`; used for literal constants.
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal representable")
    }

    fn from_count(n: u64) -> Self {
        Self::from_u64(n).expect("count representable")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// `2^k / k!`, the Taylor coefficient of `exp(2t)`.
pub fn two_pow_over_factorial<T: Scalar>(k: u32) -> T {
    let two = T::lit(2.0);
    (1..=k).fold(T::one(), |acc, i| acc * two / T::from_count(i as u64))
}

/// `|a - b| / max(|a|, |b|)`, zero when both vanish.
pub fn relative_gap<T: Scalar>(a: T, b: T) -> T {
    let scale = a.abs().max(b.abs());
    if scale == T::zero() {
        T::zero()
    } else {
        (a - b).abs() / scale
    }
}
