//! Counter-based sampling: sample `i` of a probe draws from its own ChaCha stream, keyed by the
//! seed and the probe's name, so results do not depend on evaluation order or thread count.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};
use znlab_core::{CoordVector, Permutation, RochbergVector};

pub type SampleRng = ChaCha8Rng;

pub fn sample_rng(seed: u64, key: &str, index: u64) -> SampleRng {
    let mut hasher = Sha256::new();
    hasher.update(seed.to_le_bytes());
    hasher.update(key.as_bytes());
    let mut rng = ChaCha8Rng::from_seed(hasher.finalize().into());
    rng.set_stream(index);
    rng
}

/// Labelled text forms of a sample's inputs, collected only during replay.
#[derive(Debug, Default)]
pub struct Trace {
    inputs: Option<Vec<(String, String)>>,
}

impl Trace {
    pub fn off() -> Self {
        Trace { inputs: None }
    }

    pub fn on() -> Self {
        Trace {
            inputs: Some(Vec::new()),
        }
    }

    pub fn record<D: std::fmt::Display>(&mut self, label: &str, value: &D) {
        if let Some(inputs) = &mut self.inputs {
            inputs.push((label.to_string(), value.to_string()));
        }
    }

    pub fn into_inputs(self) -> Vec<(String, String)> {
        self.inputs.unwrap_or_default()
    }
}

/// `+-e^{3u}` with `u` uniform on `[-1, 1]`.
pub fn signed(rng: &mut SampleRng) -> f64 {
    let m = (3.0 * rng.random_range(-1.0..=1.0f64)).exp();
    if rng.random_bool(0.5) {
        -m
    } else {
        m
    }
}

/// A nonzero vector supported in `1..=dim` with a quarter of its entries zero on average.
pub fn coord(rng: &mut SampleRng, dim: u64) -> CoordVector<f64> {
    let len = rng.random_range(1..=dim) as usize;
    let mut values: Vec<f64> = (0..len)
        .map(|_| {
            if rng.random_bool(0.25) {
                0.0
            } else {
                signed(rng)
            }
        })
        .collect();
    let forced = rng.random_range(0..len);
    values[forced] = signed(rng);
    CoordVector::from_values(&values).expect("finite values")
}

/// A nonzero vector of `Z_n` whose coordinates are drawn independently; each may vanish.
pub fn rochberg(rng: &mut SampleRng, n: usize, dim: u64) -> RochbergVector<f64> {
    let mut coords: Vec<CoordVector<f64>> = (0..n)
        .map(|_| {
            if rng.random_bool(0.15) {
                CoordVector::zero()
            } else {
                coord(rng, dim)
            }
        })
        .collect();
    if coords.iter().all(CoordVector::is_zero) {
        let t = rng.random_range(0..n);
        coords[t] = coord(rng, dim);
    }
    RochbergVector::new(coords).expect("order at least 1")
}

/// A nonzero scalar with magnitude in `[e^{-5}, e^5]`.
pub fn scalar(rng: &mut SampleRng) -> f64 {
    let m = (5.0 * rng.random_range(-1.0..=1.0f64)).exp();
    if rng.random_bool(0.5) {
        -m
    } else {
        m
    }
}

/// Multiplier entries in `(0, 1]`, log-uniform down to `e^{-4}`.
pub fn contractive(rng: &mut SampleRng, dim: u64) -> CoordVector<f64> {
    let values: Vec<f64> = (0..dim)
        .map(|_| (-4.0 * rng.random_range(0.0..=1.0f64)).exp())
        .collect();
    CoordVector::from_values(&values).expect("finite values")
}

/// Multiplier entries `+-1`.
pub fn unimodular(rng: &mut SampleRng, dim: u64) -> CoordVector<f64> {
    let values: Vec<f64> = (0..dim)
        .map(|_| if rng.random_bool(0.5) { -1.0 } else { 1.0 })
        .collect();
    CoordVector::from_values(&values).expect("finite values")
}

pub fn permutation(rng: &mut SampleRng, len: u64) -> Permutation {
    let mut images: Vec<u64> = (1..=len).collect();
    images.shuffle(rng);
    Permutation::new(images).expect("shuffle is a bijection")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a = coord(&mut sample_rng(7, "k", 3), 64);
        let b = coord(&mut sample_rng(7, "k", 3), 64);
        assert_eq!(a, b);
        assert_ne!(a, coord(&mut sample_rng(7, "k", 4), 64));
        assert_ne!(a, coord(&mut sample_rng(8, "k", 3), 64));
        assert_ne!(a, coord(&mut sample_rng(7, "j", 3), 64));
    }

    #[test]
    fn samples_respect_shape() {
        for i in 0..200 {
            let mut rng = sample_rng(1, "shape", i);
            let x = coord(&mut rng, 16);
            assert!(!x.is_zero());
            assert!(x.support_bounds().unwrap().1 <= 16);
            let v = rochberg(&mut rng, 3, 8);
            assert_eq!(v.order(), 3);
            assert!(!v.is_zero());
            let d = contractive(&mut rng, 8);
            assert!(d.max_abs() <= 1.0 && d.entries().all(|(_, v)| v > 0.0));
            assert_eq!(unimodular(&mut rng, 8).max_abs(), 1.0);
            assert_eq!(permutation(&mut rng, 5).len(), 5);
        }
    }
}
