//! Coordinate operators acting on a single sequence.

use std::collections::BTreeMap;
use std::fmt;

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::seq::{CoordVector, DEFAULT_ENTRY_BUDGET};

/// A bijection of `{1, ..., L}` extended by the identity to all indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<u64>,
}

impl Permutation {
    /// `images[i - 1]` is the image of `i`.
    pub fn new(images: Vec<u64>) -> Result<Self> {
        let len = images.len() as u64;
        let mut seen = vec![false; images.len()];
        for &img in &images {
            if img == 0 || img > len {
                return Err(Error::InvalidPermutation(format!(
                    "image {img} outside 1..={len}"
                )));
            }
            if std::mem::replace(&mut seen[img as usize - 1], true) {
                return Err(Error::InvalidPermutation(format!("image {img} repeated")));
            }
        }
        Ok(Self { images })
    }

    pub fn identity() -> Self {
        Self { images: Vec::new() }
    }

    /// `i -> i + shift` on `1..=len` cyclically.
    pub fn cyclic(len: u64, shift: u64) -> Self {
        let images = (0..len).map(|i| (i + shift) % len + 1).collect();
        Self { images }
    }

    pub fn len(&self) -> u64 {
        self.images.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[u64] {
        &self.images
    }

    pub fn image(&self, i: u64) -> u64 {
        if i >= 1 && i <= self.len() {
            self.images[i as usize - 1]
        } else {
            i
        }
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![0; self.images.len()];
        for (i, &img) in self.images.iter().enumerate() {
            images[img as usize - 1] = i as u64 + 1;
        }
        Self { images }
    }

    /// `(sigma x)_{sigma(i)} = x_i`.
    pub fn apply<T: Scalar>(&self, x: &CoordVector<T>, budget: u64) -> Result<CoordVector<T>> {
        match x.support_bounds() {
            None => return Ok(CoordVector::zero()),
            Some((lo, _)) if lo > self.len() => return Ok(x.clone()),
            _ => {}
        }
        let entries = x.dense_entries(budget)?;
        CoordVector::from_entries(entries.into_iter().map(|(i, v)| (self.image(i), v)))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum OperatorAtom<T: Scalar> {
    Zero,
    Identity,
    Scale(T),
    /// Pointwise product with `d`; coordinates outside the support of `d` are annihilated.
    Multiplier(CoordVector<T>),
    Permutation(Permutation),
    /// `e_v -> w_v` for `v = 1..=w.len()`, `e_v -> 0` beyond.
    BlockMap(Vec<CoordVector<T>>),
    Sum(Vec<OperatorAtom<T>>),
    /// Applied right to left: `Compose([a, b]) x = a(b(x))`.
    Compose(Vec<OperatorAtom<T>>),
}

impl<T: Scalar> OperatorAtom<T> {
    pub fn scale(lambda: T) -> Self {
        if lambda == T::zero() {
            Self::Zero
        } else if lambda == T::one() {
            Self::Identity
        } else {
            Self::Scale(lambda)
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Self::Zero)
    }

    pub fn is_identity(&self) -> bool {
        matches!(self, Self::Identity)
    }

    /// `self + other`, dropping zeros and flattening nested sums.
    pub fn plus(self, other: Self) -> Self {
        let mut terms = Vec::new();
        for t in [self, other] {
            match t {
                Self::Zero => {}
                Self::Sum(inner) => terms.extend(inner),
                t => terms.push(t),
            }
        }
        match terms.len() {
            0 => Self::Zero,
            1 => terms.pop().expect("one term"),
            _ => Self::Sum(terms),
        }
    }

    /// `self * other` (apply `other` first), absorbing identities, zeros and scalars.
    pub fn then_after(self, other: Self) -> Self {
        match (self, other) {
            (Self::Zero, _) | (_, Self::Zero) => Self::Zero,
            (Self::Identity, b) => b,
            (a, Self::Identity) => a,
            (Self::Scale(a), Self::Scale(b)) => Self::scale(a * b),
            (a, b) => {
                let mut factors = Vec::new();
                for f in [a, b] {
                    match f {
                        Self::Compose(inner) => factors.extend(inner),
                        f => factors.push(f),
                    }
                }
                Self::Compose(factors)
            }
        }
    }

    /// `lambda * self`.
    pub fn scaled(self, lambda: T) -> Self {
        Self::scale(lambda).then_after(self)
    }

    pub fn apply(&self, x: &CoordVector<T>) -> Result<CoordVector<T>> {
        self.apply_within(x, DEFAULT_ENTRY_BUDGET)
    }

    pub fn apply_within(&self, x: &CoordVector<T>, budget: u64) -> Result<CoordVector<T>> {
        match self {
            Self::Zero => Ok(CoordVector::zero()),
            Self::Identity => Ok(x.clone()),
            Self::Scale(lambda) => Ok(x.scale(*lambda)),
            Self::Multiplier(d) => Ok(d.hadamard(x)),
            Self::Permutation(p) => p.apply(x, budget),
            Self::BlockMap(blocks) => {
                let terms: Vec<(usize, T)> = x
                    .entries_between(1, blocks.len() as u64)
                    .map(|(v, c)| (v as usize - 1, c))
                    .collect();
                if let [(v, c)] = terms[..] {
                    return Ok(blocks[v].scale(c));
                }
                let mut acc = BTreeMap::new();
                for (v, c) in terms {
                    for (i, w) in blocks[v].dense_entries(budget)? {
                        let e = acc.entry(i).or_insert_with(T::zero);
                        *e = *e + c * w;
                    }
                    if acc.len() as u64 > budget {
                        return Err(Error::EntryBudgetExceeded {
                            needed: acc.len() as u64,
                            budget,
                        });
                    }
                }
                CoordVector::from_entries(acc)
            }
            Self::Sum(terms) => {
                let mut acc = CoordVector::zero();
                for t in terms {
                    acc = acc.add_within(&t.apply_within(x, budget)?, budget)?;
                }
                Ok(acc)
            }
            Self::Compose(factors) => {
                let mut cur = x.clone();
                for f in factors.iter().rev() {
                    cur = f.apply_within(&cur, budget)?;
                }
                Ok(cur)
            }
        }
    }

    /// The `out_m x in_m` matrix of the operator on coordinates `1..=in_m`, read on `1..=out_m`.
    pub fn to_dense(&self, in_m: usize, out_m: usize) -> Result<DenseMatrix<T>> {
        let mut mat = DenseMatrix::zeros(out_m, in_m);
        if self.is_zero() {
            return Ok(mat);
        }
        for c in 0..in_m {
            let col = self.apply(&CoordVector::unit(c as u64 + 1))?;
            for (r, v) in col.entries_between(1, out_m as u64) {
                mat[(r as usize - 1, c)] = v;
            }
        }
        Ok(mat)
    }
}

impl<T: Scalar> fmt::Display for OperatorAtom<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Zero => write!(f, "zero"),
            Self::Identity => write!(f, "id"),
            Self::Scale(l) => write!(f, "{l}·id"),
            Self::Multiplier(d) => write!(f, "mult{d}"),
            Self::Permutation(p) => write!(f, "perm{:?}", p.images()),
            Self::BlockMap(w) => write!(f, "blockmap[{} blocks]", w.len()),
            Self::Sum(t) => {
                write!(f, "(")?;
                for (k, a) in t.iter().enumerate() {
                    if k > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
            Self::Compose(t) => {
                for (k, a) in t.iter().enumerate() {
                    if k > 0 {
                        write!(f, " * ")?;
                    }
                    write!(f, "{a}")?;
                }
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[f64]) -> CoordVector<f64> {
        CoordVector::from_values(xs).unwrap()
    }

    #[test]
    fn permutation_validation_and_action() {
        assert!(Permutation::new(vec![1, 1]).is_err());
        assert!(Permutation::new(vec![0, 1]).is_err());
        assert!(Permutation::new(vec![1, 3]).is_err());
        let p = Permutation::new(vec![2, 3, 1]).unwrap();
        assert_eq!(p.image(1), 2);
        assert_eq!(p.image(9), 9);
        let x = v(&[1.0, 2.0, 3.0, 4.0]);
        let y = p.apply(&x, DEFAULT_ENTRY_BUDGET).unwrap();
        assert_eq!(y, v(&[3.0, 1.0, 2.0, 4.0]));
        assert_eq!(p.inverse().apply(&y, DEFAULT_ENTRY_BUDGET).unwrap(), x);
        let far = CoordVector::flat(1 << 50, 1.0, 10).unwrap();
        assert_eq!(p.apply(&far, DEFAULT_ENTRY_BUDGET).unwrap(), far);
        assert_eq!(Permutation::cyclic(3, 1), p);
    }

    #[test]
    fn smart_constructors() {
        let m = OperatorAtom::Multiplier(v(&[1.0, 2.0]));
        assert_eq!(OperatorAtom::Identity.then_after(m.clone()), m);
        assert_eq!(m.clone().then_after(OperatorAtom::Zero), OperatorAtom::Zero);
        assert_eq!(OperatorAtom::Zero.plus(m.clone()), m);
        assert_eq!(
            OperatorAtom::<f64>::Scale(2.0).then_after(OperatorAtom::Scale(0.5)),
            OperatorAtom::Identity
        );
        assert_eq!(m.clone().scaled(0.0), OperatorAtom::Zero);
        let c = m.clone().then_after(m.clone()).then_after(m.clone());
        assert!(matches!(c, OperatorAtom::Compose(ref f) if f.len() == 3));
    }

    #[test]
    fn atom_application() {
        let x = v(&[1.0, 2.0, 3.0]);
        let m = OperatorAtom::Multiplier(v(&[1.0, 0.5]));
        assert_eq!(m.apply(&x).unwrap(), v(&[1.0, 1.0]));
        let blocks = vec![CoordVector::unit(2), CoordVector::flat(4, 0.5, 4).unwrap()];
        let b = OperatorAtom::BlockMap(blocks);
        assert_eq!(
            b.apply(&CoordVector::unit(1)).unwrap(),
            CoordVector::unit(2)
        );
        assert!(b.apply(&CoordVector::unit(3)).unwrap().is_zero());
        assert_eq!(
            b.apply(&x).unwrap(),
            v(&[0.0, 1.0, 0.0, 0.0, 1.0, 1.0, 1.0, 1.0])
        );
        let s = m.clone().plus(OperatorAtom::Identity);
        assert_eq!(s.apply(&x).unwrap(), v(&[2.0, 3.0, 3.0]));
        let c = m.clone().then_after(OperatorAtom::Scale(2.0));
        assert_eq!(c.apply(&x).unwrap(), v(&[2.0, 2.0]));
    }

    #[test]
    fn dense_matrix_of_atom() {
        let p = OperatorAtom::<f64>::Permutation(Permutation::new(vec![2, 1]).unwrap());
        let mat = p.to_dense(3, 3).unwrap();
        assert_eq!(
            mat,
            DenseMatrix::from_rows(&[
                vec![0.0, 1.0, 0.0],
                vec![1.0, 0.0, 0.0],
                vec![0.0, 0.0, 1.0]
            ])
        );
    }
}
