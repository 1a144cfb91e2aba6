//! Operator matrices between Rochberg spaces, indexed by derivative order.

use crate::error::{Error, Result};
use crate::kp::kp_component;
use crate::rochberg::RochbergVector;
use crate::scalar::Scalar;
use crate::seq::{CoordVector, DEFAULT_ENTRY_BUDGET};

use super::atom::OperatorAtom;
use super::finite::FiniteOperator;

/// A map from order `in_order` to order `out_order`. Rows and columns are stored by tuple
/// position (highest order first); [`Self::entry`] takes derivative orders.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix<T: Scalar> {
    out_order: usize,
    in_order: usize,
    rows: Vec<Vec<OperatorAtom<T>>>,
}

/// The leading `k x k` corner (highest orders) and the trailing `(n - k) x (n - k)` corner.
#[derive(Clone, Debug, PartialEq)]
pub struct Corners<T: Scalar> {
    pub leading: OperatorMatrix<T>,
    pub trailing: OperatorMatrix<T>,
}

/// Checks that the blocks have pairwise disjoint supports.
pub fn check_disjoint<T: Scalar>(blocks: &[CoordVector<T>]) -> Result<()> {
    let mut intervals: Vec<(u64, u64, usize)> = Vec::new();
    for (b, w) in blocks.iter().enumerate() {
        if let Some(f) = w.as_flat() {
            intervals.push((f.first(), f.last(), b));
        } else {
            intervals.extend(w.entries().map(|(i, _)| (i, i, b)));
        }
    }
    intervals.sort_unstable();
    for pair in intervals.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        if b.0 <= a.1 {
            let (first, second) = (a.2.min(b.2), a.2.max(b.2));
            return Err(Error::BlockOverlap { first, second });
        }
    }
    Ok(())
}

/// Checks that every block has unit `l2` norm.
pub fn check_normalized<T: Scalar>(blocks: &[CoordVector<T>]) -> Result<()> {
    let tol = T::lit(1024.0) * T::epsilon();
    for (index, w) in blocks.iter().enumerate() {
        let norm = w.l2_norm();
        if (norm - T::one()).abs() > tol {
            return Err(Error::BlockNotNormalized {
                index,
                norm: norm.to_f64().unwrap_or(f64::NAN),
            });
        }
    }
    Ok(())
}

impl<T: Scalar> OperatorMatrix<T> {
    /// Builds a matrix from `f(i, j)`, the atom sending input order `j` to output order `i`.
    pub fn from_fn<F>(out_order: usize, in_order: usize, mut f: F) -> Self
    where
        F: FnMut(usize, usize) -> OperatorAtom<T>,
    {
        assert!(out_order >= 1 && in_order >= 1, "orders must be at least 1");
        let rows = (0..out_order)
            .map(|t| {
                (0..in_order)
                    .map(|s| f(out_order - 1 - t, in_order - 1 - s))
                    .collect()
            })
            .collect();
        Self {
            out_order,
            in_order,
            rows,
        }
    }

    /// Builds a matrix from rows given highest order first.
    pub fn from_rows(rows: Vec<Vec<OperatorAtom<T>>>) -> Result<Self> {
        let out_order = rows.len();
        let in_order = rows.first().map_or(0, Vec::len);
        if out_order == 0 {
            return Err(Error::InvalidOrder { min: 1, got: 0 });
        }
        if in_order == 0 {
            return Err(Error::InvalidOrder { min: 1, got: 0 });
        }
        if let Some(r) = rows.iter().find(|r| r.len() != in_order) {
            return Err(Error::OrderMismatch {
                expected: in_order,
                got: r.len(),
            });
        }
        Ok(Self {
            out_order,
            in_order,
            rows,
        })
    }

    pub fn zero(out_order: usize, in_order: usize) -> Self {
        Self::from_fn(out_order, in_order, |_, _| OperatorAtom::Zero)
    }

    /// `tau` in every diagonal slot.
    pub fn diagonal(n: usize, tau: OperatorAtom<T>) -> Self {
        Self::from_fn(n, n, |i, j| {
            if i == j {
                tau.clone()
            } else {
                OperatorAtom::Zero
            }
        })
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(n, OperatorAtom::Identity)
    }

    /// `iota_{k,n}`: output order `j + n - k` receives input order `j`.
    pub fn iota(k: usize, n: usize) -> Result<Self> {
        if k > n || k == 0 {
            return Err(Error::OrderMismatch {
                expected: n,
                got: k,
            });
        }
        Ok(Self::from_fn(n, k, |i, j| {
            if i == j + (n - k) {
                OperatorAtom::Identity
            } else {
                OperatorAtom::Zero
            }
        }))
    }

    /// `pi_{n,k}`: keeps orders `0..k`.
    pub fn pi(n: usize, k: usize) -> Result<Self> {
        if k > n || k == 0 {
            return Err(Error::OrderMismatch {
                expected: n,
                got: k,
            });
        }
        Ok(Self::from_fn(k, n, |i, j| {
            if i == j {
                OperatorAtom::Identity
            } else {
                OperatorAtom::Zero
            }
        }))
    }

    /// The shift `iota_{n-1,n} pi_{n,n-1}`, zero for `n = 1`.
    pub fn shift(n: usize) -> Self {
        if n == 1 {
            return Self::zero(1, 1);
        }
        Self::iota(n - 1, n)
            .and_then(|i| i.compose(&Self::pi(n, n - 1)?))
            .expect("orders are consistent")
    }

    /// The `k`-th power of [`Self::shift`]; zero once `k >= n`.
    pub fn shift_power(n: usize, k: usize) -> Self {
        let shift = Self::shift(n);
        let mut acc = Self::identity(n);
        for _ in 0..k.min(n) {
            acc = shift.compose(&acc).expect("square of equal order");
        }
        acc
    }

    /// `T_U`: the entry from input order `j` to output order `i >= j` maps `e_v` to
    /// `KP^{i-j} w_v`.
    pub fn block_operator(n: usize, blocks: &[CoordVector<T>]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidOrder { min: 1, got: 0 });
        }
        check_disjoint(blocks)?;
        check_normalized(blocks)?;
        let levels: Vec<OperatorAtom<T>> = (0..n as u32)
            .map(|d| OperatorAtom::BlockMap(blocks.iter().map(|w| kp_component(d, w)).collect()))
            .collect();
        Ok(Self::from_fn(n, n, |i, j| {
            if i >= j {
                levels[i - j].clone()
            } else {
                OperatorAtom::Zero
            }
        }))
    }

    pub fn out_order(&self) -> usize {
        self.out_order
    }

    pub fn in_order(&self) -> usize {
        self.in_order
    }

    /// The atom from input derivative order `j` to output derivative order `i`.
    pub fn entry(&self, i: usize, j: usize) -> &OperatorAtom<T> {
        &self.rows[self.out_order - 1 - i][self.in_order - 1 - j]
    }

    pub fn rows(&self) -> &[Vec<OperatorAtom<T>>] {
        &self.rows
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().flatten().all(OperatorAtom::is_zero)
    }

    /// Fails on the first nonzero entry taking a higher input order to a lower output order.
    pub fn check_triangular(&self) -> Result<()> {
        for i in 0..self.out_order {
            for j in (i + 1)..self.in_order {
                if !self.entry(i, j).is_zero() {
                    return Err(Error::NotTriangular {
                        out_order: i,
                        in_order: j,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn apply(&self, v: &RochbergVector<T>) -> Result<RochbergVector<T>> {
        self.apply_within(v, DEFAULT_ENTRY_BUDGET)
    }

    pub fn apply_within(&self, v: &RochbergVector<T>, budget: u64) -> Result<RochbergVector<T>> {
        if v.order() != self.in_order {
            return Err(Error::OrderMismatch {
                expected: self.in_order,
                got: v.order(),
            });
        }
        let coords = self
            .rows
            .iter()
            .map(|row| {
                let mut acc = CoordVector::zero();
                for (a, x) in row.iter().zip(v.coords()) {
                    if a.is_zero() || x.is_zero() {
                        continue;
                    }
                    acc = acc.add_within(&a.apply_within(x, budget)?, budget)?;
                }
                Ok(acc)
            })
            .collect::<Result<Vec<_>>>()?;
        RochbergVector::new(coords)
    }

    /// `self * rhs`: apply `rhs` first.
    pub fn compose(&self, rhs: &Self) -> Result<Self> {
        if rhs.out_order != self.in_order {
            return Err(Error::OrderMismatch {
                expected: self.in_order,
                got: rhs.out_order,
            });
        }
        let rows = (0..self.out_order)
            .map(|t| {
                (0..rhs.in_order)
                    .map(|s| {
                        (0..self.in_order).fold(OperatorAtom::Zero, |acc, l| {
                            acc.plus(self.rows[t][l].clone().then_after(rhs.rows[l][s].clone()))
                        })
                    })
                    .collect()
            })
            .collect();
        Ok(Self {
            out_order: self.out_order,
            in_order: rhs.in_order,
            rows,
        })
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        if (rhs.out_order, rhs.in_order) != (self.out_order, self.in_order) {
            return Err(Error::OrderMismatch {
                expected: self.out_order,
                got: rhs.out_order,
            });
        }
        let rows = self
            .rows
            .iter()
            .zip(&rhs.rows)
            .map(|(a, b)| {
                a.iter()
                    .zip(b)
                    .map(|(x, y)| x.clone().plus(y.clone()))
                    .collect()
            })
            .collect();
        Ok(Self { rows, ..*self })
    }

    pub fn scale(&self, lambda: T) -> Self {
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().map(|a| a.clone().scaled(lambda)).collect())
            .collect();
        Self { rows, ..*self }
    }

    /// Splits a square triangular matrix at `k` into its leading and trailing corners.
    pub fn corner_extract(&self, k: usize) -> Result<Corners<T>> {
        let n = self.out_order;
        if self.in_order != n {
            return Err(Error::OrderMismatch {
                expected: n,
                got: self.in_order,
            });
        }
        if k == 0 || k >= n {
            return Err(Error::OrderMismatch {
                expected: n,
                got: k,
            });
        }
        self.check_triangular()?;
        let block = |r: std::ops::Range<usize>| {
            let rows = self.rows[r.clone()]
                .iter()
                .map(|row| row[r.clone()].to_vec())
                .collect();
            Self::from_rows(rows).expect("non-empty corner")
        };
        Ok(Corners {
            leading: block(0..k),
            trailing: block(k..n),
        })
    }

    /// The matrix on coordinates `1..=in_m` of every input order, read on `1..=out_m`.
    pub fn to_finite(&self, in_m: usize, out_m: usize) -> Result<FiniteOperator<T>> {
        FiniteOperator::from_matrix(self, in_m, out_m)
    }
}
