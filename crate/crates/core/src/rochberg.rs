//! Elements of the Rochberg space of order `n` and their recursive quasinorm.
//!
//! A vector of order `n` is stored as `(x_{n-1}, ..., x_1, x_0)`: position `t` of `coords`
//! carries derivative order `n - 1 - t`. The duality pairing labels coordinates `1..=n` from the
//! left, so label `i` is `coords[i - 1]`; that translation happens in [`duality_pairing`] and
//! [`PairingGram`] only.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::kp::kp_map;
use crate::scalar::Scalar;
use crate::seq::{CoordVector, DEFAULT_ENTRY_BUDGET};

#[derive(Clone, Debug)]
pub struct RochbergVector<T> {
    coords: Vec<CoordVector<T>>,
}

impl<T: Scalar> PartialEq for RochbergVector<T> {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords
    }
}

impl<T: Scalar> Eq for RochbergVector<T> {}

impl<T: Scalar> std::hash::Hash for RochbergVector<T> {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coords.hash(state);
    }
}

impl<T: Scalar> RochbergVector<T> {
    /// Builds a vector from `(x_{n-1}, ..., x_0)`. Fails on an empty tuple.
    pub fn new(coords: Vec<CoordVector<T>>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidOrder { min: 1, got: 0 });
        }
        Ok(Self { coords })
    }

    pub(crate) fn from_coords_unchecked(coords: Vec<CoordVector<T>>) -> Self {
        debug_assert!(!coords.is_empty());
        Self { coords }
    }

    pub fn zero(n: usize) -> Self {
        assert!(n >= 1, "order must be at least 1");
        Self {
            coords: vec![CoordVector::zero(); n],
        }
    }

    /// `(0, ..., 0, x)`: `x` in the lowest order.
    pub fn bottom(n: usize, x: CoordVector<T>) -> Self {
        let mut v = Self::zero(n);
        v.coords[n - 1] = x;
        v
    }

    /// `(x, 0, ..., 0)`: `x` in the highest order.
    pub fn top(n: usize, x: CoordVector<T>) -> Self {
        let mut v = Self::zero(n);
        v.coords[0] = x;
        v
    }

    pub fn order(&self) -> usize {
        self.coords.len()
    }

    /// Coordinates highest order first.
    pub fn coords(&self) -> &[CoordVector<T>] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<CoordVector<T>> {
        self.coords
    }

    /// The coordinate carrying derivative order `p`.
    pub fn coord(&self, p: usize) -> &CoordVector<T> {
        let n = self.order();
        assert!(p < n, "derivative order {p} out of range for order {n}");
        &self.coords[n - 1 - p]
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(CoordVector::is_zero)
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch {
                expected: self.order(),
                got: other.order(),
            });
        }
        Ok(())
    }

    /// `a * self + b * other`, coordinatewise.
    pub fn lin_comb(&self, a: T, other: &Self, b: T, budget: u64) -> Result<Self> {
        self.check_order(other)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(x, y)| x.lin_comb(a, y, b, budget))
            .collect::<Result<_>>()?;
        Ok(Self { coords })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.lin_comb(T::one(), other, T::one(), DEFAULT_ENTRY_BUDGET)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.lin_comb(T::one(), other, -T::one(), DEFAULT_ENTRY_BUDGET)
    }

    pub fn scale(&self, lambda: T) -> Self {
        Self {
            coords: self.coords.iter().map(|c| c.scale(lambda)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(-T::one())
    }

    pub fn quasinorm(&self) -> Result<T> {
        self.quasinorm_within(DEFAULT_ENTRY_BUDGET)
    }

    /// The recursive quasinorm: `||x_0||_2` plus the quasinorm of order `n - 1` of
    /// `(x_{n-1}, ..., x_1) - KP_{1,n-1} x_0`.
    pub fn quasinorm_within(&self, budget: u64) -> Result<T> {
        let mut cur = self.coords.clone();
        let mut total = T::zero();
        while cur.len() > 1 {
            let x0 = cur.pop().expect("non-empty");
            total = total + x0.l2_norm();
            if x0.is_zero() {
                continue;
            }
            let kp = kp_map(cur.len(), &x0);
            cur = cur
                .iter()
                .zip(&kp)
                .map(|(a, b)| a.sub_within(b, budget))
                .collect::<Result<_>>()?;
        }
        Ok(total + cur[0].l2_norm())
    }

    /// `iota_{k,n}`: pads `n - k` zero coordinates on the low-order side.
    pub fn embed(&self, n: usize) -> Result<Self> {
        let k = self.order();
        if k > n {
            return Err(Error::OrderMismatch {
                expected: n,
                got: k,
            });
        }
        let mut coords = self.coords.clone();
        coords.resize(n, CoordVector::zero());
        Ok(Self { coords })
    }

    /// `pi_{n,k}`: keeps the `k` lowest-order coordinates.
    pub fn project(&self, k: usize) -> Result<Self> {
        let n = self.order();
        if k > n || k == 0 {
            return Err(Error::OrderMismatch {
                expected: n,
                got: k,
            });
        }
        Ok(Self {
            coords: self.coords[n - k..].to_vec(),
        })
    }

    /// All indices carrying a nonzero entry in some coordinate.
    pub fn support(&self, budget: u64) -> Result<Vec<u64>> {
        let mut idx = Vec::new();
        for c in &self.coords {
            idx.extend(c.dense_entries(budget)?.into_iter().map(|(i, _)| i));
            if idx.len() as u64 > budget {
                return Err(Error::EntryBudgetExceeded {
                    needed: idx.len() as u64,
                    budget,
                });
            }
        }
        idx.sort_unstable();
        idx.dedup();
        Ok(idx)
    }

    /// Coordinates `1..=m` of every order, flattened as `t * m + (i - 1)`.
    pub fn truncate(&self, m: usize) -> Vec<T> {
        let mut out = vec![T::zero(); self.order() * m];
        for (t, c) in self.coords.iter().enumerate() {
            for (i, v) in c.entries_between(1, m as u64) {
                out[t * m + (i as usize - 1)] = v;
            }
        }
        out
    }

    /// Inverse of [`Self::truncate`].
    pub fn from_truncated(n: usize, m: usize, data: &[T]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidOrder { min: 1, got: 0 });
        }
        if data.len() != n * m {
            return Err(Error::InvalidVector(format!(
                "expected {} truncated entries, got {}",
                n * m,
                data.len()
            )));
        }
        let coords = data
            .chunks(m.max(1))
            .take(n)
            .map(|block| {
                CoordVector::from_entries(block.iter().enumerate().map(|(i, &v)| (i as u64 + 1, v)))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut coords = coords;
        coords.resize(n, CoordVector::zero());
        Ok(Self { coords })
    }
}

/// `(KP_{1,n-1} u, u)`; for `n = 1` just `(u)`.
pub fn graph_vector<T: Scalar>(n: usize, u: &CoordVector<T>) -> RochbergVector<T> {
    assert!(n >= 1, "order must be at least 1");
    let mut coords = kp_map(n - 1, u);
    coords.push(u.clone());
    RochbergVector { coords }
}

/// `D_n(x)(y) = sum_{i+j=n+1} (-1)^i <x_i, y_j>` in 1-based left-to-right labels.
pub fn duality_pairing<T: Scalar>(x: &RochbergVector<T>, y: &RochbergVector<T>) -> Result<T> {
    x.check_order(y)?;
    let n = x.order();
    let signed = |t: usize| {
        let term = x.coords[t].pair(&y.coords[n - 1 - t]);
        if t.is_multiple_of(2) {
            -term
        } else {
            term
        }
    };
    // Labels i and n + 1 - i are summed together so that the form vanishes exactly on the
    // diagonal for even n.
    let mut sum = T::zero();
    for t in 0..n.div_ceil(2) {
        let partner = n - 1 - t;
        sum = sum
            + if partner == t {
                signed(t)
            } else {
                signed(t) + signed(partner)
            };
    }
    Ok(sum)
}

/// `graph_vector(n, +-e_i)` for every index `i` in the support of `x`.
pub fn default_witnesses<T: Scalar>(
    x: &RochbergVector<T>,
    budget: u64,
) -> Result<Vec<RochbergVector<T>>> {
    let n = x.order();
    let mut out = Vec::new();
    for i in x.support(budget)? {
        let e = CoordVector::unit(i);
        out.push(graph_vector(n, &e.neg()));
        out.push(graph_vector(n, &e));
    }
    Ok(out)
}

/// `max_w |D_n(x)(w)| / ||w||` over the witnesses; a lower bound for the dual norm of `D_n x`.
/// Zero witnesses carry no information and are skipped.
pub fn omega_lower_bound<T: Scalar>(
    x: &RochbergVector<T>,
    witnesses: &[RochbergVector<T>],
) -> Result<T> {
    if witnesses.is_empty() {
        return Err(Error::EmptyWitnessSet);
    }
    let mut best = T::zero();
    for w in witnesses {
        let pairing = duality_pairing(x, w)?;
        let q = w.quasinorm()?;
        if q > T::zero() {
            best = best.max(pairing.abs() / q);
        }
    }
    Ok(best)
}

/// The Gram matrix `J` of `D_n` on the truncation to coordinates `1..=m`.
///
/// `J` is a signed permutation of the flattened index `t * m + c`, so it is stored as the column
/// of the single nonzero entry in each row and its sign; the inverse is the transpose.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairingGram {
    n: usize,
    m: usize,
    partner: Vec<usize>,
    sign: Vec<i8>,
    inv_partner: Vec<usize>,
}

impl PairingGram {
    pub fn new(n: usize, m: usize) -> Self {
        assert!(n >= 1 && m >= 1, "pairing Gram needs n, m >= 1");
        let dim = n * m;
        let mut partner = vec![0; dim];
        let mut sign = vec![0; dim];
        let mut inv_partner = vec![0; dim];
        for t in 0..n {
            for c in 0..m {
                let r = t * m + c;
                let col = (n - 1 - t) * m + c;
                partner[r] = col;
                sign[r] = if t % 2 == 0 { -1 } else { 1 };
                inv_partner[col] = r;
            }
        }
        Self {
            n,
            m,
            partner,
            sign,
            inv_partner,
        }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.n * self.m
    }

    pub fn truncation(&self) -> usize {
        self.m
    }

    fn signed<T: Scalar>(s: i8, v: T) -> T {
        if s < 0 {
            -v
        } else {
            v
        }
    }

    /// `J v`.
    pub fn apply<T: Scalar>(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.dim(), "dimension mismatch");
        (0..self.dim())
            .map(|r| Self::signed(self.sign[r], v[self.partner[r]]))
            .collect()
    }

    /// `J^{-1} v`.
    pub fn solve<T: Scalar>(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.dim(), "dimension mismatch");
        (0..self.dim())
            .map(|r| {
                let s = self.inv_partner[r];
                Self::signed(self.sign[s], v[s])
            })
            .collect()
    }

    /// `J M`.
    pub fn apply_left<T: Scalar>(&self, mat: &DenseMatrix<T>) -> DenseMatrix<T> {
        assert_eq!(mat.rows(), self.dim(), "dimension mismatch");
        let mut out = DenseMatrix::zeros(mat.rows(), mat.cols());
        for r in 0..self.dim() {
            for c in 0..mat.cols() {
                out[(r, c)] = Self::signed(self.sign[r], mat[(self.partner[r], c)]);
            }
        }
        out
    }

    /// `J^{-1} M`.
    pub fn solve_left<T: Scalar>(&self, mat: &DenseMatrix<T>) -> DenseMatrix<T> {
        assert_eq!(mat.rows(), self.dim(), "dimension mismatch");
        let mut out = DenseMatrix::zeros(mat.rows(), mat.cols());
        for r in 0..self.dim() {
            let s = self.inv_partner[r];
            for c in 0..mat.cols() {
                out[(r, c)] = Self::signed(self.sign[s], mat[(s, c)]);
            }
        }
        out
    }

    /// `M J`.
    pub fn apply_right<T: Scalar>(&self, mat: &DenseMatrix<T>) -> DenseMatrix<T> {
        assert_eq!(mat.cols(), self.dim(), "dimension mismatch");
        let mut out = DenseMatrix::zeros(mat.rows(), mat.cols());
        for c in 0..self.dim() {
            let s = self.inv_partner[c];
            for r in 0..mat.rows() {
                out[(r, c)] = Self::signed(self.sign[s], mat[(r, s)]);
            }
        }
        out
    }

    pub fn to_dense<T: Scalar>(&self) -> DenseMatrix<T> {
        let mut out = DenseMatrix::zeros(self.dim(), self.dim());
        for r in 0..self.dim() {
            out[(r, self.partner[r])] = Self::signed(self.sign[r], T::one());
        }
        out
    }

    pub fn inverse_dense<T: Scalar>(&self) -> DenseMatrix<T> {
        self.to_dense::<T>().transpose()
    }
}

/// Shared, lazily built Gram matrices keyed by `(n, m)`.
pub fn pairing_gram(n: usize, m: usize) -> Arc<PairingGram> {
    type Cache = Mutex<HashMap<(usize, usize), Arc<PairingGram>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
    guard
        .entry((n, m))
        .or_insert_with(|| Arc::new(PairingGram::new(n, m)))
        .clone()
}

impl<T: Scalar> fmt::Display for RochbergVector<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{order: {}, coords: [", self.order())?;
        for (k, c) in self.coords.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]}}")
    }
}

fn split_top_level(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' | '[' | '{' => depth += 1,
            ')' | ']' | '}' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    if start < s.len() {
        parts.push(&s[start..]);
    }
    parts
}

impl<T: Scalar> FromStr for RochbergVector<T> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let body = s
            .strip_prefix('{')
            .and_then(|b| b.strip_suffix('}'))
            .ok_or_else(|| Error::Parse(format!("expected {{order:..,coords:[..]}}, got `{s}`")))?;
        let fields = split_top_level(body);
        let [order, coords] = fields.as_slice() else {
            return Err(Error::Parse(format!("expected two fields, got `{body}`")));
        };
        let order: usize = order
            .strip_prefix("order:")
            .ok_or_else(|| Error::Parse(format!("expected order field, got `{order}`")))?
            .parse()
            .map_err(|_| Error::Parse(format!("bad order `{order}`")))?;
        let list = coords
            .strip_prefix("coords:[")
            .and_then(|c| c.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("expected coords:[..], got `{coords}`")))?;
        let coords = split_top_level(list)
            .into_iter()
            .map(str::parse)
            .collect::<Result<Vec<CoordVector<T>>>>()?;
        if coords.len() != order {
            return Err(Error::OrderMismatch {
                expected: order,
                got: coords.len(),
            });
        }
        Self::new(coords)
    }
}

#[derive(Serialize)]
struct WireRef<'a, C> {
    order: usize,
    coords: &'a [C],
}

#[derive(Deserialize)]
struct Wire<C> {
    order: usize,
    coords: Vec<C>,
}

impl<T: Scalar + Serialize> Serialize for RochbergVector<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        WireRef {
            order: self.order(),
            coords: &self.coords,
        }
        .serialize(s)
    }
}

impl<'de, T: Scalar + Deserialize<'de>> Deserialize<'de> for RochbergVector<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = Wire::<CoordVector<T>>::deserialize(d)?;
        if wire.coords.len() != wire.order {
            return Err(serde::de::Error::custom(Error::OrderMismatch {
                expected: wire.order,
                got: wire.coords.len(),
            }));
        }
        Self::new(wire.coords).map_err(serde::de::Error::custom)
    }
}
