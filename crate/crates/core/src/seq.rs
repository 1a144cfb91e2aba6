//! Finitely supported real sequences indexed from 1.
//!
//! A [`CoordVector`] is stored either densely as sorted `(index, value)` pairs or as a
//! flat block `value * (e_{offset+1} + ... + e_{offset+length})`. Flat blocks are closed
//! under scaling, under the Kalton-Peck maps and under sums with identically supported
//! blocks, so vectors of length `2^60` cost O(1) per operation.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Entry budget used when no explicit budget is passed.
pub const DEFAULT_ENTRY_BUDGET: u64 = 1 << 22;

/// Longest admissible flat block.
pub const MAX_FLAT_LENGTH: u64 = 1 << 62;

/// The parameters of a flat block `value * sum_{offset < i <= offset + length} e_i`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Flat<T> {
    pub length: u64,
    pub value: T,
    pub offset: u64,
}

impl<T> Flat<T> {
    pub fn first(&self) -> u64 {
        self.offset + 1
    }

    pub fn last(&self) -> u64 {
        self.offset + self.length
    }
}

#[derive(Clone, Debug)]
enum Repr<T> {
    /// Strictly index-sorted, no explicit zeros.
    Dense(Vec<(u64, T)>),
    /// Never zero-valued.
    Flat(Flat<T>),
}

/// A finitely supported real sequence.
#[derive(Clone, Debug)]
pub struct CoordVector<T> {
    repr: Repr<T>,
}

impl<T: Scalar> Default for CoordVector<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Scalar> CoordVector<T> {
    pub fn zero() -> Self {
        Self {
            repr: Repr::Dense(Vec::new()),
        }
    }

    /// The unit vector `e_index`.
    ///
    /// # Panics
    /// If `index == 0`; indices start at 1.
    pub fn unit(index: u64) -> Self {
        assert!(index >= 1, "indices start at 1");
        Self {
            repr: Repr::Dense(vec![(index, T::one())]),
        }
    }

    /// Builds a dense vector from arbitrary-order entries. Zeros are dropped; repeated
    /// indices, index 0 and non-finite values are rejected.
    pub fn from_entries<I>(entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u64, T)>,
    {
        let mut v: Vec<(u64, T)> = Vec::new();
        for (i, x) in entries {
            if i == 0 {
                return Err(Error::InvalidVector("index 0; indices start at 1".into()));
            }
            if !x.is_finite() {
                return Err(Error::InvalidVector(format!(
                    "non-finite value at index {i}"
                )));
            }
            v.push((i, x));
        }
        v.sort_by_key(|e| e.0);
        if let Some(w) = v.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidVector(format!("repeated index {}", w[0].0)));
        }
        v.retain(|e| e.1 != T::zero());
        Ok(Self {
            repr: Repr::Dense(v),
        })
    }

    /// `values[k]` becomes the coordinate at index `k + 1`.
    pub fn from_values(values: &[T]) -> Result<Self> {
        Self::from_entries(values.iter().enumerate().map(|(k, &x)| (k as u64 + 1, x)))
    }

    /// The flat block `value * sum_{offset < i <= offset + length} e_i`; a zero value
    /// yields the zero vector.
    pub fn flat(length: u64, value: T, offset: u64) -> Result<Self> {
        if length == 0 || length > MAX_FLAT_LENGTH {
            return Err(Error::InvalidVector(format!(
                "flat length {length} outside 1..=2^62"
            )));
        }
        if offset.checked_add(length).is_none() {
            return Err(Error::InvalidVector(
                "flat support overflows the index range".into(),
            ));
        }
        if !value.is_finite() {
            return Err(Error::InvalidVector("non-finite flat value".into()));
        }
        if value == T::zero() {
            return Ok(Self::zero());
        }
        Ok(Self {
            repr: Repr::Flat(Flat {
                length,
                value,
                offset,
            }),
        })
    }

    /// Unit-norm flat vector `N^{-1/2} (e_1 + ... + e_N)`.
    pub fn normalized_flat(length: u64) -> Result<Self> {
        Self::flat(length, T::from_count(length).sqrt().recip(), 0)
    }

    fn from_sorted_unchecked(mut entries: Vec<(u64, T)>) -> Self {
        entries.retain(|e| e.1 != T::zero());
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        Self {
            repr: Repr::Dense(entries),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(&self.repr, Repr::Dense(v) if v.is_empty())
    }

    pub fn is_flat(&self) -> bool {
        matches!(self.repr, Repr::Flat(_))
    }

    pub fn as_flat(&self) -> Option<Flat<T>> {
        match self.repr {
            Repr::Flat(f) => Some(f),
            Repr::Dense(_) => None,
        }
    }

    /// Number of non-zero coordinates.
    pub fn nnz(&self) -> u64 {
        match &self.repr {
            Repr::Dense(v) => v.len() as u64,
            Repr::Flat(f) => f.length,
        }
    }

    /// Smallest and largest index of the support.
    pub fn support_bounds(&self) -> Option<(u64, u64)> {
        match &self.repr {
            Repr::Dense(v) => Some((v.first()?.0, v.last()?.0)),
            Repr::Flat(f) => Some((f.first(), f.last())),
        }
    }

    pub fn get(&self, index: u64) -> T {
        match &self.repr {
            Repr::Dense(v) => v
                .binary_search_by_key(&index, |e| e.0)
                .map(|k| v[k].1)
                .unwrap_or_else(|_| T::zero()),
            Repr::Flat(f) if (f.first()..=f.last()).contains(&index) => f.value,
            Repr::Flat(_) => T::zero(),
        }
    }

    /// Non-zero entries in index order. A flat vector is enumerated lazily.
    pub fn entries(&self) -> Entries<'_, T> {
        self.entries_between(1, u64::MAX)
    }

    /// Non-zero entries with `lo <= index <= hi`.
    pub fn entries_between(&self, lo: u64, hi: u64) -> Entries<'_, T> {
        match &self.repr {
            Repr::Dense(v) => {
                let start = v.partition_point(|e| e.0 < lo);
                let end = v.partition_point(|e| e.0 <= hi);
                Entries::Dense(v[start..end.max(start)].iter())
            }
            Repr::Flat(f) => Entries::Flat {
                next: f.first().max(lo),
                last: f.last().min(hi),
                value: f.value,
            },
        }
    }

    /// Materializes the entries, failing if that would exceed `budget`.
    pub fn dense_entries(&self, budget: u64) -> Result<Vec<(u64, T)>> {
        match &self.repr {
            Repr::Dense(v) => Ok(v.clone()),
            Repr::Flat(f) if f.length > budget => Err(Error::EntryBudgetExceeded {
                needed: f.length,
                budget,
            }),
            Repr::Flat(_) => Ok(self.entries().collect()),
        }
    }

    /// Same vector in the dense representation.
    pub fn densify(&self, budget: u64) -> Result<Self> {
        Ok(Self::from_sorted_unchecked(self.dense_entries(budget)?))
    }

    pub fn l2_norm(&self) -> T {
        match &self.repr {
            Repr::Dense(v) => {
                let scale = self.max_abs();
                if scale == T::zero() {
                    return T::zero();
                }
                let sum = v.iter().fold(T::zero(), |acc, &(_, x)| {
                    let r = x / scale;
                    acc + r * r
                });
                scale * sum.sqrt()
            }
            Repr::Flat(f) => f.value.abs() * T::from_count(f.length).sqrt(),
        }
    }

    pub fn l1_norm(&self) -> T {
        self.sum_map(|x| x.abs())
    }

    pub fn max_abs(&self) -> T {
        match &self.repr {
            Repr::Dense(v) => v.iter().fold(T::zero(), |m, e| m.max(e.1.abs())),
            Repr::Flat(f) => f.value.abs(),
        }
    }

    /// `sum_i f(x_i)` over the non-zero coordinates.
    pub fn sum_map<F: Fn(T) -> T>(&self, f: F) -> T {
        match &self.repr {
            Repr::Dense(v) => v.iter().fold(T::zero(), |acc, e| acc + f(e.1)),
            Repr::Flat(fl) => T::from_count(fl.length) * f(fl.value),
        }
    }

    /// Applies `f` to every non-zero coordinate; coordinates mapped to zero are dropped.
    /// `f` must send finite values to finite values.
    pub fn map_nonzero<F: Fn(T) -> T>(&self, f: F) -> Self {
        match &self.repr {
            Repr::Dense(v) => {
                Self::from_sorted_unchecked(v.iter().map(|&(i, x)| (i, f(x))).collect())
            }
            Repr::Flat(fl) => {
                let value = f(fl.value);
                debug_assert!(value.is_finite());
                if value == T::zero() {
                    Self::zero()
                } else {
                    Self {
                        repr: Repr::Flat(Flat { value, ..*fl }),
                    }
                }
            }
        }
    }

    /// Bilinear pairing `sum_i x_i y_i`.
    pub fn pair(&self, other: &Self) -> T {
        match (&self.repr, &other.repr) {
            (Repr::Flat(a), Repr::Flat(b)) => {
                let lo = a.first().max(b.first());
                let hi = a.last().min(b.last());
                if lo > hi {
                    T::zero()
                } else {
                    T::from_count(hi - lo + 1) * a.value * b.value
                }
            }
            (Repr::Flat(a), Repr::Dense(_)) => {
                a.value
                    * other
                        .entries_between(a.first(), a.last())
                        .fold(T::zero(), |s, e| s + e.1)
            }
            (Repr::Dense(_), Repr::Flat(_)) => other.pair(self),
            (Repr::Dense(a), Repr::Dense(b)) => {
                let (mut i, mut j) = (0, 0);
                let mut sum = T::zero();
                while i < a.len() && j < b.len() {
                    match a[i].0.cmp(&b[j].0) {
                        Ordering::Less => i += 1,
                        Ordering::Greater => j += 1,
                        Ordering::Equal => {
                            sum = sum + a[i].1 * b[j].1;
                            i += 1;
                            j += 1;
                        }
                    }
                }
                sum
            }
        }
    }

    pub fn scale(&self, lambda: T) -> Self {
        if lambda == T::zero() {
            return Self::zero();
        }
        self.map_nonzero(|x| lambda * x)
    }

    pub fn neg(&self) -> Self {
        self.map_nonzero(|x| -x)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.lin_comb(T::one(), other, T::one(), DEFAULT_ENTRY_BUDGET)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.lin_comb(T::one(), other, -T::one(), DEFAULT_ENTRY_BUDGET)
    }

    pub fn add_within(&self, other: &Self, budget: u64) -> Result<Self> {
        self.lin_comb(T::one(), other, T::one(), budget)
    }

    pub fn sub_within(&self, other: &Self, budget: u64) -> Result<Self> {
        self.lin_comb(T::one(), other, -T::one(), budget)
    }

    /// `a * self + b * other`. Flat operands with identical support stay flat; any other
    /// mix involving a flat block densifies it, subject to `budget`.
    pub fn lin_comb(&self, a: T, other: &Self, b: T, budget: u64) -> Result<Self> {
        if other.is_zero() {
            return Ok(self.scale(a));
        }
        if self.is_zero() {
            return Ok(other.scale(b));
        }
        if let (Repr::Flat(x), Repr::Flat(y)) = (&self.repr, &other.repr) {
            if x.offset == y.offset && x.length == y.length {
                let value = a * x.value + b * y.value;
                return Self::flat(x.length, value, x.offset);
            }
        }
        let xs = self.dense_entries(budget)?;
        let ys = other.dense_entries(budget)?;
        let mut out = Vec::with_capacity(xs.len() + ys.len());
        let (mut i, mut j) = (0, 0);
        while i < xs.len() || j < ys.len() {
            let take = match (xs.get(i), ys.get(j)) {
                (Some(p), Some(q)) => p.0.cmp(&q.0),
                (Some(_), None) => Ordering::Less,
                _ => Ordering::Greater,
            };
            match take {
                Ordering::Less => {
                    out.push((xs[i].0, a * xs[i].1));
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((ys[j].0, b * ys[j].1));
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((xs[i].0, a * xs[i].1 + b * ys[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        Ok(Self::from_sorted_unchecked(out))
    }

    /// Coordinatewise product. Never densifies a flat block: the result is supported in
    /// the intersection of the supports.
    pub fn hadamard(&self, other: &Self) -> Self {
        match (&self.repr, &other.repr) {
            (Repr::Flat(a), Repr::Flat(b)) => {
                let lo = a.first().max(b.first());
                let hi = a.last().min(b.last());
                if lo > hi {
                    Self::zero()
                } else {
                    Self::flat(hi - lo + 1, a.value * b.value, lo - 1).unwrap_or_default()
                }
            }
            (Repr::Flat(a), Repr::Dense(_)) => Self::from_sorted_unchecked(
                other
                    .entries_between(a.first(), a.last())
                    .map(|(i, y)| (i, a.value * y))
                    .collect(),
            ),
            (Repr::Dense(_), Repr::Flat(_)) => other.hadamard(self),
            (Repr::Dense(a), Repr::Dense(b)) => {
                let mut out = Vec::new();
                let (mut i, mut j) = (0, 0);
                while i < a.len() && j < b.len() {
                    match a[i].0.cmp(&b[j].0) {
                        Ordering::Less => i += 1,
                        Ordering::Greater => j += 1,
                        Ordering::Equal => {
                            out.push((a[i].0, a[i].1 * b[j].1));
                            i += 1;
                            j += 1;
                        }
                    }
                }
                Self::from_sorted_unchecked(out)
            }
        }
    }
}

/// Iterator over the non-zero entries of a [`CoordVector`].
pub enum Entries<'a, T> {
    Dense(std::slice::Iter<'a, (u64, T)>),
    Flat { next: u64, last: u64, value: T },
}

impl<T: Copy> Iterator for Entries<'_, T> {
    type Item = (u64, T);

    fn next(&mut self) -> Option<(u64, T)> {
        match self {
            Entries::Dense(it) => it.next().copied(),
            Entries::Flat { next, last, value } => {
                if *next > *last {
                    return None;
                }
                let i = *next;
                *next += 1;
                Some((i, *value))
            }
        }
    }
}

impl<T: Scalar> PartialEq for CoordVector<T> {
    fn eq(&self, other: &Self) -> bool {
        match (&self.repr, &other.repr) {
            (Repr::Dense(a), Repr::Dense(b)) => a == b,
            (Repr::Flat(a), Repr::Flat(b)) => a == b,
            (Repr::Flat(f), Repr::Dense(d)) | (Repr::Dense(d), Repr::Flat(f)) => {
                d.len() as u64 == f.length
                    && d.first().map(|e| e.0) == Some(f.first())
                    && d.last().map(|e| e.0) == Some(f.last())
                    && d.iter().all(|e| e.1 == f.value)
            }
        }
    }
}

// Values are finite by construction.
impl<T: Scalar> Eq for CoordVector<T> {}

impl<T: Scalar> Hash for CoordVector<T> {
    fn hash<H: Hasher>(&self, state: &mut H) {
        // Only representation-independent features: support size, support bounds and the
        // first value.
        self.nnz().hash(state);
        self.support_bounds().hash(state);
        if let Some((_, x)) = self.entries().next() {
            x.integer_decode().hash(state);
        }
    }
}

impl<T: Scalar> fmt::Display for CoordVector<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Dense(v) => {
                write!(f, "dense:[")?;
                for (k, (i, x)) in v.iter().enumerate() {
                    if k > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "({i},{x})")?;
                }
                write!(f, "]")
            }
            Repr::Flat(fl) => write!(f, "flat:{{{},{},{}}}", fl.length, fl.value, fl.offset),
        }
    }
}

fn parse_num<N: FromStr>(s: &str, what: &str) -> Result<N> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad {what} `{}`", s.trim())))
}

impl<T: Scalar> FromStr for CoordVector<T> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if let Some(body) = s.strip_prefix("dense:") {
            let inner = body
                .strip_prefix('[')
                .and_then(|b| b.strip_suffix(']'))
                .ok_or_else(|| Error::Parse(format!("expected dense:[...], got `{s}`")))?;
            let mut entries = Vec::new();
            let mut rest = inner;
            while !rest.is_empty() {
                let open = rest
                    .strip_prefix('(')
                    .ok_or_else(|| Error::Parse(format!("expected `(` in `{rest}`")))?;
                let close = open
                    .find(')')
                    .ok_or_else(|| Error::Parse(format!("unclosed `(` in `{rest}`")))?;
                let (i, v) = open[..close].split_once(',').ok_or_else(|| {
                    Error::Parse(format!("expected (i,v), got `{}`", &open[..close]))
                })?;
                entries.push((parse_num(i, "index")?, parse_num(v, "value")?));
                rest = &open[close + 1..];
                rest = rest.strip_prefix(',').unwrap_or(rest);
            }
            Self::from_entries(entries)
        } else if let Some(body) = s.strip_prefix("flat:") {
            let inner = body
                .strip_prefix('{')
                .and_then(|b| b.strip_suffix('}'))
                .ok_or_else(|| Error::Parse(format!("expected flat:{{len,val,off}}, got `{s}`")))?;
            let parts: Vec<&str> = inner.split(',').collect();
            if parts.len() != 3 {
                return Err(Error::Parse(format!("flat needs 3 fields, got `{inner}`")));
            }
            Self::flat(
                parse_num(parts[0], "length")?,
                parse_num(parts[1], "value")?,
                parse_num(parts[2], "offset")?,
            )
        } else {
            Err(Error::Parse(format!("unknown vector form `{s}`")))
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum Wire<T> {
    Dense { entries: Vec<(u64, T)> },
    Flat { length: u64, value: T, offset: u64 },
}

impl<T: Scalar + Serialize> Serialize for CoordVector<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let wire = match &self.repr {
            Repr::Dense(v) => Wire::Dense { entries: v.clone() },
            Repr::Flat(f) => Wire::Flat {
                length: f.length,
                value: f.value,
                offset: f.offset,
            },
        };
        wire.serialize(s)
    }
}

impl<'de, T: Scalar + Deserialize<'de>> Deserialize<'de> for CoordVector<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let built = match Wire::<T>::deserialize(d)? {
            Wire::Dense { entries } => Self::from_entries(entries),
            Wire::Flat {
                length,
                value,
                offset,
            } => Self::flat(length, value, offset),
        };
        built.map_err(serde::de::Error::custom)
    }
}
