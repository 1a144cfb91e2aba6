//! Text expressions for operator matrices.
//!
//! ```text
//! expr   := term ('+' term)*
//! term   := factor ('*' factor)*
//! factor := number '·' factor | '(' expr ')' | atom
//! atom   := 'id' | 'zero' | 'mult[' d1,d2,... ']' | 'perm[' s1,s2,... ']'
//!         | 'block[len:' L ',count:' C ']' | 'iota(' k ',' n ')' | 'pi(' n ',' k ')'
//!         | 'shift(' n ')' ['^' k]
//! ```
//!
//! `id`, `zero`, `mult` and `perm` act diagonally at the order the expression is evaluated at;
//! `block` is the block operator of `C` consecutive normalized flat blocks of length `L`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::seq::CoordVector;

use super::atom::{OperatorAtom, Permutation};
use super::matrix::OperatorMatrix;

#[derive(Clone, Debug, PartialEq)]
pub enum OperatorExpr<T> {
    Id,
    Zero,
    Mult(Vec<T>),
    Perm(Vec<u64>),
    Block { len: u64, count: u64 },
    Iota { k: usize, n: usize },
    Pi { n: usize, k: usize },
    Shift { n: usize, power: usize },
    Product(Vec<OperatorExpr<T>>),
    Sum(Vec<OperatorExpr<T>>),
    Scaled(T, Box<OperatorExpr<T>>),
}

/// `count` consecutive normalized flat blocks of length `len`, starting at index 1.
pub fn flat_blocks<T: Scalar>(len: u64, count: u64) -> Result<Vec<CoordVector<T>>> {
    let unit = CoordVector::<T>::normalized_flat(len)?;
    let value = unit.as_flat().expect("flat").value;
    (0..count)
        .map(|b| CoordVector::flat(len, value, b * len))
        .collect()
}

impl<T: Scalar> OperatorExpr<T> {
    /// Evaluates at order `n`.
    pub fn to_matrix(&self, n: usize) -> Result<OperatorMatrix<T>> {
        if n == 0 {
            return Err(Error::InvalidOrder { min: 1, got: 0 });
        }
        match self {
            Self::Id => Ok(OperatorMatrix::identity(n)),
            Self::Zero => Ok(OperatorMatrix::zero(n, n)),
            Self::Mult(d) => Ok(OperatorMatrix::diagonal(
                n,
                OperatorAtom::Multiplier(CoordVector::from_values(d)?),
            )),
            Self::Perm(images) => Ok(OperatorMatrix::diagonal(
                n,
                OperatorAtom::Permutation(Permutation::new(images.clone())?),
            )),
            Self::Block { len, count } => {
                OperatorMatrix::block_operator(n, &flat_blocks(*len, *count)?)
            }
            Self::Iota { k, n } => OperatorMatrix::iota(*k, *n),
            Self::Pi { n, k } => OperatorMatrix::pi(*n, *k),
            Self::Shift { n, power } => Ok(OperatorMatrix::shift_power(*n, *power)),
            Self::Product(factors) => {
                let mut iter = factors.iter().rev();
                let mut acc = iter.next().expect("non-empty product").to_matrix(n)?;
                for f in iter {
                    acc = f.to_matrix(n)?.compose(&acc)?;
                }
                Ok(acc)
            }
            Self::Sum(terms) => {
                let mut iter = terms.iter();
                let mut acc = iter.next().expect("non-empty sum").to_matrix(n)?;
                for t in iter {
                    acc = acc.add(&t.to_matrix(n)?)?;
                }
                Ok(acc)
            }
            Self::Scaled(lambda, inner) => Ok(inner.to_matrix(n)?.scale(*lambda)),
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn error<R>(&self, what: &str) -> Result<R> {
        Err(Error::Parse(format!(
            "{what} at offset {} in `{}`",
            self.pos, self.src
        )))
    }

    fn eat(&mut self, token: &str) -> bool {
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        if self.eat(token) {
            Ok(())
        } else {
            self.error(&format!("expected `{token}`"))
        }
    }

    fn take_while<F: Fn(char) -> bool>(&mut self, f: F) -> &'a str {
        let rest = self.rest();
        let end = rest.find(|c| !f(c)).unwrap_or(rest.len());
        self.pos += end;
        &rest[..end]
    }

    fn number<N: FromStr>(&mut self) -> Result<N> {
        let start = self.pos;
        let rest = self.rest();
        let mut end = 0;
        let mut prev = ' ';
        for c in rest.chars() {
            let sign_ok = (c == '-' || c == '+') && (end == 0 || prev == 'e' || prev == 'E');
            if !(c.is_ascii_digit() || c == '.' || c == 'e' || c == 'E' || sign_ok) {
                break;
            }
            end += c.len_utf8();
            prev = c;
        }
        self.pos += end;
        let text = &rest[..end];
        text.parse().or_else(|_| {
            self.pos = start;
            self.error("expected a number")
        })
    }

    fn list<N: FromStr>(&mut self) -> Result<Vec<N>> {
        self.expect("[")?;
        let mut out = Vec::new();
        if self.eat("]") {
            return Ok(out);
        }
        loop {
            out.push(self.number()?);
            if self.eat("]") {
                return Ok(out);
            }
            self.expect(",")?;
        }
    }

    fn expr<T: Scalar>(&mut self) -> Result<OperatorExpr<T>> {
        let mut terms = vec![self.term()?];
        while self.eat("+") {
            terms.push(self.term()?);
        }
        Ok(if terms.len() == 1 {
            terms.pop().expect("one term")
        } else {
            OperatorExpr::Sum(terms)
        })
    }

    fn term<T: Scalar>(&mut self) -> Result<OperatorExpr<T>> {
        let mut factors = vec![self.factor()?];
        while self.eat("*") {
            factors.push(self.factor()?);
        }
        Ok(if factors.len() == 1 {
            factors.pop().expect("one factor")
        } else {
            OperatorExpr::Product(factors)
        })
    }

    fn factor<T: Scalar>(&mut self) -> Result<OperatorExpr<T>> {
        if self.eat("(") {
            let inner = self.expr()?;
            self.expect(")")?;
            return Ok(inner);
        }
        if self
            .rest()
            .starts_with(|c: char| c.is_ascii_digit() || c == '-' || c == '.')
        {
            let lambda: T = self.number()?;
            self.expect("·")?;
            return Ok(OperatorExpr::Scaled(lambda, Box::new(self.factor()?)));
        }
        let start = self.pos;
        let word = self.take_while(|c| c.is_ascii_alphabetic());
        match word {
            "id" => Ok(OperatorExpr::Id),
            "zero" => Ok(OperatorExpr::Zero),
            "mult" => Ok(OperatorExpr::Mult(self.list()?)),
            "perm" => Ok(OperatorExpr::Perm(self.list()?)),
            "block" => {
                self.expect("[len:")?;
                let len = self.number()?;
                self.expect(",count:")?;
                let count = self.number()?;
                self.expect("]")?;
                Ok(OperatorExpr::Block { len, count })
            }
            "iota" | "pi" => {
                self.expect("(")?;
                let a = self.number()?;
                self.expect(",")?;
                let b = self.number()?;
                self.expect(")")?;
                Ok(if word == "iota" {
                    OperatorExpr::Iota { k: a, n: b }
                } else {
                    OperatorExpr::Pi { n: a, k: b }
                })
            }
            "shift" => {
                self.expect("(")?;
                let n = self.number()?;
                self.expect(")")?;
                let power = if self.eat("^") { self.number()? } else { 1 };
                Ok(OperatorExpr::Shift { n, power })
            }
            _ => {
                self.pos = start;
                self.error("unknown operator")
            }
        }
    }
}

impl<T: Scalar> FromStr for OperatorExpr<T> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut p = Parser {
            src: &compact,
            pos: 0,
        };
        let e = p.expr()?;
        if p.pos != compact.len() {
            return p.error("trailing input");
        }
        Ok(e)
    }
}

fn write_list<N: fmt::Display>(f: &mut fmt::Formatter<'_>, xs: &[N]) -> fmt::Result {
    write!(f, "[")?;
    for (k, x) in xs.iter().enumerate() {
        if k > 0 {
            write!(f, ",")?;
        }
        write!(f, "{x}")?;
    }
    write!(f, "]")
}

impl<T: Scalar> fmt::Display for OperatorExpr<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Id => write!(f, "id"),
            Self::Zero => write!(f, "zero"),
            Self::Mult(d) => {
                write!(f, "mult")?;
                write_list(f, d)
            }
            Self::Perm(p) => {
                write!(f, "perm")?;
                write_list(f, p)
            }
            Self::Block { len, count } => write!(f, "block[len:{len},count:{count}]"),
            Self::Iota { k, n } => write!(f, "iota({k},{n})"),
            Self::Pi { n, k } => write!(f, "pi({n},{k})"),
            Self::Shift { n, power } => write!(f, "shift({n})^{power}"),
            Self::Product(fs) => {
                for (k, x) in fs.iter().enumerate() {
                    if k > 0 {
                        write!(f, "*")?;
                    }
                    match x {
                        Self::Sum(_) => write!(f, "({x})")?,
                        _ => write!(f, "{x}")?,
                    }
                }
                Ok(())
            }
            Self::Sum(ts) => {
                for (k, x) in ts.iter().enumerate() {
                    if k > 0 {
                        write!(f, "+")?;
                    }
                    write!(f, "{x}")?;
                }
                Ok(())
            }
            Self::Scaled(l, inner) => match **inner {
                Self::Sum(_) | Self::Product(_) => write!(f, "{l}·({inner})"),
                _ => write!(f, "{l}·{inner}"),
            },
        }
    }
}
