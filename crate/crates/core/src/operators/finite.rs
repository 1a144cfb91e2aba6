//! Dense truncations of operator matrices and the pairing adjoint.

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::rochberg::{pairing_gram, RochbergVector};
use crate::scalar::Scalar;

use super::matrix::OperatorMatrix;

/// An operator from order `in_order` truncated to coordinates `1..=in_m` into order `out_order`
/// read on `1..=out_m`. Vectors are flattened as in [`RochbergVector::truncate`].
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteOperator<T> {
    out_order: usize,
    out_m: usize,
    in_order: usize,
    in_m: usize,
    matrix: DenseMatrix<T>,
}

impl<T: Scalar> FiniteOperator<T> {
    pub fn new(
        out_order: usize,
        out_m: usize,
        in_order: usize,
        in_m: usize,
        matrix: DenseMatrix<T>,
    ) -> Result<Self> {
        if matrix.rows() != out_order * out_m {
            return Err(Error::OrderMismatch {
                expected: out_order * out_m,
                got: matrix.rows(),
            });
        }
        if matrix.cols() != in_order * in_m {
            return Err(Error::OrderMismatch {
                expected: in_order * in_m,
                got: matrix.cols(),
            });
        }
        Ok(Self {
            out_order,
            out_m,
            in_order,
            in_m,
            matrix,
        })
    }

    pub fn identity(n: usize, m: usize) -> Self {
        Self {
            out_order: n,
            out_m: m,
            in_order: n,
            in_m: m,
            matrix: DenseMatrix::identity(n * m),
        }
    }

    pub(crate) fn from_matrix(op: &OperatorMatrix<T>, in_m: usize, out_m: usize) -> Result<Self> {
        let (n_out, n_in) = (op.out_order(), op.in_order());
        let mut matrix = DenseMatrix::zeros(n_out * out_m, n_in * in_m);
        for (t, row) in op.rows().iter().enumerate() {
            for (s, atom) in row.iter().enumerate() {
                if atom.is_zero() {
                    continue;
                }
                let block = atom.to_dense(in_m, out_m)?;
                for r in 0..out_m {
                    for c in 0..in_m {
                        matrix[(t * out_m + r, s * in_m + c)] = block[(r, c)];
                    }
                }
            }
        }
        Self::new(n_out, out_m, n_in, in_m, matrix)
    }

    pub fn matrix(&self) -> &DenseMatrix<T> {
        &self.matrix
    }

    pub fn out_order(&self) -> usize {
        self.out_order
    }

    pub fn in_order(&self) -> usize {
        self.in_order
    }

    pub fn out_truncation(&self) -> usize {
        self.out_m
    }

    pub fn in_truncation(&self) -> usize {
        self.in_m
    }

    pub fn apply_vec(&self, x: &[T]) -> Vec<T> {
        self.matrix.mul_vec(x)
    }

    pub fn apply(&self, v: &RochbergVector<T>) -> Result<RochbergVector<T>> {
        if v.order() != self.in_order {
            return Err(Error::OrderMismatch {
                expected: self.in_order,
                got: v.order(),
            });
        }
        let out = self.apply_vec(&v.truncate(self.in_m));
        RochbergVector::from_truncated(self.out_order, self.out_m, &out)
    }

    /// `self * rhs`: apply `rhs` first.
    pub fn compose(&self, rhs: &Self) -> Result<Self> {
        if (rhs.out_order, rhs.out_m) != (self.in_order, self.in_m) {
            return Err(Error::OrderMismatch {
                expected: self.in_order * self.in_m,
                got: rhs.out_order * rhs.out_m,
            });
        }
        Self::new(
            self.out_order,
            self.out_m,
            rhs.in_order,
            rhs.in_m,
            self.matrix.matmul(&rhs.matrix),
        )
    }

    /// `T^+` with `D(T^+ x)(y) = D(x)(T y)`.
    ///
    /// Equals `J_in^{-T} T^T J_out^T`; for a square operator the two transposed Grams carry the
    /// same sign and this is `J^{-1} T^T J`.
    pub fn adjoint_plus(&self) -> Self {
        let j_in = pairing_gram(self.in_order, self.in_m);
        let j_out = pairing_gram(self.out_order, self.out_m);
        let mut matrix = j_in.solve_left(&j_out.apply_right(&self.matrix.transpose()));
        if (self.in_order + self.out_order) % 2 == 1 {
            for r in 0..matrix.rows() {
                for c in 0..matrix.cols() {
                    matrix[(r, c)] = -matrix[(r, c)];
                }
            }
        }
        Self {
            out_order: self.in_order,
            out_m: self.in_m,
            in_order: self.out_order,
            in_m: self.out_m,
            matrix,
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.matrix.max_abs_diff(&other.matrix)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::atom::OperatorAtom;
    use crate::rochberg::duality_pairing;
    use crate::seq::CoordVector;

    fn v(xs: &[f64]) -> CoordVector<f64> {
        CoordVector::from_values(xs).unwrap()
    }

    #[test]
    fn agrees_with_operator_matrix() {
        let op = OperatorMatrix::<f64>::shift(3)
            .add(&OperatorMatrix::diagonal(
                3,
                OperatorAtom::Multiplier(v(&[1.0, -2.0, 0.5])),
            ))
            .unwrap();
        let fin = op.to_finite(3, 3).unwrap();
        let x = RochbergVector::new(vec![v(&[1.0, 2.0]), v(&[0.0, 3.0, 1.0]), v(&[4.0])]).unwrap();
        assert_eq!(fin.apply(&x).unwrap(), op.apply(&x).unwrap());
    }

    #[test]
    fn adjoint_examples() {
        for n in 1..=4 {
            let id = FiniteOperator::<f64>::identity(n, 3);
            assert_eq!(id.adjoint_plus(), id);
        }
        let t = OperatorMatrix::<f64>::shift(2)
            .add(&OperatorMatrix::diagonal(
                2,
                OperatorAtom::Multiplier(v(&[2.0, 3.0])),
            ))
            .unwrap()
            .to_finite(2, 2)
            .unwrap();
        assert_eq!(t.adjoint_plus().adjoint_plus(), t);
        let x = RochbergVector::new(vec![v(&[1.0, 2.0]), v(&[-1.0, 0.5])]).unwrap();
        let y = RochbergVector::new(vec![v(&[0.3, 2.0]), v(&[4.0, -1.0])]).unwrap();
        let lhs = duality_pairing(&t.adjoint_plus().apply(&x).unwrap(), &y).unwrap();
        let rhs = duality_pairing(&x, &t.apply(&y).unwrap()).unwrap();
        assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn rectangular_adjoint_satisfies_pairing_identity() {
        let iota = OperatorMatrix::<f64>::iota(2, 3)
            .unwrap()
            .to_finite(2, 2)
            .unwrap();
        let x = RochbergVector::new(vec![v(&[1.0, 2.0]), v(&[-1.0]), v(&[0.0, 5.0])]).unwrap();
        let y = RochbergVector::new(vec![v(&[0.5, 2.0]), v(&[3.0, -1.0])]).unwrap();
        let lhs = duality_pairing(&iota.adjoint_plus().apply(&x).unwrap(), &y).unwrap();
        let rhs = duality_pairing(&x, &iota.apply(&y).unwrap()).unwrap();
        assert!((lhs - rhs).abs() < 1e-12);
    }
}
