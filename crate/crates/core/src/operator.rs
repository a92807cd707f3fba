//! Matrices as linear operators. The solvers and metrics only ever need
//! `A·X` and `Aᵀ·X`, so anything that provides both can be decomposed.

use crate::dense::{Accumulation, DenseMatrix};
use crate::error::{Error, Result};
use crate::sparse::SparseMatrix;

pub trait LinearOperator: Sync {
    fn rows(&self) -> usize;
    fn cols(&self) -> usize;

    /// `A · X`.
    fn apply(&self, x: &DenseMatrix, acc: Accumulation) -> Result<DenseMatrix>;

    /// `Aᵀ · X`.
    fn apply_t(&self, x: &DenseMatrix, acc: Accumulation) -> Result<DenseMatrix>;

    /// Stored nonzeros, for flop estimates.
    fn nnz(&self) -> usize {
        self.rows() * self.cols()
    }

    /// Explicit dense form. Used by reference computations at small scale.
    fn to_dense(&self) -> DenseMatrix {
        let id = DenseMatrix::identity(self.cols());
        self.apply(&id, Accumulation::Ordered)
            .expect("identity has matching shape")
    }

    fn shape(&self) -> (usize, usize) {
        (self.rows(), self.cols())
    }
}

impl LinearOperator for SparseMatrix {
    fn rows(&self) -> usize {
        SparseMatrix::rows(self)
    }

    fn cols(&self) -> usize {
        SparseMatrix::cols(self)
    }

    // Row-parallel CSR products have a fixed per-row order, so the
    // accumulation mode changes nothing here.
    fn apply(&self, x: &DenseMatrix, _acc: Accumulation) -> Result<DenseMatrix> {
        self.spmm(x)
    }

    fn apply_t(&self, x: &DenseMatrix, _acc: Accumulation) -> Result<DenseMatrix> {
        self.t_spmm(x)
    }

    fn nnz(&self) -> usize {
        SparseMatrix::nnz(self)
    }

    fn to_dense(&self) -> DenseMatrix {
        SparseMatrix::to_dense(self)
    }
}

impl LinearOperator for DenseMatrix {
    fn rows(&self) -> usize {
        DenseMatrix::rows(self)
    }

    fn cols(&self) -> usize {
        DenseMatrix::cols(self)
    }

    fn apply(&self, x: &DenseMatrix, _acc: Accumulation) -> Result<DenseMatrix> {
        self.matmul(x)
    }

    fn apply_t(&self, x: &DenseMatrix, acc: Accumulation) -> Result<DenseMatrix> {
        self.t_matmul_with(x, acc)
    }

    fn to_dense(&self) -> DenseMatrix {
        self.clone()
    }
}

impl<T: LinearOperator + ?Sized> LinearOperator for &T {
    fn rows(&self) -> usize {
        (**self).rows()
    }
    fn cols(&self) -> usize {
        (**self).cols()
    }
    fn apply(&self, x: &DenseMatrix, acc: Accumulation) -> Result<DenseMatrix> {
        (**self).apply(x, acc)
    }
    fn apply_t(&self, x: &DenseMatrix, acc: Accumulation) -> Result<DenseMatrix> {
        (**self).apply_t(x, acc)
    }
    fn nnz(&self) -> usize {
        (**self).nnz()
    }
    fn to_dense(&self) -> DenseMatrix {
        (**self).to_dense()
    }
}

/// `Aᵀ` as a view.
#[derive(Debug, Clone, Copy)]
pub struct Transposed<T>(pub T);

impl<T: LinearOperator> LinearOperator for Transposed<T> {
    fn rows(&self) -> usize {
        self.0.cols()
    }
    fn cols(&self) -> usize {
        self.0.rows()
    }
    fn apply(&self, x: &DenseMatrix, acc: Accumulation) -> Result<DenseMatrix> {
        self.0.apply_t(x, acc)
    }
    fn apply_t(&self, x: &DenseMatrix, acc: Accumulation) -> Result<DenseMatrix> {
        self.0.apply(x, acc)
    }
    fn nnz(&self) -> usize {
        self.0.nnz()
    }
    fn to_dense(&self) -> DenseMatrix {
        self.0.to_dense().transpose()
    }
}

/// `A − U·diag(s)·Vᵀ`, applied without forming it.
pub struct Residual<'a, T> {
    pub a: T,
    pub u: &'a DenseMatrix,
    pub s: &'a [f64],
    pub v: &'a DenseMatrix,
}

impl<'a, T: LinearOperator> Residual<'a, T> {
    pub fn new(a: T, u: &'a DenseMatrix, s: &'a [f64], v: &'a DenseMatrix) -> Result<Self> {
        let k = s.len();
        if u.shape() != (a.rows(), k) || v.shape() != (a.cols(), k) {
            return Err(Error::Shape(format!(
                "factors {:?}, {k}, {:?} do not fit a {}x{} operator",
                u.shape(),
                v.shape(),
                a.rows(),
                a.cols()
            )));
        }
        Ok(Self { a, u, s, v })
    }
}

fn low_rank_apply(
    left: &DenseMatrix,
    s: &[f64],
    right: &DenseMatrix,
    x: &DenseMatrix,
    acc: Accumulation,
) -> Result<DenseMatrix> {
    let mut t = right.t_matmul_with(x, acc)?;
    for (i, &si) in s.iter().enumerate() {
        for j in 0..t.cols() {
            t[(i, j)] *= si;
        }
    }
    left.matmul(&t)
}

impl<T: LinearOperator> LinearOperator for Residual<'_, T> {
    fn rows(&self) -> usize {
        self.a.rows()
    }
    fn cols(&self) -> usize {
        self.a.cols()
    }
    fn apply(&self, x: &DenseMatrix, acc: Accumulation) -> Result<DenseMatrix> {
        let mut y = self.a.apply(x, acc)?;
        y.axpy(-1.0, &low_rank_apply(self.u, self.s, self.v, x, acc)?)?;
        Ok(y)
    }
    fn apply_t(&self, x: &DenseMatrix, acc: Accumulation) -> Result<DenseMatrix> {
        let mut y = self.a.apply_t(x, acc)?;
        y.axpy(-1.0, &low_rank_apply(self.v, self.s, self.u, x, acc)?)?;
        Ok(y)
    }
    fn nnz(&self) -> usize {
        self.a.nnz()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::gaussian_matrix;
    use crate::synth::random_sparse;

    #[test]
    fn sparse_and_dense_agree() {
        let a = random_sparse(25, 15, 0.3, 2);
        let d = a.to_dense();
        let x = gaussian_matrix(15, 3, 1);
        let y = gaussian_matrix(25, 3, 2);
        let acc = Accumulation::Ordered;
        assert!(a.apply(&x, acc).unwrap().max_abs_diff(&d.apply(&x, acc).unwrap()) < 1e-12);
        assert!(a.apply_t(&y, acc).unwrap().max_abs_diff(&d.apply_t(&y, acc).unwrap()) < 1e-12);
        assert_eq!(LinearOperator::to_dense(&a), d);
    }

    #[test]
    fn transposed_view() {
        let d = gaussian_matrix(6, 4, 3);
        let t = Transposed(&d);
        assert_eq!(t.shape(), (4, 6));
        assert!(t.to_dense().max_abs_diff(&d.transpose()) == 0.0);
        let x = gaussian_matrix(6, 2, 4);
        assert_eq!(t.apply(&x, Accumulation::Ordered).unwrap(), d.t_matmul(&x).unwrap());
    }

    #[test]
    fn residual_matches_dense() {
        let a = gaussian_matrix(9, 7, 5);
        let u = gaussian_matrix(9, 2, 6);
        let v = gaussian_matrix(7, 2, 7);
        let s = [2.0, 0.5];
        let r = Residual::new(&a, &u, &s, &v).unwrap();
        let mut want = a.clone();
        let mut us = u.clone();
        us.scale_cols(&s);
        want.axpy(-1.0, &us.matmul(&v.transpose()).unwrap()).unwrap();
        assert!(r.to_dense().max_abs_diff(&want) < 1e-12);
        let x = gaussian_matrix(9, 3, 8);
        let got = r.apply_t(&x, Accumulation::Ordered).unwrap();
        assert!(got.max_abs_diff(&want.t_matmul(&x).unwrap()) < 1e-12);
        assert!(Residual::new(&a, &v, &s, &u).is_err());
    }
}
