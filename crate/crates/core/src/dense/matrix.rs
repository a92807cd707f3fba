use std::fmt;
use std::ops::{Index, IndexMut};

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Row-block height used to split dense products across threads. Fixed so
/// that the per-entry summation order never depends on the thread count.
pub(crate) const ROW_BLOCK: usize = 4096;

/// How partial sums over row blocks are combined in `Aᵀ·B` products.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Accumulation {
    /// Partial products are summed in block order: results are bitwise
    /// identical for every thread count.
    #[default]
    Ordered,
    /// Partial products are combined by a parallel tree reduction whose
    /// shape follows the work-stealing schedule.
    Unordered,
}

/// Dense column-major matrix of finite `f64` values.
#[derive(Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DenseMatrix {}x{}", self.rows, self.cols)?;
        if self.rows * self.cols <= 64 {
            for i in 0..self.rows {
                write!(f, "\n  [")?;
                for j in 0..self.cols {
                    write!(f, " {:>12.6e}", self[(i, j)])?;
                }
                write!(f, " ]")?;
            }
        }
        Ok(())
    }
}

impl DenseMatrix {
    /// Wraps column-major `data`, rejecting wrong lengths and non-finite entries.
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{rows}x{cols} matrix needs {} values, got {}",
                rows * cols,
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                row: pos % rows.max(1),
                col: pos / rows.max(1),
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds from row-major data, which is how small literals read in tests.
    pub fn from_row_major(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{rows}x{cols} matrix needs {} values, got {}",
                rows * cols,
                data.len()
            )));
        }
        Self::new(rows, cols, Self::from_fn(rows, cols, |i, j| data[i * cols + j]).data)
    }

    pub(crate) fn from_vec_unchecked(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for j in 0..cols {
            for i in 0..rows {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Diagonal `rows x cols` matrix with `diag` on the leading diagonal.
    pub fn from_diag(rows: usize, cols: usize, diag: &[f64]) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (i, &d) in diag.iter().enumerate().take(rows.min(cols)) {
            m[(i, i)] = d;
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub(crate) fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    #[inline]
    pub fn col(&self, j: usize) -> &[f64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    #[inline]
    pub fn col_mut(&mut self, j: usize) -> &mut [f64] {
        let r = self.rows;
        &mut self.data[j * r..(j + 1) * r]
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        (0..self.cols).map(|j| self[(i, j)]).collect()
    }

    /// Copy of the leading `count` columns.
    pub fn leading_cols(&self, count: usize) -> DenseMatrix {
        assert!(count <= self.cols, "leading_cols: {count} > {}", self.cols);
        Self {
            rows: self.rows,
            cols: count,
            data: self.data[..count * self.rows].to_vec(),
        }
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut out = Self::zeros(self.cols, self.rows);
        for j in 0..self.cols {
            let col = self.col(j);
            for (i, &v) in col.iter().enumerate() {
                out.data[i * self.cols + j] = v;
            }
        }
        out
    }

    /// Row-major copy of the entries.
    pub(crate) fn to_row_major(&self) -> Vec<f64> {
        self.transpose().data
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Largest absolute entrywise difference. Panics on shape mismatch.
    pub fn max_abs_diff(&self, other: &DenseMatrix) -> f64 {
        assert_eq!(self.shape(), other.shape());
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()))
    }

    pub fn scale(&mut self, factor: f64) {
        self.data.iter_mut().for_each(|v| *v *= factor);
    }

    /// `self += factor * other`.
    pub fn axpy(&mut self, factor: f64, other: &DenseMatrix) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::Shape(format!(
                "axpy of {:?} into {:?}",
                other.shape(),
                self.shape()
            )));
        }
        self.data
            .par_iter_mut()
            .with_min_len(ROW_BLOCK)
            .zip(other.data.par_iter())
            .for_each(|(a, b)| *a += factor * b);
        Ok(())
    }

    pub fn scale_cols(&mut self, factors: &[f64]) {
        assert_eq!(factors.len(), self.cols);
        for (j, &f) in factors.iter().enumerate() {
            self.col_mut(j).iter_mut().for_each(|v| *v *= f);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let r = self.rows;
        let (lo, hi) = (a.min(b), a.max(b));
        let (left, right) = self.data.split_at_mut(hi * r);
        left[lo * r..(lo + 1) * r].swap_with_slice(&mut right[..r]);
    }

    /// Reverses column order in place (`fliplr`).
    pub fn flip_cols(&mut self) {
        let n = self.cols;
        for j in 0..n / 2 {
            self.swap_cols(j, n - 1 - j);
        }
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub(crate) fn check_finite(&self) -> Result<()> {
        match self.data.iter().position(|v| !v.is_finite()) {
            None => Ok(()),
            Some(pos) => Err(Error::NonFinite {
                row: pos % self.rows.max(1),
                col: pos / self.rows.max(1),
            }),
        }
    }

    /// `self · other`, parallel over fixed row blocks of the output.
    pub fn matmul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "matmul {:?} x {:?}",
                self.shape(),
                other.shape()
            )));
        }
        let (m, k, n) = (self.rows, self.cols, other.cols);
        let mut out = DenseMatrix::zeros(m, n);
        if m == 0 || n == 0 || k == 0 {
            return Ok(out);
        }
        if m <= ROW_BLOCK {
            gemm(
                m,
                k,
                n,
                Operand::col_major(&self.data, m),
                Operand::col_major(&other.data, k),
                &mut out.data,
                m,
            );
            return Ok(out);
        }
        let blocks: Vec<(usize, Vec<f64>)> = (0..m.div_ceil(ROW_BLOCK))
            .into_par_iter()
            .map(|b| {
                let r0 = b * ROW_BLOCK;
                let h = ROW_BLOCK.min(m - r0);
                let mut buf = vec![0.0; h * n];
                gemm(
                    h,
                    k,
                    n,
                    Operand::col_major(&self.data[r0..], m),
                    Operand::col_major(&other.data, k),
                    &mut buf,
                    h,
                );
                (r0, buf)
            })
            .collect();
        for (r0, buf) in blocks {
            let h = buf.len() / n;
            for j in 0..n {
                out.data[j * m + r0..j * m + r0 + h].copy_from_slice(&buf[j * h..(j + 1) * h]);
            }
        }
        Ok(out)
    }

    /// `selfᵀ · other` with the default ordered accumulation.
    pub fn t_matmul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        self.t_matmul_with(other, Accumulation::Ordered)
    }

    /// `selfᵀ · other`. The shared row dimension is cut into fixed blocks whose
    /// partial products are computed in parallel and then combined according
    /// to `acc`.
    pub fn t_matmul_with(&self, other: &DenseMatrix, acc: Accumulation) -> Result<DenseMatrix> {
        if self.rows != other.rows {
            return Err(Error::Shape(format!(
                "t_matmul {:?}ᵀ x {:?}",
                self.shape(),
                other.shape()
            )));
        }
        let (r, m, n) = (self.rows, self.cols, other.cols);
        let mut out = DenseMatrix::zeros(m, n);
        if m == 0 || n == 0 || r == 0 {
            return Ok(out);
        }
        let partial = |b: usize| -> Vec<f64> {
            let r0 = b * ROW_BLOCK;
            let h = ROW_BLOCK.min(r - r0);
            let mut buf = vec![0.0; m * n];
            gemm(
                m,
                h,
                n,
                Operand::row_major(&self.data[r0..], r),
                Operand::col_major(&other.data[r0..], r),
                &mut buf,
                m,
            );
            buf
        };
        let nblocks = r.div_ceil(ROW_BLOCK);
        if nblocks == 1 {
            out.data = partial(0);
            return Ok(out);
        }
        out.data = match acc {
            Accumulation::Ordered => {
                let parts: Vec<Vec<f64>> = (0..nblocks).into_par_iter().map(partial).collect();
                let mut sum = vec![0.0; m * n];
                for p in parts {
                    sum.iter_mut().zip(&p).for_each(|(s, v)| *s += v);
                }
                sum
            }
            Accumulation::Unordered => (0..nblocks)
                .into_par_iter()
                .map(partial)
                .reduce(
                    || vec![0.0; m * n],
                    |mut a, b| {
                        a.iter_mut().zip(&b).for_each(|(s, v)| *s += v);
                        a
                    },
                ),
        };
        Ok(out)
    }

    /// `selfᵀ · self`, symmetrized exactly.
    pub fn gram_with(&self, acc: Accumulation) -> DenseMatrix {
        let mut g = self
            .t_matmul_with(self, acc)
            .expect("gram shapes always conform");
        let n = g.cols;
        for j in 0..n {
            for i in j + 1..n {
                let v = 0.5 * (g[(i, j)] + g[(j, i)]);
                g[(i, j)] = v;
                g[(j, i)] = v;
            }
        }
        g
    }

    pub fn gram(&self) -> DenseMatrix {
        self.gram_with(Accumulation::Ordered)
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = f64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[j * self.rows + i]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[j * self.rows + i]
    }
}

/// Strided view into a slice, as consumed by `matrixmultiply`.
#[derive(Clone, Copy)]
struct Operand<'a> {
    data: &'a [f64],
    row_stride: usize,
    col_stride: usize,
}

impl<'a> Operand<'a> {
    /// Column-major storage with leading dimension `ld`.
    fn col_major(data: &'a [f64], ld: usize) -> Self {
        Self {
            data,
            row_stride: 1,
            col_stride: ld,
        }
    }

    /// Transposed view of column-major storage with leading dimension `ld`.
    fn row_major(data: &'a [f64], ld: usize) -> Self {
        Self {
            data,
            row_stride: ld,
            col_stride: 1,
        }
    }

    fn max_offset(&self, rows: usize, cols: usize) -> usize {
        (rows - 1) * self.row_stride + (cols - 1) * self.col_stride
    }
}

/// `c = a · b` for an `m x k` by `k x n` product, `c` column-major with
/// leading dimension `ldc`.
fn gemm(m: usize, k: usize, n: usize, a: Operand, b: Operand, c: &mut [f64], ldc: usize) {
    assert!(m > 0 && k > 0 && n > 0);
    assert!(a.max_offset(m, k) < a.data.len());
    assert!(b.max_offset(k, n) < b.data.len());
    assert!((m - 1) + (n - 1) * ldc < c.len());
    // SAFETY: every index touched by dgemm was bounds-checked above, and `c`
    // is exclusively borrowed.
    unsafe {
        matrixmultiply::dgemm(
            m,
            k,
            n,
            1.0,
            a.data.as_ptr(),
            a.row_stride as isize,
            a.col_stride as isize,
            b.data.as_ptr(),
            b.row_stride as isize,
            b.col_stride as isize,
            0.0,
            c.as_mut_ptr(),
            1,
            ldc as isize,
        );
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_matmul(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
        DenseMatrix::from_fn(a.rows(), b.cols(), |i, j| {
            (0..a.cols()).map(|t| a[(i, t)] * b[(t, j)]).sum()
        })
    }

    fn filler(rows: usize, cols: usize, salt: f64) -> DenseMatrix {
        DenseMatrix::from_fn(rows, cols, |i, j| {
            ((i * 31 + j * 17) as f64 * 0.37 + salt).sin()
        })
    }

    #[test]
    fn rejects_non_finite() {
        assert!(matches!(
            DenseMatrix::new(2, 1, vec![1.0, f64::NAN]),
            Err(Error::NonFinite { row: 1, col: 0 })
        ));
        assert!(DenseMatrix::new(2, 2, vec![1.0; 3]).is_err());
    }

    #[test]
    fn row_major_literal() {
        let m = DenseMatrix::from_row_major(2, 3, &[1., 2., 3., 4., 5., 6.]).unwrap();
        assert_eq!(m[(0, 2)], 3.0);
        assert_eq!(m[(1, 0)], 4.0);
        assert_eq!(m.col(1), &[2.0, 5.0]);
    }

    #[test]
    fn matmul_matches_naive_across_blocks() {
        for &m in &[3, ROW_BLOCK + 17] {
            let a = filler(m, 7, 0.1);
            let b = filler(7, 5, 0.7);
            let fast = a.matmul(&b).unwrap();
            assert!(fast.max_abs_diff(&naive_matmul(&a, &b)) < 1e-12);
        }
    }

    #[test]
    fn t_matmul_matches_naive_both_modes() {
        let a = filler(2 * ROW_BLOCK + 5, 6, 0.3);
        let b = filler(2 * ROW_BLOCK + 5, 4, 1.3);
        let expect = naive_matmul(&a.transpose(), &b);
        for acc in [Accumulation::Ordered, Accumulation::Unordered] {
            let got = a.t_matmul_with(&b, acc).unwrap();
            assert!(got.max_abs_diff(&expect) < 1e-9 * expect.max_abs());
        }
    }

    #[test]
    fn gram_is_exactly_symmetric() {
        let g = filler(50, 9, 2.0).gram();
        for i in 0..9 {
            for j in 0..9 {
                assert_eq!(g[(i, j)], g[(j, i)]);
            }
        }
    }

    #[test]
    fn flip_and_swap() {
        let mut m = DenseMatrix::from_row_major(1, 4, &[1., 2., 3., 4.]).unwrap();
        m.flip_cols();
        assert_eq!(m.data(), &[4., 3., 2., 1.]);
        m.swap_cols(0, 3);
        assert_eq!(m.data(), &[1., 3., 2., 4.]);
    }

    #[test]
    fn shape_errors() {
        let a = DenseMatrix::zeros(2, 3);
        assert!(matches!(a.matmul(&a), Err(Error::Shape(_))));
        assert!(matches!(
            a.t_matmul(&DenseMatrix::zeros(3, 1)),
            Err(Error::Shape(_))
        ));
    }
}
