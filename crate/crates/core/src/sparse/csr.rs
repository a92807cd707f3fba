use std::sync::{Arc, OnceLock};

use rayon::prelude::*;

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};

/// Immutable compressed-sparse-row matrix.
///
/// Rows are sorted by column with no duplicates and no stored zeros. The
/// transpose is cached on first use (or eagerly via [`with_transpose`]) so
/// that `Aᵀ·X` runs as a row-parallel product too.
///
/// [`with_transpose`]: SparseMatrix::with_transpose
#[derive(Clone)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    row_offsets: Vec<usize>,
    col_indices: Vec<usize>,
    values: Vec<f64>,
    transpose: OnceLock<Arc<SparseMatrix>>,
}

impl std::fmt::Debug for SparseMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "SparseMatrix {}x{} nnz={}",
            self.rows,
            self.cols,
            self.values.len()
        )
    }
}

impl PartialEq for SparseMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.row_offsets == other.row_offsets
            && self.col_indices == other.col_indices
            && self.values.len() == other.values.len()
            && self
                .values
                .iter()
                .zip(&other.values)
                .all(|(a, b)| a.to_bits() == b.to_bits())
    }
}

impl SparseMatrix {
    /// Validates raw CSR arrays against every structural invariant.
    pub fn from_csr(
        rows: usize,
        cols: usize,
        row_offsets: Vec<usize>,
        col_indices: Vec<usize>,
        values: Vec<f64>,
    ) -> Result<Self> {
        if row_offsets.len() != rows + 1 {
            return Err(Error::Shape(format!(
                "row_offsets has {} entries for {rows} rows",
                row_offsets.len()
            )));
        }
        let nnz = values.len();
        if col_indices.len() != nnz || row_offsets[0] != 0 || row_offsets[rows] != nnz {
            return Err(Error::Shape("CSR arrays disagree on nnz".into()));
        }
        for r in 0..rows {
            let (lo, hi) = (row_offsets[r], row_offsets[r + 1]);
            if lo > hi {
                return Err(Error::Shape(format!("row_offsets decrease at row {r}")));
            }
            let idx = &col_indices[lo..hi];
            if idx.iter().any(|&c| c >= cols) {
                return Err(Error::Shape(format!("column index out of range in row {r}")));
            }
            if idx.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Shape(format!("row {r} columns not strictly increasing")));
            }
        }
        for (p, v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::Shape(format!("non-finite value at position {p}")));
            }
            if *v == 0.0 {
                return Err(Error::Shape(format!("explicit zero at position {p}")));
            }
        }
        Ok(Self::from_parts(rows, cols, row_offsets, col_indices, values))
    }

    fn from_parts(
        rows: usize,
        cols: usize,
        row_offsets: Vec<usize>,
        col_indices: Vec<usize>,
        values: Vec<f64>,
    ) -> Self {
        Self {
            rows,
            cols,
            row_offsets,
            col_indices,
            values,
            transpose: OnceLock::new(),
        }
    }

    /// Builds from 0-based coordinate triplets in any order. Duplicates are
    /// summed and entries that end up zero are dropped.
    pub fn from_triplets(rows: usize, cols: usize, triplets: &[(usize, usize, f64)]) -> Result<Self> {
        for &(r, c, v) in triplets {
            if r >= rows || c >= cols {
                return Err(Error::Shape(format!(
                    "triplet ({r}, {c}) outside {rows}x{cols}"
                )));
            }
            if !v.is_finite() {
                return Err(Error::Shape(format!("non-finite triplet at ({r}, {c})")));
            }
        }
        let mut sorted = triplets.to_vec();
        sorted.sort_by_key(|&(r, c, _)| (r, c));

        let mut row_offsets = vec![0usize; rows + 1];
        let mut col_indices = Vec::with_capacity(sorted.len());
        let mut values = Vec::with_capacity(sorted.len());
        let mut row_of = Vec::with_capacity(sorted.len());
        let mut it = sorted.into_iter().peekable();
        while let Some((r, c, mut v)) = it.next() {
            while let Some(&(r2, c2, v2)) = it.peek() {
                if (r2, c2) != (r, c) {
                    break;
                }
                v += v2;
                it.next();
            }
            if v != 0.0 {
                row_of.push(r);
                col_indices.push(c);
                values.push(v);
            }
        }
        for &r in &row_of {
            row_offsets[r + 1] += 1;
        }
        for r in 0..rows {
            row_offsets[r + 1] += row_offsets[r];
        }
        Ok(Self::from_parts(rows, cols, row_offsets, col_indices, values))
    }

    pub fn from_dense(d: &DenseMatrix) -> Self {
        let mut row_offsets = Vec::with_capacity(d.rows() + 1);
        let mut col_indices = Vec::new();
        let mut values = Vec::new();
        row_offsets.push(0);
        for i in 0..d.rows() {
            for j in 0..d.cols() {
                let v = d[(i, j)];
                if v != 0.0 {
                    col_indices.push(j);
                    values.push(v);
                }
            }
            row_offsets.push(values.len());
        }
        Self::from_parts(d.rows(), d.cols(), row_offsets, col_indices, values)
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut d = DenseMatrix::zeros(self.rows, self.cols);
        for (r, c, v) in self.triplets() {
            d[(r, c)] = v;
        }
        d
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row_offsets(&self) -> &[usize] {
        &self.row_offsets
    }

    pub fn col_indices(&self) -> &[usize] {
        &self.col_indices
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `(col, value)` pairs of row `r`, ascending by column.
    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.row_offsets[r]..self.row_offsets[r + 1];
        self.col_indices[range.clone()]
            .iter()
            .copied()
            .zip(self.values[range].iter().copied())
    }

    /// All stored entries as `(row, col, value)`, row-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.rows).flat_map(move |r| self.row(r).map(move |(c, v)| (r, c, v)))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Exact structural transpose, rows sorted.
    pub fn transpose(&self) -> SparseMatrix {
        let nnz = self.nnz();
        let mut row_offsets = vec![0usize; self.cols + 1];
        for &c in &self.col_indices {
            row_offsets[c + 1] += 1;
        }
        for c in 0..self.cols {
            row_offsets[c + 1] += row_offsets[c];
        }
        let mut next = row_offsets.clone();
        let mut col_indices = vec![0usize; nnz];
        let mut values = vec![0.0; nnz];
        // Visiting source rows in order leaves every target row sorted.
        for r in 0..self.rows {
            for p in self.row_offsets[r]..self.row_offsets[r + 1] {
                let c = self.col_indices[p];
                let dst = next[c];
                col_indices[dst] = r;
                values[dst] = self.values[p];
                next[c] += 1;
            }
        }
        Self::from_parts(self.cols, self.rows, row_offsets, col_indices, values)
    }

    /// Cached transpose, built on first request.
    pub fn transposed(&self) -> &SparseMatrix {
        self.transpose.get_or_init(|| Arc::new(self.transpose()))
    }

    /// Builds the cached transpose now.
    pub fn with_transpose(self) -> Self {
        let _ = self.transposed();
        self
    }

    /// Dense product `A · X`.
    pub fn spmm(&self, x: &DenseMatrix) -> Result<DenseMatrix> {
        if self.cols != x.rows() {
            return Err(Error::Shape(format!(
                "spmm {}x{} by {:?}",
                self.rows,
                self.cols,
                x.shape()
            )));
        }
        let l = x.cols();
        if l == 0 || self.rows == 0 {
            return Ok(DenseMatrix::zeros(self.rows, l));
        }
        let xr = x.to_row_major();
        let mut yr = vec![0.0; self.rows * l];
        yr.par_chunks_mut(l)
            .with_min_len(64)
            .enumerate()
            .for_each(|(r, out)| {
                for p in self.row_offsets[r]..self.row_offsets[r + 1] {
                    let a = self.values[p];
                    let c = self.col_indices[p];
                    let xrow = &xr[c * l..(c + 1) * l];
                    for (o, &xv) in out.iter_mut().zip(xrow) {
                        *o += a * xv;
                    }
                }
            });
        let yt = DenseMatrix::from_vec_unchecked(l, self.rows, yr);
        Ok(yt.transpose())
    }

    /// Dense product `Aᵀ · X` through the cached transpose.
    pub fn t_spmm(&self, x: &DenseMatrix) -> Result<DenseMatrix> {
        self.transposed().spmm(x)
    }
}

/// `A · X` as a free function.
pub fn spmm(a: &SparseMatrix, x: &DenseMatrix) -> Result<DenseMatrix> {
    a.spmm(x)
}

/// Structural transpose as a free function.
pub fn transpose(a: &SparseMatrix) -> SparseMatrix {
    a.transpose()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::gaussian_matrix;
    use crate::synth::random_sparse;

    #[test]
    fn triplets_sum_duplicates_and_drop_zeros() {
        let a = SparseMatrix::from_triplets(
            2,
            3,
            &[(1, 2, 1.0), (0, 1, 2.0), (1, 2, 0.5), (0, 0, 3.0), (0, 0, -3.0)],
        )
        .unwrap();
        assert_eq!(a.nnz(), 2);
        assert_eq!(a.row_offsets(), &[0, 1, 2]);
        assert_eq!(a.col_indices(), &[1, 2]);
        assert_eq!(a.values(), &[2.0, 1.5]);
    }

    #[test]
    fn from_csr_validates() {
        assert!(SparseMatrix::from_csr(1, 2, vec![0, 2], vec![1, 0], vec![1.0, 1.0]).is_err());
        assert!(SparseMatrix::from_csr(1, 2, vec![0, 1], vec![2], vec![1.0]).is_err());
        assert!(SparseMatrix::from_csr(1, 2, vec![0, 1], vec![1], vec![0.0]).is_err());
        assert!(SparseMatrix::from_csr(1, 2, vec![0, 1], vec![1], vec![4.0]).is_ok());
    }

    #[test]
    fn transpose_examples() {
        let d = SparseMatrix::from_triplets(2, 2, &[(0, 0, 1.0), (1, 1, 2.0)]).unwrap();
        assert_eq!(d.transpose(), d);
        let row = SparseMatrix::from_triplets(1, 2, &[(0, 0, 5.0), (0, 1, 7.0)]).unwrap();
        let col = row.transpose();
        assert_eq!(col.shape(), (2, 1));
        assert_eq!(col.to_dense().data(), &[5.0, 7.0]);
    }

    #[test]
    fn transpose_involution() {
        let a = random_sparse(50, 30, 0.2, 3);
        let t = a.transpose();
        assert_eq!(t.to_dense(), a.to_dense().transpose());
        assert_eq!(t.transpose(), a);
    }

    #[test]
    fn spmm_examples() {
        let a = SparseMatrix::from_triplets(2, 2, &[(0, 0, 1.0), (1, 1, 2.0)]).unwrap();
        let x = DenseMatrix::from_row_major(2, 1, &[1.0, 1.0]).unwrap();
        assert_eq!(a.spmm(&x).unwrap().data(), &[1.0, 2.0]);

        let z = SparseMatrix::from_triplets(3, 3, &[]).unwrap();
        let y = z.spmm(&gaussian_matrix(3, 2, 1)).unwrap();
        assert_eq!(y, DenseMatrix::zeros(3, 2));

        let r = random_sparse(40, 20, 0.3, 9);
        assert_eq!(r.spmm(&DenseMatrix::identity(20)).unwrap(), r.to_dense());
    }

    #[test]
    fn spmm_shape_error() {
        let a = SparseMatrix::from_triplets(2, 3, &[]).unwrap();
        assert!(matches!(a.spmm(&DenseMatrix::zeros(2, 1)), Err(Error::Shape(_))));
    }

    #[test]
    fn t_spmm_matches_dense() {
        let a = random_sparse(30, 20, 0.25, 5);
        let x = gaussian_matrix(30, 4, 6);
        let got = a.t_spmm(&x).unwrap();
        let want = a.to_dense().t_matmul(&x).unwrap();
        assert!(got.max_abs_diff(&want) < 1e-12);
    }
}
