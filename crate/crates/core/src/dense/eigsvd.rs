//! Economy SVD of a tall matrix through the eigendecomposition of its Gram
//! matrix, with the spectrum reordered to descending.

use super::{sym_eig, Accumulation, DenseMatrix};
use crate::error::{Error, Result};
use crate::factors::{normalize_signs, TruncatedSvd};

/// Eigenvalues of `CᵀC` under `max(rows, cols) · eps · λ_max` are treated
/// as a rank deficiency.
pub fn gram_rank_floor(rows: usize, cols: usize, lambda_max: f64) -> f64 {
    rows.max(cols) as f64 * f64::EPSILON * lambda_max
}

/// `C = U · diag(S) · Vᵀ` for `C` with at least as many rows as columns.
/// Returns all `C.cols()` triplets, singular values strictly positive and
/// descending.
pub fn eig_svd(c: &DenseMatrix) -> Result<TruncatedSvd> {
    eig_svd_with(c, Accumulation::Ordered)
}

pub fn eig_svd_with(c: &DenseMatrix, acc: Accumulation) -> Result<TruncatedSvd> {
    let (m, n) = c.shape();
    if m < n {
        return Err(Error::Shape(format!(
            "eig_svd needs rows >= cols, got {m}x{n}"
        )));
    }
    c.check_finite()?;
    if n == 0 {
        return TruncatedSvd::new(DenseMatrix::zeros(m, 0), Vec::new(), DenseMatrix::zeros(0, 0));
    }

    let gram = c.gram_with(acc);
    let eig = sym_eig(&gram)?;
    let lambda_max = eig.eigenvalues[n - 1].max(0.0);
    let floor = gram_rank_floor(m, n, lambda_max);
    // Ascending order: index 0 is the smallest singular value.
    if let Some(pos) = eig.eigenvalues.iter().position(|&l| l <= floor) {
        let lambda = eig.eigenvalues[pos];
        return Err(Error::RankDeficient {
            index: n - 1 - pos,
            value: lambda.max(0.0).sqrt(),
            floor: floor.sqrt(),
        });
    }

    let mut v = eig.eigenvectors;
    let mut s: Vec<f64> = eig.eigenvalues.iter().map(|l| l.sqrt()).collect();
    let mut u = c.matmul(&v)?;
    let inv: Vec<f64> = s.iter().map(|x| 1.0 / x).collect();
    u.scale_cols(&inv);

    u.flip_cols();
    v.flip_cols();
    s.reverse();
    normalize_signs(&mut u, &mut v);
    TruncatedSvd::new(u, s, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::{gaussian_matrix, qr_orth};

    #[test]
    fn diagonal_case_reorders() {
        let c = DenseMatrix::from_row_major(3, 2, &[3.0, 0.0, 0.0, 4.0, 0.0, 0.0]).unwrap();
        let f = eig_svd(&c).unwrap();
        assert_eq!(f.s, vec![4.0, 3.0]);
        // First right vector is e2, first left vector is e2.
        assert!((f.v[(1, 0)].abs() - 1.0).abs() < 1e-15);
        assert!((f.u[(1, 0)].abs() - 1.0).abs() < 1e-15);
        assert!((f.v[(0, 1)].abs() - 1.0).abs() < 1e-15);
        assert!((f.u[(0, 1)].abs() - 1.0).abs() < 1e-15);
        assert!(f.reconstruct().max_abs_diff(&c) < 1e-14);
    }

    #[test]
    fn identity() {
        let f = eig_svd(&DenseMatrix::identity(10)).unwrap();
        assert!(f.s.iter().all(|&x| (x - 1.0).abs() < 1e-15));
        let uvt = f.u.matmul(&f.v.transpose()).unwrap();
        assert!(uvt.max_abs_diff(&DenseMatrix::identity(10)) < 1e-14);
    }

    #[test]
    fn recovers_constructed_spectrum() {
        let left = qr_orth(&gaussian_matrix(8, 3, 1)).unwrap();
        let right = qr_orth(&gaussian_matrix(3, 3, 2)).unwrap();
        let mut scaled = left.clone();
        scaled.scale_cols(&[5.0, 2.0, 1.0]);
        let c = scaled.matmul(&right.transpose()).unwrap();
        let f = eig_svd(&c).unwrap();
        for (got, want) in f.s.iter().zip([5.0, 2.0, 1.0]) {
            assert!((got - want).abs() < 1e-10, "{got} vs {want}");
        }
        assert!(f.reconstruct().max_abs_diff(&c) < 1e-8 * c.frobenius_norm());
        assert!(f.u.gram().max_abs_diff(&DenseMatrix::identity(3)) < 1e-9);
        assert!(f.v.gram().max_abs_diff(&DenseMatrix::identity(3)) < 1e-9);
    }

    #[test]
    fn rank_deficient_reports_index() {
        let c = DenseMatrix::from_row_major(3, 2, &[1.0, 2.0, 1.0, 2.0, 1.0, 2.0]).unwrap();
        match eig_svd(&c) {
            Err(Error::RankDeficient { index, .. }) => assert_eq!(index, 1),
            other => panic!("expected RankDeficient, got {other:?}"),
        }
        assert!(matches!(
            eig_svd(&DenseMatrix::zeros(4, 2)),
            Err(Error::RankDeficient { .. })
        ));
    }

    #[test]
    fn wide_input_rejected() {
        assert!(matches!(eig_svd(&DenseMatrix::zeros(2, 3)), Err(Error::Shape(_))));
    }

    #[test]
    fn sign_convention_applied() {
        let f = eig_svd(&gaussian_matrix(30, 6, 5)).unwrap();
        for j in 0..6 {
            let first = f.v.col(j).iter().find(|x| **x != 0.0).unwrap();
            assert!(*first > 0.0);
        }
    }
}
