use crate::dense::DenseMatrix;
use crate::error::{Error, Result};

/// A (possibly truncated) singular value decomposition `U · diag(S) · Vᵀ`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSvd {
    pub u: DenseMatrix,
    pub s: Vec<f64>,
    pub v: DenseMatrix,
}

impl TruncatedSvd {
    pub fn new(u: DenseMatrix, s: Vec<f64>, v: DenseMatrix) -> Result<Self> {
        if u.cols() != s.len() || v.cols() != s.len() {
            return Err(Error::Shape(format!(
                "factor widths disagree: U {:?}, S {}, V {:?}",
                u.shape(),
                s.len(),
                v.shape()
            )));
        }
        Ok(Self { u, s, v })
    }

    pub fn rank(&self) -> usize {
        self.s.len()
    }

    /// Keeps the leading `k` triplets.
    pub fn truncate(&self, k: usize) -> TruncatedSvd {
        let k = k.min(self.rank());
        TruncatedSvd {
            u: self.u.leading_cols(k),
            s: self.s[..k].to_vec(),
            v: self.v.leading_cols(k),
        }
    }

    /// The factorization of the transposed matrix.
    pub fn transposed(self) -> TruncatedSvd {
        TruncatedSvd {
            u: self.v,
            s: self.s,
            v: self.u,
        }
    }

    /// Dense `U · diag(S) · Vᵀ`.
    pub fn reconstruct(&self) -> DenseMatrix {
        let mut us = self.u.clone();
        us.scale_cols(&self.s);
        us.matmul(&self.v.transpose())
            .expect("factor shapes validated at construction")
    }
}

/// Flips column pairs so the first nonzero entry of every `v` column is
/// non-negative; `u` follows `v`.
pub(crate) fn normalize_signs(u: &mut DenseMatrix, v: &mut DenseMatrix) {
    for j in 0..v.cols() {
        let flip = v
            .col(j)
            .iter()
            .find(|x| **x != 0.0)
            .is_some_and(|x| *x < 0.0);
        if flip {
            v.col_mut(j).iter_mut().for_each(|x| *x = -*x);
            u.col_mut(j).iter_mut().for_each(|x| *x = -*x);
        }
    }
}
