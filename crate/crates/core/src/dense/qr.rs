//! Householder QR for tall matrices.

use super::{oracle_svd, DenseMatrix};
use crate::error::{Error, Result};
use crate::factors::{normalize_signs, TruncatedSvd};

/// Thin Householder factorization `C = Q · R`.
struct Householder {
    /// Reflector vectors, column `k` nonzero from row `k` down, unit norm.
    reflectors: DenseMatrix,
    /// Upper triangle of `R`, `n x n`.
    r: DenseMatrix,
}

fn householder(c: &DenseMatrix) -> Householder {
    let (m, n) = c.shape();
    let mut work = c.clone();
    let mut reflectors = DenseMatrix::zeros(m, n);
    let mut r = DenseMatrix::zeros(n, n);
    for k in 0..n {
        let x = &work.col(k)[k..];
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let alpha = if x[0] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = x.to_vec();
        v[0] -= alpha;
        let vnorm = v.iter().map(|t| t * t).sum::<f64>().sqrt();
        if vnorm > 0.0 {
            v.iter_mut().for_each(|t| *t /= vnorm);
            for j in k..n {
                let col = &mut work.col_mut(j)[k..];
                let dot: f64 = col.iter().zip(&v).map(|(a, b)| a * b).sum();
                col.iter_mut().zip(&v).for_each(|(a, b)| *a -= 2.0 * dot * b);
            }
        }
        reflectors.col_mut(k)[k..].copy_from_slice(&v);
        for i in 0..=k {
            r[(i, k)] = work[(i, k)];
        }
    }
    Householder { reflectors, r }
}

impl Householder {
    /// Explicit thin `Q` (`m x n`).
    fn thin_q(&self) -> DenseMatrix {
        let (m, n) = self.reflectors.shape();
        let mut q = DenseMatrix::from_fn(m, n, |i, j| if i == j { 1.0 } else { 0.0 });
        for k in (0..n).rev() {
            let v = &self.reflectors.col(k)[k..];
            for j in 0..n {
                let col = &mut q.col_mut(j)[k..];
                let dot: f64 = col.iter().zip(v).map(|(a, b)| a * b).sum();
                if dot != 0.0 {
                    col.iter_mut().zip(v).for_each(|(a, b)| *a -= 2.0 * dot * b);
                }
            }
        }
        q
    }
}

/// Orthonormal basis for the column span of a full-rank tall matrix.
pub fn qr_orth(c: &DenseMatrix) -> Result<DenseMatrix> {
    let (m, n) = c.shape();
    if m < n {
        return Err(Error::Shape(format!("qr_orth needs rows >= cols, got {m}x{n}")));
    }
    c.check_finite()?;
    let h = householder(c);
    let diag: Vec<f64> = (0..n).map(|i| h.r[(i, i)].abs()).collect();
    let rmax = diag.iter().fold(0.0_f64, |a, &b| a.max(b));
    let floor = m.max(n) as f64 * f64::EPSILON * rmax;
    if let Some(index) = diag.iter().position(|&d| d <= floor) {
        return Err(Error::RankDeficient {
            index,
            value: diag[index],
            floor,
        });
    }
    Ok(h.thin_q())
}

/// Economy SVD through QR then Jacobi on the triangular factor. Tolerates
/// rank deficiency.
pub fn qr_svd(c: &DenseMatrix) -> Result<TruncatedSvd> {
    let (m, n) = c.shape();
    if m < n {
        return Err(Error::Shape(format!("qr_svd needs rows >= cols, got {m}x{n}")));
    }
    c.check_finite()?;
    let h = householder(c);
    let inner = oracle_svd(&h.r)?;
    let mut u = h.thin_q().matmul(&inner.u)?;
    let mut v = inner.v;
    normalize_signs(&mut u, &mut v);
    TruncatedSvd::new(u, inner.s, v)
}
