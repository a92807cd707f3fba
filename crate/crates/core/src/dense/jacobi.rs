//! Reference SVD by one-sided (Hestenes) Jacobi rotations.
//!
//! Works on the columns of `C` directly and never forms `CᵀC`, so it shares
//! no numerical path with [`eig_svd`](super::eig_svd). Used as ground truth
//! in tests and for desk-scale reference spectra.

use super::DenseMatrix;
use crate::error::{Error, Result};
use crate::factors::{normalize_signs, TruncatedSvd};

const MAX_SWEEPS: usize = 80;

/// Largest `min(rows, cols)` accepted by [`oracle_svd`].
pub const ORACLE_MAX_DIM: usize = 2000;

/// Full economy SVD: `min(m, n)` triplets, singular values descending.
/// Columns belonging to zero singular values are orthonormal completions.
pub fn oracle_svd(c: &DenseMatrix) -> Result<TruncatedSvd> {
    let (m, n) = c.shape();
    if m.min(n) > ORACLE_MAX_DIM {
        return Err(Error::Shape(format!(
            "oracle_svd refuses {m}x{n}: smaller dimension above {ORACLE_MAX_DIM}"
        )));
    }
    c.check_finite()?;
    if m < n {
        return oracle_svd(&c.transpose()).map(TruncatedSvd::transposed);
    }

    let mut w = c.clone();
    let mut v = DenseMatrix::identity(n);
    let mut norms: Vec<f64> = (0..n).map(|j| dot(w.col(j), w.col(j))).collect();
    // Columns this small are numerically zero; rotating against them only
    // churns rounding noise.
    let tiny = {
        let t = m as f64 * f64::EPSILON * c.frobenius_norm();
        t * t
    };
    let mut converged = n < 2;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = norms[p];
                let beta = norms[q];
                let gamma = dot(w.col(p), w.col(q));
                if alpha <= tiny
                    || beta <= tiny
                    || gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt()
                {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                rotate(&mut w, p, q, cs, sn);
                rotate(&mut v, p, q, cs, sn);
                norms[p] = dot(w.col(p), w.col(p));
                norms[q] = dot(w.col(q), w.col(q));
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Numerical(format!(
            "one-sided Jacobi did not converge in {MAX_SWEEPS} sweeps"
        )));
    }

    let mut order: Vec<usize> = (0..n).collect();
    let sigma: Vec<f64> = (0..n).map(|j| dot(w.col(j), w.col(j)).sqrt()).collect();
    order.sort_by(|&a, &b| sigma[b].total_cmp(&sigma[a]));

    let s: Vec<f64> = order.iter().map(|&j| sigma[j]).collect();
    let smax = s.first().copied().unwrap_or(0.0);
    let zero_floor = m as f64 * f64::EPSILON * smax;
    let mut u = DenseMatrix::zeros(m, n);
    let mut vs = DenseMatrix::zeros(n, n);
    let mut filled = 0;
    for (dst, &src) in order.iter().enumerate() {
        vs.col_mut(dst).copy_from_slice(v.col(src));
        if s[dst] > zero_floor && s[dst] > 0.0 {
            let inv = 1.0 / s[dst];
            for (o, x) in u.col_mut(dst).iter_mut().zip(w.col(src)) {
                *o = x * inv;
            }
            filled += 1;
        }
    }
    complete_basis(&mut u, filled);
    normalize_signs(&mut u, &mut vs);
    TruncatedSvd::new(u, s, vs)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn rotate(m: &mut DenseMatrix, p: usize, q: usize, cs: f64, sn: f64) {
    let rows = m.rows();
    let (left, right) = m.data_mut().split_at_mut(q * rows);
    let cp = &mut left[p * rows..(p + 1) * rows];
    let cq = &mut right[..rows];
    for (a, b) in cp.iter_mut().zip(cq.iter_mut()) {
        let (x, y) = (*a, *b);
        *a = cs * x - sn * y;
        *b = sn * x + cs * y;
    }
}

/// Fills columns `filled..` of `u` with unit vectors orthogonal to every
/// earlier column, by Gram–Schmidt on the coordinate axes.
fn complete_basis(u: &mut DenseMatrix, filled: usize) {
    let (m, n) = u.shape();
    let mut next_axis = 0;
    for j in filled..n {
        while next_axis < m {
            let mut cand = vec![0.0; m];
            cand[next_axis] = 1.0;
            next_axis += 1;
            // Two passes of classical Gram–Schmidt.
            for _ in 0..2 {
                for prev in 0..j {
                    let col = u.col(prev);
                    let d = dot(col, &cand);
                    cand.iter_mut().zip(col).for_each(|(c, x)| *c -= d * x);
                }
            }
            let norm = dot(&cand, &cand).sqrt();
            if norm > 0.5 {
                cand.iter_mut().for_each(|c| *c /= norm);
                u.col_mut(j).copy_from_slice(&cand);
                break;
            }
        }
    }
}
