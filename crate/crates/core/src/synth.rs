//! Seeded synthetic test matrices.
//!
//! * `dense1(n)`: an `n x n` standard Gaussian matrix.
//! * `dense2(n)`: `U·diag(1/√i)·Vᵀ` with seeded random orthonormal `U`, `V`.
//! * `random_sparse`: every entry independently nonzero with the given
//!   density, nonzeros standard normal.

use crate::dense::{gaussian_matrix, qr_orth, DenseMatrix, GaussianStream};
use crate::error::{Error, Result};
use crate::sparse::SparseMatrix;

// Generator streams live in their own seed domain. Without this a sketch
// drawn with seed `s` reproduces the Gaussian a test matrix was built from
// and the solver sees an exactly aligned start.
const DOMAIN: u64 = 0xD1B5_4A32_D192_ED03;

fn stream_seed(seed: u64, tag: u64) -> u64 {
    seed.wrapping_mul(4).wrapping_add(tag) ^ DOMAIN
}

pub fn dense1(n: usize, seed: u64) -> DenseMatrix {
    gaussian_matrix(n, n, stream_seed(seed, 0))
}

/// Spectrum of [`dense2`]: `σ_i = 1/√i`, `i = 1..=n`.
pub fn dense2_spectrum(n: usize) -> Vec<f64> {
    (1..=n).map(|i| 1.0 / (i as f64).sqrt()).collect()
}

pub fn dense2(n: usize, seed: u64) -> DenseMatrix {
    with_spectrum(n, n, &dense2_spectrum(n), seed).expect("square spectrum fits")
}

/// `rows x cols` matrix with orthonormal columns, Q factor of a Gaussian.
pub fn random_orthonormal(rows: usize, cols: usize, seed: u64) -> Result<DenseMatrix> {
    if cols > rows {
        return Err(Error::Shape(format!("cannot fit {cols} orthonormal columns in R^{rows}")));
    }
    qr_orth(&gaussian_matrix(rows, cols, seed))
}

/// `U·diag(sigmas)·Vᵀ` with random orthonormal factors drawn from seeds
/// derived from `seed`.
pub fn with_spectrum(rows: usize, cols: usize, sigmas: &[f64], seed: u64) -> Result<DenseMatrix> {
    let r = sigmas.len();
    if r > rows.min(cols) {
        return Err(Error::Shape(format!("{r} singular values for a {rows}x{cols} matrix")));
    }
    let mut u = random_orthonormal(rows, r, stream_seed(seed, 1))?;
    let v = random_orthonormal(cols, r, stream_seed(seed, 2))?;
    u.scale_cols(sigmas);
    u.matmul(&v.transpose())
}

/// Bernoulli(`density`) sparsity pattern with standard normal values,
/// sampled in O(nnz) by geometric skips over the row-major index.
pub fn random_sparse(rows: usize, cols: usize, density: f64, seed: u64) -> SparseMatrix {
    assert!((0.0..=1.0).contains(&density), "density must lie in [0, 1]");
    let mut rng = GaussianStream::new(stream_seed(seed, 3));
    let total = rows as u64 * cols as u64;
    let mut row_offsets = vec![0usize; rows + 1];
    let mut col_indices = Vec::new();
    let mut values = Vec::new();
    if density > 0.0 && total > 0 {
        let log_q = (1.0 - density).ln();
        let mut pos: u64 = 0;
        loop {
            if density < 1.0 {
                let u = rng.next_uniform();
                let skip = ((1.0 - u).ln() / log_q).floor();
                if skip >= (total - pos) as f64 {
                    break;
                }
                pos += skip as u64;
            }
            if pos >= total {
                break;
            }
            let v = rng.next_normal();
            if v != 0.0 {
                let r = (pos / cols as u64) as usize;
                row_offsets[r + 1] += 1;
                col_indices.push((pos % cols as u64) as usize);
                values.push(v);
            }
            pos += 1;
        }
    }
    for r in 0..rows {
        row_offsets[r + 1] += row_offsets[r];
    }
    SparseMatrix::from_csr(rows, cols, row_offsets, col_indices, values)
        .expect("row-major sampling yields valid CSR")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::oracle_svd;

    #[test]
    fn dense2_has_prescribed_spectrum() {
        let a = dense2(40, 3);
        let f = oracle_svd(&a).unwrap();
        for (got, want) in f.s.iter().zip(dense2_spectrum(40)) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
    }

    #[test]
    fn random_sparse_density_and_determinism() {
        let a = random_sparse(300, 200, 0.05, 7);
        let b = random_sparse(300, 200, 0.05, 7);
        assert_eq!(a, b);
        let expect = 0.05 * 60000.0;
        let sd = (60000.0f64 * 0.05 * 0.95).sqrt();
        assert!((a.nnz() as f64 - expect).abs() < 5.0 * sd, "nnz {}", a.nnz());
        assert_eq!(random_sparse(4, 5, 1.0, 1).nnz(), 20);
        assert_eq!(random_sparse(4, 5, 0.0, 1).nnz(), 0);
    }

    #[test]
    fn orthonormal_factor() {
        let q = random_orthonormal(30, 6, 1).unwrap();
        assert!(q.gram().max_abs_diff(&DenseMatrix::identity(6)) < 1e-13);
        assert!(random_orthonormal(3, 4, 1).is_err());
    }

    #[test]
    fn generators_do_not_share_sketch_streams() {
        use crate::rsvd::{solve, Algorithm, SolverConfig};
        let a = dense2(120, 0);
        for seed in 0..6 {
            for alg in [Algorithm::Basic, Algorithm::Shifted] {
                let cfg = SolverConfig { p: 0, seed, ..SolverConfig::new(10, alg) };
                let (f, _) = solve(&a, &cfg).unwrap();
                // A sketch correlated with the generator would recover the
                // leading triplets exactly.
                assert!((f.s[9] - 1.0 / 10f64.sqrt()).abs() > 1e-6, "seed {seed} {alg}");
            }
        }
    }
}
