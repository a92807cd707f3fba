//! Any type with `A·X` and `Aᵀ·X` can be decomposed. Here the operator is
//! a column-centered sparse matrix `A − 1·μᵀ`, which is never formed, so
//! the result is a PCA of the rows without densifying.
//!
//! ```text
//! cargo run --release --example custom_operator
//! ```

use dashsvd::dense::{Accumulation, DenseMatrix};
use dashsvd::synth::random_sparse;
use dashsvd::{solve, Algorithm, LinearOperator, SolverConfig, SparseMatrix};

struct Centered {
    a: SparseMatrix,
    mean: Vec<f64>,
}

impl Centered {
    fn new(a: SparseMatrix) -> dashsvd::Result<Self> {
        let ones = DenseMatrix::from_fn(a.rows(), 1, |_, _| 1.0 / a.rows() as f64);
        let mean = a.t_spmm(&ones)?.col(0).to_vec();
        Ok(Self { a, mean })
    }
}

impl LinearOperator for Centered {
    fn rows(&self) -> usize {
        self.a.rows()
    }

    fn cols(&self) -> usize {
        self.a.cols()
    }

    // (A − 1μᵀ)X = AX − 1(μᵀX)
    fn apply(&self, x: &DenseMatrix, _acc: Accumulation) -> dashsvd::Result<DenseMatrix> {
        let mut y = self.a.spmm(x)?;
        for j in 0..x.cols() {
            let shift: f64 = self.mean.iter().zip(x.col(j)).map(|(m, v)| m * v).sum();
            y.col_mut(j).iter_mut().for_each(|v| *v -= shift);
        }
        Ok(y)
    }

    // (A − 1μᵀ)ᵀX = AᵀX − μ(1ᵀX)
    fn apply_t(&self, x: &DenseMatrix, _acc: Accumulation) -> dashsvd::Result<DenseMatrix> {
        let mut y = self.a.t_spmm(x)?;
        for j in 0..x.cols() {
            let total: f64 = x.col(j).iter().sum();
            for (v, m) in y.col_mut(j).iter_mut().zip(&self.mean) {
                *v -= m * total;
            }
        }
        Ok(y)
    }

    fn nnz(&self) -> usize {
        self.a.nnz() + self.a.cols()
    }
}

fn main() -> dashsvd::Result<()> {
    // Shift every stored value up so the columns have clearly nonzero means.
    let raw = random_sparse(5000, 400, 0.02, 8);
    let vals: Vec<(usize, usize, f64)> = raw.triplets().map(|(r, c, v)| (r, c, v + 3.0)).collect();
    let a = SparseMatrix::from_triplets(5000, 400, &vals)?.with_transpose();

    let cfg = SolverConfig::new(5, Algorithm::Dash);
    let (raw_svd, _) = solve(&a, &cfg)?;
    let centered = Centered::new(a)?;
    let (pca, trace) = solve(&centered, &cfg)?;

    println!("uncentered sigma: {:.3?}", raw_svd.s);
    println!("centered sigma:   {:.3?}  ({} iterations)", pca.s, trace.stopped_at);
    let var: Vec<f64> = pca.s.iter().map(|s| s * s / (centered.rows() - 1) as f64).collect();
    println!("explained variance of the first components: {var:.4?}");
    Ok(())
}
