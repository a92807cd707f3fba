use std::time::Instant;

use super::{econ_svd, orth, PhaseTimes, SolverConfig};
use crate::dense::{gaussian_matrix, Accumulation, DenseMatrix};
use crate::error::Result;
use crate::factors::{normalize_signs, TruncatedSvd};
use crate::operator::LinearOperator;
use crate::rsvd::Orthonormalizer;

/// Step-by-step form of the basic randomized SVD. `Q` lives in the column
/// space of `A` (`m x l`).
pub struct BasicIteration<'a, O: ?Sized> {
    a: &'a O,
    q: DenseMatrix,
    iteration: usize,
    k: usize,
    mode: Orthonormalizer,
    acc: Accumulation,
}

impl<'a, O: LinearOperator + ?Sized> BasicIteration<'a, O> {
    /// Draws `Ω` (`n x l`) and sets `Q = orth(AΩ)`.
    pub fn new(a: &'a O, cfg: &SolverConfig) -> Result<Self> {
        cfg.validate(a.rows(), a.cols())?;
        let acc = cfg.accumulation();
        let omega = gaussian_matrix(a.cols(), cfg.l(), cfg.seed);
        let q = orth(&a.apply(&omega, acc)?, cfg.orthonormalizer, acc)?;
        Ok(Self {
            a,
            q,
            iteration: 0,
            k: cfg.k,
            mode: cfg.orthonormalizer,
            acc,
        })
    }

    /// One power iteration, `Q = orth(A(AᵀQ))`.
    pub fn step(&mut self) -> Result<()> {
        let c = self.a.apply(&self.a.apply_t(&self.q, self.acc)?, self.acc)?;
        self.q = orth(&c, self.mode, self.acc)?;
        self.iteration += 1;
        Ok(())
    }

    pub fn basis(&self) -> &DenseMatrix {
        &self.q
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    /// `B = QᵀA`, its economy SVD, truncated to `k`. The SVD is taken of
    /// `Bᵀ = AᵀQ`, which is tall.
    pub fn finalize(&self) -> Result<TruncatedSvd> {
        let bt = self.a.apply_t(&self.q, self.acc)?;
        let f = econ_svd(&bt, self.mode, self.acc)?;
        let mut u = self.q.matmul(&f.v.leading_cols(self.k))?;
        let mut v = f.u.leading_cols(self.k);
        normalize_signs(&mut u, &mut v);
        TruncatedSvd::new(u, f.s[..self.k].to_vec(), v)
    }
}

/// Basic randomized SVD with `cfg.p` power iterations. Works on `A` as
/// given, without orientation dispatch.
pub fn basic_rsvd<O: LinearOperator + ?Sized>(a: &O, cfg: &SolverConfig) -> Result<TruncatedSvd> {
    basic_timed(a, cfg, &mut PhaseTimes::default())
}

pub(crate) fn basic_timed<O: LinearOperator + ?Sized>(
    a: &O,
    cfg: &SolverConfig,
    times: &mut PhaseTimes,
) -> Result<TruncatedSvd> {
    let t = Instant::now();
    let mut it = BasicIteration::new(a, cfg)?;
    for _ in 0..cfg.p {
        it.step()?;
    }
    times.iterate = t.elapsed();
    let t = Instant::now();
    let f = it.finalize()?;
    times.finalize = t.elapsed();
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::oracle_svd;
    use crate::error::Error;
    use crate::rsvd::Algorithm;
    use crate::sparse::SparseMatrix;
    use crate::synth::random_sparse;

    fn cfg(k: usize, s: usize, p: usize) -> SolverConfig {
        SolverConfig {
            s: Some(s),
            p,
            seed: 1,
            ..SolverConfig::new(k, Algorithm::Basic)
        }
    }

    #[test]
    fn diagonal_top_two() {
        let a = SparseMatrix::from_triplets(4, 4, &[(0, 0, 4.0), (1, 1, 3.0), (2, 2, 2.0), (3, 3, 1.0)])
            .unwrap();
        let want = oracle_svd(&a.to_dense()).unwrap().s;
        // With l = 3 the fourth direction leaks in at rate (1/3)^(4p) for σ₂,
        // so two iterations only reach about 1e-4; ten reach 1e-6 easily.
        for mode in [Orthonormalizer::EigSvd, Orthonormalizer::Qr] {
            for (p, tol) in [(2, 1e-3), (10, 1e-6)] {
                let f = basic_rsvd(&a, &SolverConfig { orthonormalizer: mode, ..cfg(2, 1, p) }).unwrap();
                assert!((f.s[0] - want[0]).abs() < tol && (f.s[1] - want[1]).abs() < tol, "{:?}", f.s);
            }
        }
    }

    fn rank_one() -> SparseMatrix {
        let x = [1.0, -2.0, 0.5, 3.0, 1.5];
        let y = [2.0, 1.0, -1.0, 0.25];
        let mut t = Vec::new();
        for (i, xi) in x.iter().enumerate() {
            for (j, yj) in y.iter().enumerate() {
                t.push((i, j, xi * yj));
            }
        }
        SparseMatrix::from_triplets(5, 4, &t).unwrap()
    }

    #[test]
    fn rank_one_exact_without_oversampling() {
        let a = rank_one();
        let sigma = a.frobenius_norm();
        let f = basic_rsvd(&a, &cfg(1, 0, 0)).unwrap();
        assert!((f.s[0] - sigma).abs() <= 1e-10 * sigma);
        assert!(f.reconstruct().max_abs_diff(&a.to_dense()) < 1e-12);
    }

    #[test]
    fn rank_one_with_oversampling_is_rank_deficient() {
        let err = basic_rsvd(&rank_one(), &cfg(1, 1, 0)).unwrap_err();
        assert!(matches!(err, Error::RankDeficient { index: 1, .. }), "{err}");
        let qr = SolverConfig { orthonormalizer: Orthonormalizer::Qr, ..cfg(1, 1, 0) };
        assert!(matches!(basic_rsvd(&rank_one(), &qr), Err(Error::RankDeficient { .. })));
    }

    #[test]
    fn underestimates_and_is_orthonormal() {
        let a = random_sparse(100, 60, 0.1, 5);
        let sigma = oracle_svd(&a.to_dense()).unwrap().s;
        let f = basic_rsvd(&a, &cfg(10, 5, 2)).unwrap();
        for (got, want) in f.s.iter().zip(&sigma) {
            assert!(*got <= want * (1.0 + 1e-10));
        }
        let id = DenseMatrix::identity(10);
        assert!(f.u.gram().max_abs_diff(&id) < 1e-8);
        assert!(f.v.gram().max_abs_diff(&id) < 1e-8);
    }

    #[test]
    fn rejects_oversized_sketch() {
        let a = random_sparse(10, 6, 0.5, 1);
        assert!(matches!(basic_rsvd(&a, &cfg(5, 2, 0)), Err(Error::Shape(_))));
    }
}
