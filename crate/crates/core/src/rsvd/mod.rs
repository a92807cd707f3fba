//! Randomized truncated SVD drivers.

mod basic;
mod config;
mod shifted;

pub use basic::{basic_rsvd, BasicIteration};
pub use config::{
    Algorithm, Orthonormalizer, ShiftPolicy, SolverConfig, DEFAULT_P, DEFAULT_P_MAX, DEFAULT_TOL,
};
pub use shifted::{
    dash_svd, pve_stop_check, shifted_rsvd, update_shift, IterationState, ShiftTrace,
    ShiftedIteration, StopReason,
};

use std::time::Duration;

use crate::dense::{eig_svd_with, qr_orth, qr_svd, Accumulation, DenseMatrix};
use crate::error::{Error, Result};
use crate::factors::{normalize_signs, TruncatedSvd};
use crate::operator::{LinearOperator, Transposed};

pub(crate) fn orth(c: &DenseMatrix, mode: Orthonormalizer, acc: Accumulation) -> Result<DenseMatrix> {
    match mode {
        Orthonormalizer::Qr => qr_orth(c),
        Orthonormalizer::EigSvd => Ok(eig_svd_with(c, acc)?.u),
    }
}

pub(crate) fn econ_svd(c: &DenseMatrix, mode: Orthonormalizer, acc: Accumulation) -> Result<TruncatedSvd> {
    match mode {
        Orthonormalizer::Qr => qr_svd(c),
        Orthonormalizer::EigSvd => eig_svd_with(c, acc),
    }
}

/// Wall time spent iterating (sketch included) and finalizing.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PhaseTimes {
    pub iterate: Duration,
    pub finalize: Duration,
}

/// Runs the configured algorithm.
///
/// The shifted algorithms iterate on the smaller Gram matrix: a wide input
/// is solved through its transpose and the factors swapped back. Square
/// inputs take the direct path. The basic algorithm always runs as given.
pub fn solve<O: LinearOperator + ?Sized>(a: &O, cfg: &SolverConfig) -> Result<(TruncatedSvd, ShiftTrace)> {
    solve_timed(a, cfg).map(|(f, t, _)| (f, t))
}

/// [`solve`] plus per-phase wall times.
pub fn solve_timed<O: LinearOperator + ?Sized>(
    a: &O,
    cfg: &SolverConfig,
) -> Result<(TruncatedSvd, ShiftTrace, PhaseTimes)> {
    cfg.validate(a.rows(), a.cols())?;
    let mut times = PhaseTimes::default();
    let out = match cfg.threads {
        None => solve_here(a, cfg, &mut times),
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?
            .install(|| solve_here(a, cfg, &mut times)),
    }?;
    Ok((out.0, out.1, times))
}

fn solve_here<O: LinearOperator + ?Sized>(
    a: &O,
    cfg: &SolverConfig,
    times: &mut PhaseTimes,
) -> Result<(TruncatedSvd, ShiftTrace)> {
    if cfg.algorithm == Algorithm::Basic {
        let f = basic::basic_timed(a, cfg, times)?;
        let trace = ShiftTrace {
            alphas: vec![0.0; cfg.p],
            s_hat_history: None,
            stopped_at: cfg.p,
            stop_reason: StopReason::FixedP,
        };
        return Ok((f, trace));
    }
    let mut run = |op: &dyn LinearOperator| match cfg.algorithm {
        Algorithm::Dash => shifted::dash_timed(op, cfg, times),
        _ => shifted::shifted_timed(op, cfg, times),
    };
    if a.rows() >= a.cols() {
        run(&a)
    } else {
        let (f, trace) = run(&Transposed(a))?;
        let mut f = f.transposed();
        normalize_signs(&mut f.u, &mut f.v);
        Ok((f, trace))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::random_sparse;

    #[test]
    fn transpose_duality() {
        let a = random_sparse(60, 100, 0.15, 3);
        let cfg = SolverConfig {
            seed: 4,
            ..SolverConfig::new(6, Algorithm::Dash)
        };
        let (f, _) = solve(&a, &cfg).unwrap();
        assert_eq!(f.u.shape(), (60, 6));
        assert_eq!(f.v.shape(), (100, 6));
        let at = a.transpose();
        let (g, _) = solve(&at, &cfg).unwrap();
        for (x, y) in f.s.iter().zip(&g.s) {
            assert!((x - y).abs() <= 1e-9 * x);
        }
        // Both runs iterate on the same 60-dimensional side with the same
        // sketch, so the factors agree up to the swap and a per-column sign
        // (the sign convention is pinned on the right factor).
        for j in 0..6 {
            let sign = if f.u.col(j)[0] * g.v.col(j)[0] < 0.0 { -1.0 } else { 1.0 };
            for (x, y) in f.u.col(j).iter().zip(g.v.col(j)) {
                assert!((x - sign * y).abs() < 1e-8);
            }
            for (x, y) in f.v.col(j).iter().zip(g.u.col(j)) {
                assert!((x - sign * y).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn square_takes_direct_path() {
        let a = random_sparse(50, 50, 0.2, 8);
        let cfg = SolverConfig {
            p: 3,
            ..SolverConfig::new(5, Algorithm::Shifted)
        };
        let (f, _) = solve(&a, &cfg).unwrap();
        let (g, _) = shifted_rsvd(&a, &cfg).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn threads_do_not_change_bits() {
        let a = random_sparse(300, 200, 0.05, 6);
        let base = SolverConfig::new(10, Algorithm::Dash);
        let (one, _) = solve(&a, &SolverConfig { threads: Some(1), ..base.clone() }).unwrap();
        let (four, _) = solve(&a, &SolverConfig { threads: Some(4), ..base }).unwrap();
        assert_eq!(one, four);
    }
}
