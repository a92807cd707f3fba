//! Truncated SVD of large sparse matrices.
//!
//! Randomized subspace iteration on `AᵀA` (or `AAᵀ`, whichever is smaller)
//! with a shift that grows as the iteration proceeds, Gram-eigenvalue
//! orthonormalization, and a stopping rule on the per-vector error that
//! needs no extra matrix products.
//!
//! ```
//! use dashsvd::synth::random_sparse;
//! use dashsvd::{solve, Algorithm, SolverConfig};
//!
//! let a = random_sparse(300, 200, 0.05, 1);
//! let (svd, trace) = solve(&a, &SolverConfig::new(5, Algorithm::Dash))?;
//! assert_eq!(svd.s.len(), 5);
//! assert!(svd.s.windows(2).all(|w| w[0] >= w[1]));
//! println!("{} iterations, stopped by {}", trace.stopped_at, trace.stop_reason);
//! # Ok::<(), dashsvd::Error>(())
//! ```
//!
//! Anything implementing [`LinearOperator`] can be decomposed; sparse CSR
//! and dense matrices are provided. [`analysis`] has the accuracy metrics,
//! error bounds and flop models, [`cli`] backs the `dashsvd` binary.

pub mod analysis;
pub mod cli;
pub mod dense;
pub mod error;
pub mod factors;
pub mod operator;
pub mod rsvd;
pub mod sparse;
pub mod synth;

pub use dense::DenseMatrix;
pub use error::{Error, Result};
pub use factors::TruncatedSvd;
pub use operator::LinearOperator;
pub use rsvd::{solve, solve_timed, Algorithm, ShiftTrace, SolverConfig, StopReason};
pub use sparse::SparseMatrix;
