//! Dense kernels: column-major blocks, Gaussian sketches, symmetric
//! eigendecomposition, Gram-based economy SVD, Householder QR and the
//! Jacobi reference SVD.

mod eig;
mod eigsvd;
mod jacobi;
mod matrix;
mod qr;
mod random;

pub use eig::{sym_eig, EigenPair};
pub use eigsvd::{eig_svd, eig_svd_with, gram_rank_floor};
pub use jacobi::{oracle_svd, ORACLE_MAX_DIM};
pub use matrix::{Accumulation, DenseMatrix};
pub use qr::{qr_orth, qr_svd};
pub use random::{gaussian_matrix, GaussianStream};
