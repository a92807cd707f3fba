use crate::error::{Error, Result};

/// Per-kernel flop constants: `c_mul` for products, `c_qr` for QR,
/// `c_svd` for a dense economy SVD, `c_eig` for a symmetric eigensolve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlopConstants {
    pub c_mul: f64,
    pub c_qr: f64,
    pub c_svd: f64,
    pub c_eig: f64,
}

impl Default for FlopConstants {
    /// Textbook dense-kernel constants. Tunable, not measured.
    fn default() -> Self {
        Self {
            c_mul: 2.0,
            c_qr: 4.0,
            c_svd: 22.0,
            c_eig: 9.0,
        }
    }
}

impl FlopConstants {
    pub fn new(c_mul: f64, c_qr: f64, c_svd: f64, c_eig: f64) -> Result<Self> {
        for (name, v) in [("c_mul", c_mul), ("c_qr", c_qr), ("c_svd", c_svd), ("c_eig", c_eig)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(Self {
            c_mul,
            c_qr,
            c_svd,
            c_eig,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlopModel {
    /// QR-orthonormalized power iteration on `AAᵀ`.
    Basic,
    /// Gram-eigensolver iteration on `AᵀA` with shifts.
    Dash,
}

/// Problem size for [`flop_estimate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FlopProblem {
    pub m: usize,
    pub n: usize,
    pub nnz: usize,
    pub l: usize,
    pub k: usize,
    pub p: usize,
}

pub fn flop_estimate(model: FlopModel, pr: FlopProblem, c: FlopConstants) -> f64 {
    let m = pr.m as f64;
    let n = pr.n as f64;
    let nnz = pr.nnz as f64;
    let l = pr.l as f64;
    let k = pr.k as f64;
    let p = pr.p as f64;
    let products = (2.0 * p + 2.0) * c.c_mul * nnz * l;
    match model {
        FlopModel::Basic => {
            products + (p + 1.0) * c.c_qr * m * l * l + c.c_svd * n * l * l + c.c_mul * m * l * k
        }
        FlopModel::Dash => {
            products
                + (p + 1.0) * (2.0 * c.c_mul * n * l * l + c.c_eig * l.powi(3))
                + 2.0 * c.c_mul * m * l * l
                + c.c_eig * l.powi(3)
                + p * c.c_mul * n * l
                + c.c_mul * n * l * k
        }
    }
}
