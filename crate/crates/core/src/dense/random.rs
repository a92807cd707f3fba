//! Seeded Gaussian test matrices.
//!
//! The stream is fully specified so other implementations can reproduce it
//! bit for bit:
//!
//! 1. The generator is xoshiro256++ seeded with `seed_from_u64(seed)`, i.e. the
//!    four state words are successive SplitMix64 outputs of `seed`.
//! 2. A uniform is `(next_u64() >> 11) as f64 * 2^-53`, a value in `[0, 1)`.
//! 3. Normals come in Box–Muller pairs from two uniforms `u1, u2`:
//!    `r = sqrt(-2 ln(1 - u1))`, `z0 = r cos(2π u2)`, `z1 = r sin(2π u2)`.
//! 4. Entries are filled in column-major order, `z0` first. When the entry
//!    count is odd the final `z1` is discarded.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use super::DenseMatrix;

/// Normal deviates following the documented stream.
pub struct GaussianStream {
    rng: Xoshiro256PlusPlus,
    spare: Option<f64>,
}

impl GaussianStream {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: Xoshiro256PlusPlus::seed_from_u64(seed),
            spare: None,
        }
    }

    /// Uniform in `[0, 1)` with 53 random bits.
    pub fn next_uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn next_normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = self.next_uniform();
        let u2 = self.next_uniform();
        let r = (-2.0 * (1.0 - u1).ln()).sqrt();
        let (s, c) = (std::f64::consts::TAU * u2).sin_cos();
        self.spare = Some(r * s);
        r * c
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }
}

/// `rows x cols` matrix of i.i.d. standard normal entries.
pub fn gaussian_matrix(rows: usize, cols: usize, seed: u64) -> DenseMatrix {
    let mut stream = GaussianStream::new(seed);
    let data = (0..rows * cols).map(|_| stream.next_normal()).collect();
    DenseMatrix::from_vec_unchecked(rows, cols, data)
}
