use std::io::BufRead;
use std::path::Path;

use crate::dense::{gaussian_matrix, oracle_svd, Accumulation, DenseMatrix, ORACLE_MAX_DIM};
use crate::error::{Error, Result};
use crate::factors::TruncatedSvd;
use crate::operator::{LinearOperator, Residual};

/// Power iterations used by [`eps_spec`].
pub const DEFAULT_SPEC_ITERS: usize = 300;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumSource {
    Oracle,
    File,
    Given,
}

/// Known singular values of `A`, descending.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceSpectrum {
    sigmas: Vec<f64>,
    source: SpectrumSource,
}

impl ReferenceSpectrum {
    pub fn new(sigmas: Vec<f64>) -> Result<Self> {
        Self::with_source(sigmas, SpectrumSource::Given)
    }

    fn with_source(sigmas: Vec<f64>, source: SpectrumSource) -> Result<Self> {
        if let Some(i) = sigmas.iter().position(|s| !(s.is_finite() && *s >= 0.0)) {
            return Err(Error::DegenerateReference(format!(
                "sigma {} = {} is not a finite non-negative number",
                i + 1,
                sigmas[i]
            )));
        }
        let slack = 1e-12 * sigmas.first().copied().unwrap_or(0.0);
        if let Some(i) = sigmas.windows(2).position(|w| w[1] > w[0] + slack) {
            return Err(Error::DegenerateReference(format!(
                "sigmas not descending at position {}",
                i + 2
            )));
        }
        Ok(Self { sigmas, source })
    }

    /// Full spectrum from the Jacobi oracle. Refuses inputs whose smaller
    /// dimension exceeds [`ORACLE_MAX_DIM`].
    pub fn from_oracle<O: LinearOperator + ?Sized>(a: &O) -> Result<Self> {
        let (m, n) = a.shape();
        if m.min(n) > ORACLE_MAX_DIM {
            return Err(Error::Shape(format!(
                "reference oracle refuses {m}x{n}: smaller dimension above {ORACLE_MAX_DIM}; supply a spectrum file"
            )));
        }
        Self::with_source(oracle_svd(&a.to_dense())?.s, SpectrumSource::Oracle)
    }

    /// One value per line; blank lines and `#` comments are skipped.
    pub fn read<R: BufRead>(reader: R) -> Result<Self> {
        let mut sigmas = Vec::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| Error::parse(i + 1, e.to_string()))?;
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            let v: f64 = t
                .parse()
                .map_err(|_| Error::parse(i + 1, format!("bad singular value '{t}'")))?;
            sigmas.push(v);
        }
        Self::with_source(sigmas, SpectrumSource::File)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let f = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read(std::io::BufReader::new(f))
    }

    pub fn sigmas(&self) -> &[f64] {
        &self.sigmas
    }

    pub fn source(&self) -> SpectrumSource {
        self.source
    }

    pub fn len(&self) -> usize {
        self.sigmas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigmas.is_empty()
    }

    /// `σ_i`, 1-based.
    pub fn sigma(&self, i: usize) -> f64 {
        self.sigmas[i - 1]
    }

    pub(crate) fn require(&self, count: usize) -> Result<()> {
        if self.sigmas.len() < count {
            return Err(Error::DegenerateReference(format!(
                "need {count} reference values, have {}",
                self.sigmas.len()
            )));
        }
        Ok(())
    }

    fn positive(&self, i: usize) -> Result<f64> {
        let s = self.sigma(i);
        if s > 0.0 {
            Ok(s)
        } else {
            Err(Error::DegenerateReference(format!("sigma_{i} is zero")))
        }
    }
}

fn col_norm2(m: &DenseMatrix, j: usize) -> f64 {
    m.col(j).iter().map(|x| x * x).sum()
}

/// `max_{i≤k} |σ_i² − ‖Aᵀû_i‖²| / σ_{k+1}²`.
pub fn eps_pve<O: LinearOperator + ?Sized>(
    a: &O,
    u_hat: &DenseMatrix,
    reference: &ReferenceSpectrum,
) -> Result<f64> {
    let k = u_hat.cols();
    reference.require(k + 1)?;
    let denom = reference.positive(k + 1)?.powi(2);
    let atu = a.apply_t(u_hat, Accumulation::Ordered)?;
    Ok((0..k)
        .map(|i| (reference.sigma(i + 1).powi(2) - col_norm2(&atu, i)).abs() / denom)
        .fold(0.0, f64::max))
}

/// `max_{i≤k} ‖Aᵀû_i − σ̂_i v̂_i‖ / σ_i`.
pub fn eps_res<O: LinearOperator + ?Sized>(
    a: &O,
    result: &TruncatedSvd,
    reference: &ReferenceSpectrum,
) -> Result<f64> {
    let k = result.rank();
    reference.require(k)?;
    let mut r = a.apply_t(&result.u, Accumulation::Ordered)?;
    let mut vs = result.v.clone();
    vs.scale_cols(&result.s);
    r.axpy(-1.0, &vs)?;
    let mut worst: f64 = 0.0;
    for i in 0..k {
        worst = worst.max(col_norm2(&r, i).sqrt() / reference.positive(i + 1)?);
    }
    Ok(worst)
}

/// `(‖A − ÛŜV̂ᵀ‖₂ − σ_{k+1}) / σ_{k+1}` with the norm from
/// [`spectral_norm_estimate`] ([`DEFAULT_SPEC_ITERS`] iterations, seed 0).
pub fn eps_spec<O: LinearOperator + ?Sized>(
    a: &O,
    result: &TruncatedSvd,
    reference: &ReferenceSpectrum,
) -> Result<f64> {
    eps_spec_with(a, result, reference, DEFAULT_SPEC_ITERS, 0)
}

pub fn eps_spec_with<O: LinearOperator + ?Sized>(
    a: &O,
    result: &TruncatedSvd,
    reference: &ReferenceSpectrum,
    iters: usize,
    seed: u64,
) -> Result<f64> {
    let k = result.rank();
    reference.require(k + 1)?;
    let sk1 = reference.positive(k + 1)?;
    let residual = Residual::new(a, &result.u, &result.s, &result.v)?;
    let norm = spectral_norm_estimate(&residual, iters, seed)?;
    Ok((norm - sk1) / sk1)
}

/// `max_{i≤k} |σ_i − σ̂_i| / σ_i`.
pub fn eps_sigma(s_hat: &[f64], reference: &ReferenceSpectrum) -> Result<f64> {
    reference.require(s_hat.len())?;
    let mut worst: f64 = 0.0;
    for (i, sh) in s_hat.iter().enumerate() {
        let s = reference.positive(i + 1)?;
        worst = worst.max((s - sh).abs() / s);
    }
    Ok(worst)
}

/// Power-method estimate of the largest singular value of `op`, starting
/// from a seeded Gaussian vector. Returns the largest `‖op·x‖` seen over
/// unit iterates `x`, which never exceeds the true norm; the gap shrinks
/// with `iters` at the rate `(σ₂/σ₁)²` per iteration.
pub fn spectral_norm_estimate<O: LinearOperator + ?Sized>(op: &O, iters: usize, seed: u64) -> Result<f64> {
    let n = op.cols();
    if n == 0 || op.rows() == 0 {
        return Ok(0.0);
    }
    let acc = Accumulation::Ordered;
    let mut x = gaussian_matrix(n, 1, seed);
    let norm = col_norm2(&x, 0).sqrt();
    x.scale(1.0 / norm);
    let mut best: f64 = 0.0;
    for _ in 0..iters.max(1) {
        let y = op.apply(&x, acc)?;
        best = best.max(col_norm2(&y, 0).sqrt());
        let mut z = op.apply_t(&y, acc)?;
        let nz = col_norm2(&z, 0).sqrt();
        if nz == 0.0 {
            break;
        }
        z.scale(1.0 / nz);
        x = z;
    }
    Ok(best)
}
