//! Probabilistic bounds on `‖QQᵀA − A‖₂` for the basis `Q` produced by the
//! basic and the shifted power iteration.
//!
//! Both bounds hold with probability at least `1 − φ` for the same `φ`.
//! Shifts enter as squared-singular-value offsets: `α_c` is the shift used
//! by the `c`-th iteration (`α_1 = 0` for the dynamic rule).

use super::ReferenceSpectrum;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct BoundParams {
    /// Pivot index, `1 <= j < k`.
    pub j: usize,
    pub beta: f64,
    pub gamma: f64,
    pub k: usize,
    /// Sketch width `k + s`, at most `n − k`.
    pub l: usize,
    /// Smaller dimension of `A`.
    pub n: usize,
    pub p: usize,
    /// One shift per iteration; only read by [`theorem1_bound`].
    pub alphas: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bound {
    pub bound: f64,
    /// Failure probability.
    pub phi: f64,
}

/// Failure probability shared by both bounds.
pub fn failure_probability(bp: &BoundParams) -> f64 {
    use std::f64::consts::{E, PI};
    let t = (bp.l + 1 - bp.j) as f64;
    let g2 = bp.gamma * bp.gamma;
    // Powers in log space: the exponents reach n − k.
    let first = (-(2.0 * PI * t).ln() / 2.0 + t * (E / (t * bp.beta)).ln()).exp();
    let log_base = (2.0 * g2).ln() - (g2 - 1.0);
    let nk = (bp.n - bp.k) as f64;
    let l = bp.l as f64;
    let tail = (-(PI * nk).ln() / 2.0 + nk * log_base).exp()
        + (-(PI * l).ln() / 2.0 + l * log_base).exp();
    first + tail / (4.0 * bp.gamma * (g2 - 1.0))
}

// Negated comparisons so NaN parameters fail the hypotheses.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
fn check(sig: &ReferenceSpectrum, bp: &BoundParams) -> Result<f64> {
    let fail = |m: String| Err(Error::Hypothesis(m));
    if bp.j == 0 || bp.j >= bp.k {
        return fail(format!("need 1 <= j < k, got j = {}, k = {}", bp.j, bp.k));
    }
    if !(bp.beta > 1.0) {
        return fail(format!("need beta > 1, got {}", bp.beta));
    }
    if !(bp.gamma > 1.0) {
        return fail(format!("need gamma > 1, got {}", bp.gamma));
    }
    if bp.l < bp.k || bp.k > bp.n || bp.l > bp.n - bp.k {
        return fail(format!("need k <= l <= n - k, got k = {}, l = {}, n = {}", bp.k, bp.l, bp.n));
    }
    if sig.len() < bp.k + 1 {
        return fail(format!("need sigma_1..sigma_{}, have {}", bp.k + 1, sig.len()));
    }
    if !(sig.sigma(bp.j) > 0.0) {
        return fail(format!("sigma_{} must be positive", bp.j));
    }
    let phi = failure_probability(bp);
    if !(phi <= 1.0) {
        return fail(format!("phi = {phi} exceeds 1"));
    }
    Ok(phi)
}

fn assemble(sig: &ReferenceSpectrum, bp: &BoundParams, head: f64, tail: f64) -> f64 {
    let bg2 = (bp.beta * bp.gamma).powi(2);
    let l = bp.l as f64;
    let nk = (bp.n - bp.k) as f64;
    let sj1 = sig.sigma(bp.j + 1);
    let sk1 = sig.sigma(bp.k + 1);
    2.0 * ((2.0 * l * l * bg2 * head + 1.0) * sj1 * sj1 + (2.0 * l * nk * bg2 * tail + 1.0) * sk1 * sk1).sqrt()
}

/// Bound for the shifted iteration with shifts `bp.alphas`.
pub fn theorem1_bound(sig: &ReferenceSpectrum, bp: &BoundParams) -> Result<Bound> {
    let phi = check(sig, bp)?;
    if bp.alphas.len() != bp.p {
        return Err(Error::Hypothesis(format!(
            "{} shifts for p = {}",
            bp.alphas.len(),
            bp.p
        )));
    }
    let sj2 = sig.sigma(bp.j).powi(2);
    let sj12 = sig.sigma(bp.j + 1).powi(2);
    let sk12 = sig.sigma(bp.k + 1).powi(2);
    let (mut head, mut tail) = (1.0, 1.0);
    for (c, &a) in bp.alphas.iter().enumerate() {
        if !(a >= 0.0 && a < sj2) {
            return Err(Error::Hypothesis(format!(
                "shift {} = {a} outside [0, sigma_j^2)",
                c + 1
            )));
        }
        head *= ((sj12 - a) / (sj2 - a)).powi(2);
        tail *= ((sk12 - a) / (sj2 - a)).powi(2);
    }
    Ok(Bound {
        bound: assemble(sig, bp, head, tail),
        phi,
    })
}

/// Bound for the unshifted (basic) iteration.
pub fn lemma6_bound(sig: &ReferenceSpectrum, bp: &BoundParams) -> Result<Bound> {
    let phi = check(sig, bp)?;
    let sj = sig.sigma(bp.j);
    let e = 4 * bp.p as i32;
    let head = (sig.sigma(bp.j + 1) / sj).powi(e);
    let tail = (sig.sigma(bp.k + 1) / sj).powi(e);
    Ok(Bound {
        bound: assemble(sig, bp, head, tail),
        phi,
    })
}
