//! Accuracy metrics, error bounds and flop models.

mod bounds;
mod flops;
mod metrics;

pub use bounds::{failure_probability, lemma6_bound, theorem1_bound, Bound, BoundParams};
pub use flops::{flop_estimate, FlopConstants, FlopModel, FlopProblem};
pub use metrics::{
    eps_pve, eps_res, eps_sigma, eps_spec, eps_spec_with, spectral_norm_estimate,
    ReferenceSpectrum, SpectrumSource, DEFAULT_SPEC_ITERS,
};

use crate::error::Result;
use crate::factors::TruncatedSvd;
use crate::operator::LinearOperator;

/// The four accuracy metrics of one result.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metrics {
    pub pve: f64,
    pub res: f64,
    pub spec: f64,
    pub sigma: f64,
}

impl Metrics {
    pub const CSV_HEADER: &'static str = "eps_pve,eps_res,eps_spec,eps_sigma";

    pub fn to_csv(&self) -> String {
        format!("{:e},{:e},{:e},{:e}", self.pve, self.res, self.spec, self.sigma)
    }
}

pub fn all_metrics<O: LinearOperator + ?Sized>(
    a: &O,
    result: &TruncatedSvd,
    reference: &ReferenceSpectrum,
) -> Result<Metrics> {
    Ok(Metrics {
        pve: eps_pve(a, &result.u, reference)?,
        res: eps_res(a, result, reference)?,
        spec: eps_spec(a, result, reference)?,
        sigma: eps_sigma(&result.s, reference)?,
    })
}
