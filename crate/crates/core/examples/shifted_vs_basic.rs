//! Error versus number of power iterations on a matrix with slowly
//! decaying spectrum (σ_i = 1/√i), for the plain and the shifted power
//! iteration. Checkpoints reuse one run per algorithm.
//!
//! ```text
//! cargo run --release --example shifted_vs_basic
//! ```

use dashsvd::analysis::{eps_pve, ReferenceSpectrum};
use dashsvd::rsvd::{BasicIteration, ShiftedIteration};
use dashsvd::synth::{dense2, dense2_spectrum};
use dashsvd::{Algorithm, SolverConfig};

fn main() -> dashsvd::Result<()> {
    let n = 600;
    let a = dense2(n, 0);
    let reference = ReferenceSpectrum::new(dense2_spectrum(n))?;
    let cfg = |alg| SolverConfig {
        s: Some(30),
        seed: 1,
        ..SolverConfig::new(60, alg)
    };

    let basic_cfg = cfg(Algorithm::Basic);
    let shifted_cfg = cfg(Algorithm::Shifted);
    let mut basic = BasicIteration::new(&a, &basic_cfg)?;
    let mut shifted = ShiftedIteration::new(&a, &shifted_cfg)?;

    println!("{:>3}  {:>12}  {:>12}  {:>8}  {:>10}", "p", "basic", "shifted", "ratio", "shift");
    for p in (0..=16).step_by(2) {
        while basic.iteration() < p {
            basic.step()?;
        }
        while shifted.state().iteration < p {
            shifted.step()?;
            shifted.advance_shift();
        }
        let eb = eps_pve(&a, &basic.finalize()?.u, &reference)?;
        let es = eps_pve(&a, &shifted.finalize()?.u, &reference)?;
        println!(
            "{p:>3}  {eb:>12.3e}  {es:>12.3e}  {:>8.3}  {:>10.3e}",
            es / eb,
            shifted.state().alpha
        );
    }
    Ok(())
}
