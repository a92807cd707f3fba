//! Probabilistic error bounds with and without shifts, and the flop
//! models of both algorithms.
//!
//! ```text
//! cargo run --release --example bounds_and_flops
//! ```

use dashsvd::analysis::{
    flop_estimate, lemma6_bound, theorem1_bound, BoundParams, FlopConstants, FlopModel,
    FlopProblem, ReferenceSpectrum,
};
use dashsvd::synth::with_spectrum;
use dashsvd::{solve, Algorithm, SolverConfig};

fn main() -> dashsvd::Result<()> {
    let (m, n, k, s) = (400, 200, 20, 10);
    let sig: Vec<f64> = (1..=n).map(|i| (i as f64).powf(-0.6)).collect();
    let reference = ReferenceSpectrum::new(sig.clone())?;
    let a = with_spectrum(m, n, &sig, 3)?;

    println!("{:>2}  {:>10}  {:>10}  {:>10}", "p", "shifted", "unshifted", "phi");
    for p in [1, 2, 4, 8] {
        let cfg = SolverConfig { p, s: Some(s), ..SolverConfig::new(k, Algorithm::Shifted) };
        let (_, trace) = solve(&a, &cfg)?;
        let bp = BoundParams {
            j: k - 1,
            beta: 2.0,
            gamma: 2.0,
            k,
            l: k + s,
            n,
            p,
            alphas: trace.alphas,
        };
        let shifted = theorem1_bound(&reference, &bp)?;
        let plain = lemma6_bound(&reference, &bp)?;
        println!("{p:>2}  {:>10.4}  {:>10.4}  {:>10.2e}", shifted.bound, plain.bound, shifted.phi);
    }

    let c = FlopConstants::default();
    println!("\nflops for a 1e6 x 1e5 matrix with 1e7 nonzeros, k = 100:");
    for p in [5, 10, 20] {
        let pr = FlopProblem { m: 1_000_000, n: 100_000, nnz: 10_000_000, l: 150, k: 100, p };
        println!(
            "p = {p:>2}: basic {:.3e}, shifted {:.3e}",
            flop_estimate(FlopModel::Basic, pr, c),
            flop_estimate(FlopModel::Dash, pr, c)
        );
    }
    Ok(())
}
