//! Tolerance-driven stopping: each tolerance picks its own iteration count,
//! and the achieved per-vector error tracks it.
//!
//! ```text
//! cargo run --release --example accuracy_control
//! ```

use dashsvd::analysis::{eps_pve, ReferenceSpectrum};
use dashsvd::synth::random_sparse;
use dashsvd::{solve, Algorithm, SolverConfig};

fn main() -> dashsvd::Result<()> {
    let a = random_sparse(1500, 800, 0.01, 5).with_transpose();
    let reference = ReferenceSpectrum::from_oracle(&a)?;

    println!("{:>8}  {:>4}  {:>14}  {:>10}", "tol", "N_p", "stop", "eps_pve");
    for tol in [1e-1, 3e-2, 1e-2, 3e-3, 1e-3] {
        let cfg = SolverConfig {
            tol,
            record_history: true,
            ..SolverConfig::new(30, Algorithm::Dash)
        };
        let (f, trace) = solve(&a, &cfg)?;
        let e = eps_pve(&a, &f.u, &reference)?;
        println!(
            "{tol:>8.0e}  {:>4}  {:>14}  {e:>10.3e}",
            trace.stopped_at,
            trace.stop_reason.to_string()
        );
    }

    // The cap always wins when it is smaller than what the tolerance needs.
    let capped = SolverConfig {
        tol: 1e-6,
        p_max: 3,
        ..SolverConfig::new(30, Algorithm::Dash)
    };
    let (_, trace) = solve(&a, &capped)?;
    println!("tol 1e-6 with p_max 3: {} after {}", trace.stop_reason, trace.stopped_at);
    Ok(())
}
