//! The four accuracy metrics for a computed truncated SVD, against a
//! reference spectrum from the dense oracle or from a file.
//!
//! ```text
//! cargo run --release --example error_metrics
//! ```

use dashsvd::analysis::{all_metrics, Metrics, ReferenceSpectrum};
use dashsvd::synth::random_sparse;
use dashsvd::{solve, Algorithm, SolverConfig};

fn main() -> dashsvd::Result<()> {
    let a = random_sparse(1000, 600, 0.02, 11).with_transpose();
    let oracle = ReferenceSpectrum::from_oracle(&a)?;

    println!("alg,p,{}", Metrics::CSV_HEADER);
    for alg in [Algorithm::Basic, Algorithm::Shifted] {
        for p in [0, 2, 6] {
            let cfg = SolverConfig { p, ..SolverConfig::new(20, alg) };
            let (f, _) = solve(&a, &cfg)?;
            println!("{alg},{p},{}", all_metrics(&a, &f, &oracle)?.to_csv());
        }
    }

    // A spectrum file holds one value per line; comments and blanks are
    // skipped.
    let text: String = oracle
        .sigmas()
        .iter()
        .take(25)
        .map(|s| format!("{s:e}\n"))
        .collect();
    let from_file = ReferenceSpectrum::read(format!("# top 25\n{text}").as_bytes())?;
    let (f, _) = solve(&a, &SolverConfig::new(20, Algorithm::Dash))?;
    println!("dash,-,{}", all_metrics(&a, &f, &from_file)?.to_csv());
    Ok(())
}
