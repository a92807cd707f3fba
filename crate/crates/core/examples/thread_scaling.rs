//! Wall time per phase for different thread counts. In deterministic mode
//! the factors are bitwise identical across thread counts; turning it off
//! allows unordered reductions.
//!
//! ```text
//! cargo run --release --example thread_scaling
//! ```

use dashsvd::synth::random_sparse;
use dashsvd::{solve_timed, Algorithm, SolverConfig};

fn main() -> dashsvd::Result<()> {
    let a = random_sparse(50_000, 20_000, 2e-4, 3).with_transpose();
    println!("A: {} x {}, nnz = {}", a.rows(), a.cols(), a.nnz());
    let cores = std::thread::available_parallelism().map_or(1, |n| n.get());

    let mut first = None;
    let mut threads = 1;
    while threads <= cores.max(4) {
        for deterministic in [true, false] {
            let cfg = SolverConfig {
                threads: Some(threads),
                deterministic,
                ..SolverConfig::new(50, Algorithm::Dash)
            };
            let (f, trace, times) = solve_timed(&a, &cfg)?;
            let same = if deterministic {
                let same = first.as_ref().is_none_or(|g| *g == f);
                first.get_or_insert(f);
                format!("{same}")
            } else {
                "-".into()
            };
            println!(
                "threads {threads:>2} deterministic {deterministic:<5}  iterate {:>8.3}s  finalize {:>7.3}s  N_p {:>2}  bitwise same as 1 thread: {same}",
                times.iterate.as_secs_f64(),
                times.finalize.as_secs_f64(),
                trace.stopped_at,
            );
        }
        threads *= 2;
    }
    Ok(())
}
