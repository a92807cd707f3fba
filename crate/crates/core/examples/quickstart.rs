//! Top singular triplets of a random sparse matrix with the default
//! accuracy-controlled solver.
//!
//! ```text
//! cargo run --release --example quickstart
//! ```

use dashsvd::synth::random_sparse;
use dashsvd::{solve, Algorithm, SolverConfig};

fn main() -> dashsvd::Result<()> {
    let a = random_sparse(20_000, 5_000, 1e-3, 42).with_transpose();
    println!("A: {} x {}, nnz = {}", a.rows(), a.cols(), a.nnz());

    let cfg = SolverConfig {
        tol: 1e-2,
        ..SolverConfig::new(10, Algorithm::Dash)
    };
    let (svd, trace) = solve(&a, &cfg)?;

    println!(
        "stopped after {} iterations ({})",
        trace.stopped_at, trace.stop_reason
    );
    for (i, s) in svd.s.iter().enumerate() {
        println!("sigma_{:<2} = {s:.6}", i + 1);
    }
    println!("U: {:?}, V: {:?}", svd.u.shape(), svd.v.shape());
    Ok(())
}
