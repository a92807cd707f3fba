//! Reading and writing Matrix Market files, plus the binary CSR cache for
//! fast reloads.
//!
//! With an argument, loads that file; otherwise writes a small matrix to a
//! temporary directory first.
//!
//! ```text
//! cargo run --release --example matrix_market -- path/to/matrix.mtx
//! ```

use std::path::PathBuf;
use std::time::Instant;

use dashsvd::sparse::{load_any, read_header_only, save_cache, save_matrix_market, SparseMatrix};

fn main() -> dashsvd::Result<()> {
    let dir = std::env::temp_dir().join(format!("dashsvd-mm-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| dashsvd::Error::Io { path: dir.clone(), source: e })?;

    let path = match std::env::args_os().nth(1) {
        Some(p) => PathBuf::from(p),
        None => {
            let a = SparseMatrix::from_triplets(
                4,
                3,
                &[(0, 0, 4.0), (1, 1, -2.0), (3, 2, 0.5), (0, 2, 1.0), (0, 0, 1.0)],
            )?;
            let p = dir.join("small.mtx");
            save_matrix_market(&a, &p)?;
            print!("{}", std::fs::read_to_string(&p).unwrap_or_default());
            p
        }
    };

    let file = std::fs::File::open(&path).map_err(|e| dashsvd::Error::Io { path: path.clone(), source: e })?;
    let header = read_header_only(std::io::BufReader::new(file))?;
    println!("header: {header:?}");

    let t = Instant::now();
    let a = load_any(&path)?;
    println!("parsed {} x {} ({} nnz) in {:?}", a.rows(), a.cols(), a.nnz(), t.elapsed());

    let cache = dir.join("matrix.dsh");
    save_cache(&a, &cache)?;
    let t = Instant::now();
    let b = load_any(&cache)?;
    println!("reloaded from cache in {:?}, identical: {}", t.elapsed(), a == b);

    let _ = std::fs::remove_dir_all(&dir);
    Ok(())
}
