//! Sparse input matrices: CSR storage, products with dense blocks, and
//! Matrix Market I/O.

mod cache;
mod csr;
mod mtx;

pub use cache::{load_cache, read_cache, save_cache, write_cache};
pub use csr::{spmm, transpose, SparseMatrix};
pub use mtx::{
    load_dense_array, load_matrix_market, read_dense_array, read_header_only, read_matrix_market,
    save_dense_array,
    save_matrix_market, write_dense_array, write_matrix_market, Field, MatrixMarketHeader,
    Symmetry,
};

/// Loads either a `DSH1` cache or a Matrix Market file, sniffing the first
/// bytes.
pub fn load_any(path: impl AsRef<std::path::Path>) -> crate::Result<SparseMatrix> {
    use std::io::Read;
    let path = path.as_ref();
    let mut head = [0u8; 4];
    let n = std::fs::File::open(path)
        .and_then(|mut f| f.read(&mut head))
        .map_err(|e| crate::Error::io(path, e))?;
    if n == 4 && &head == b"DSH1" {
        load_cache(path)
    } else {
        load_matrix_market(path)
    }
}
