//! Binary CSR cache for fast reloads.
//!
//! Layout, all little-endian: the magic `DSH1`, then `rows`, `cols`, `nnz`
//! as u64, then `rows + 1` u64 offsets, `nnz` u64 column indices and `nnz`
//! f64 values. Internal convenience only; the layout may change.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::SparseMatrix;
use crate::error::{Error, Result};

const MAGIC: &[u8; 4] = b"DSH1";

pub fn write_cache<W: Write>(a: &SparseMatrix, mut w: W) -> std::io::Result<()> {
    w.write_all(MAGIC)?;
    for v in [a.rows(), a.cols(), a.nnz()] {
        w.write_all(&(v as u64).to_le_bytes())?;
    }
    for &v in a.row_offsets().iter().chain(a.col_indices()) {
        w.write_all(&(v as u64).to_le_bytes())?;
    }
    for v in a.values() {
        w.write_all(&v.to_le_bytes())?;
    }
    w.flush()
}

fn read_u64<R: Read>(r: &mut R) -> std::io::Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

fn read_usizes<R: Read>(r: &mut R, count: usize) -> std::io::Result<Vec<usize>> {
    (0..count).map(|_| read_u64(r).map(|v| v as usize)).collect()
}

/// Reads a cache and re-validates every CSR invariant.
pub fn read_cache<R: Read>(mut r: R) -> Result<SparseMatrix> {
    let corrupt = |e: std::io::Error| Error::UnsupportedFormat(format!("truncated cache: {e}"));
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic).map_err(corrupt)?;
    if &magic != MAGIC {
        return Err(Error::UnsupportedFormat("missing DSH1 magic".into()));
    }
    let rows = read_u64(&mut r).map_err(corrupt)? as usize;
    let cols = read_u64(&mut r).map_err(corrupt)? as usize;
    let nnz = read_u64(&mut r).map_err(corrupt)? as usize;
    let offsets = read_usizes(&mut r, rows + 1).map_err(corrupt)?;
    let indices = read_usizes(&mut r, nnz).map_err(corrupt)?;
    let values = (0..nnz)
        .map(|_| read_u64(&mut r).map(f64::from_bits))
        .collect::<std::io::Result<Vec<_>>>()
        .map_err(corrupt)?;
    SparseMatrix::from_csr(rows, cols, offsets, indices, values)
}

pub fn save_cache(a: &SparseMatrix, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_cache(a, BufWriter::new(file)).map_err(|e| Error::io(path, e))
}

pub fn load_cache(path: impl AsRef<Path>) -> Result<SparseMatrix> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    Ok(read_cache(BufReader::new(file))?.with_transpose())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::random_sparse;

    #[test]
    fn round_trip() {
        let a = random_sparse(37, 21, 0.2, 4);
        let mut buf = Vec::new();
        write_cache(&a, &mut buf).unwrap();
        assert_eq!(&buf[..4], b"DSH1");
        assert_eq!(read_cache(buf.as_slice()).unwrap(), a);
    }

    #[test]
    fn rejects_garbage() {
        assert!(read_cache(&b"DSH2aaaaaaaa"[..]).is_err());
        let a = random_sparse(5, 5, 0.5, 1);
        let mut buf = Vec::new();
        write_cache(&a, &mut buf).unwrap();
        buf.truncate(buf.len() - 3);
        assert!(read_cache(buf.as_slice()).is_err());
    }
}
