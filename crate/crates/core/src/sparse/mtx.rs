//! Matrix Market reading and writing.
//!
//! Sparse input must be `coordinate` with field `real`, `integer` or
//! `pattern` and symmetry `general` or `symmetric`. Symmetric files are
//! expanded to both triangles, pattern entries become 1.0, duplicates are
//! summed and zeros dropped. Dense factors travel as `array real general`.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use super::SparseMatrix;
use crate::dense::DenseMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    Real,
    Integer,
    Pattern,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    General,
    Symmetric,
}

/// Parsed banner plus size line of a coordinate file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixMarketHeader {
    pub field: Field,
    pub symmetry: Symmetry,
    pub rows: usize,
    pub cols: usize,
    pub entries: usize,
}

enum Format {
    Coordinate,
    Array,
}

struct Banner {
    format: Format,
    field: Field,
    symmetry: Symmetry,
}

fn parse_banner(line: &str, line_no: usize) -> Result<Banner> {
    let tokens: Vec<String> = line.split_whitespace().map(str::to_ascii_lowercase).collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" {
        return Err(Error::parse(line_no, "expected '%%MatrixMarket matrix <format> <field> <symmetry>'"));
    }
    if tokens[1] != "matrix" {
        return Err(Error::UnsupportedFormat(format!("object '{}'", tokens[1])));
    }
    let format = match tokens[2].as_str() {
        "coordinate" => Format::Coordinate,
        "array" => Format::Array,
        other => return Err(Error::parse(line_no, format!("unknown format '{other}'"))),
    };
    let field = match tokens[3].as_str() {
        "real" | "double" => Field::Real,
        "integer" => Field::Integer,
        "pattern" => Field::Pattern,
        "complex" => return Err(Error::UnsupportedFormat("complex field".into())),
        other => return Err(Error::parse(line_no, format!("unknown field '{other}'"))),
    };
    let symmetry = match tokens[4].as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        "hermitian" | "skew-symmetric" => {
            return Err(Error::UnsupportedFormat(format!("{} symmetry", tokens[4])))
        }
        other => return Err(Error::parse(line_no, format!("unknown symmetry '{other}'"))),
    };
    Ok(Banner {
        format,
        field,
        symmetry,
    })
}

/// Line iterator that skips comments and blank lines and keeps 1-based
/// line numbers for error messages.
struct Lines<R> {
    inner: std::io::Lines<R>,
    line_no: usize,
}

impl<R: BufRead> Lines<R> {
    fn next_raw(&mut self) -> Result<Option<(usize, String)>> {
        match self.inner.next() {
            None => Ok(None),
            Some(Err(e)) => Err(Error::parse(self.line_no + 1, e.to_string())),
            Some(Ok(s)) => {
                self.line_no += 1;
                Ok(Some((self.line_no, s)))
            }
        }
    }

    fn next_data(&mut self) -> Result<Option<(usize, String)>> {
        while let Some((n, s)) = self.next_raw()? {
            let t = s.trim();
            if t.is_empty() || t.starts_with('%') {
                continue;
            }
            return Ok(Some((n, s)));
        }
        Ok(None)
    }
}

fn parse_num<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| Error::parse(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| Error::parse(line, format!("bad {what} '{tok}'")))
}

fn read_header<R: BufRead>(lines: &mut Lines<R>) -> Result<(Banner, usize, Vec<usize>)> {
    let (n, first) = lines
        .next_raw()?
        .ok_or_else(|| Error::parse(1, "empty file"))?;
    let banner = parse_banner(&first, n)?;
    let (n, size) = lines
        .next_data()?
        .ok_or_else(|| Error::parse(n + 1, "missing size line"))?;
    let dims = size
        .split_whitespace()
        .map(|t| t.parse::<usize>().map_err(|_| Error::parse(n, format!("bad size token '{t}'"))))
        .collect::<Result<Vec<_>>>()?;
    Ok((banner, n, dims))
}

/// Parses only the banner and size line of a coordinate stream.
pub fn read_header_only<R: BufRead>(reader: R) -> Result<MatrixMarketHeader> {
    let mut lines = Lines {
        inner: reader.lines(),
        line_no: 0,
    };
    let (banner, size_line, dims) = read_header(&mut lines)?;
    if let Format::Array = banner.format {
        return Err(Error::UnsupportedFormat("array format for sparse input".into()));
    }
    let [rows, cols, entries] = dims[..] else {
        return Err(Error::parse(size_line, "size line must be 'rows cols entries'"));
    };
    Ok(MatrixMarketHeader {
        field: banner.field,
        symmetry: banner.symmetry,
        rows,
        cols,
        entries,
    })
}

/// Reads a coordinate Matrix Market stream.
pub fn read_matrix_market<R: BufRead>(reader: R) -> Result<SparseMatrix> {
    let mut lines = Lines {
        inner: reader.lines(),
        line_no: 0,
    };
    let (banner, size_line, dims) = read_header(&mut lines)?;
    if let Format::Array = banner.format {
        return Err(Error::UnsupportedFormat("array format for sparse input".into()));
    }
    let [rows, cols, entries] = dims[..] else {
        return Err(Error::parse(size_line, "size line must be 'rows cols entries'"));
    };
    if banner.symmetry == Symmetry::Symmetric && rows != cols {
        return Err(Error::parse(size_line, "symmetric matrix must be square"));
    }

    let mut triplets = Vec::with_capacity(match banner.symmetry {
        Symmetry::General => entries,
        Symmetry::Symmetric => 2 * entries,
    });
    for _ in 0..entries {
        let (n, s) = lines
            .next_data()?
            .ok_or_else(|| Error::parse(lines.line_no + 1, format!("expected {entries} entries")))?;
        let mut tok = s.split_whitespace();
        let i: usize = parse_num(tok.next(), n, "row index")?;
        let j: usize = parse_num(tok.next(), n, "column index")?;
        if i == 0 || j == 0 || i > rows || j > cols {
            return Err(Error::parse(n, format!("index ({i}, {j}) outside {rows}x{cols}")));
        }
        let v = match banner.field {
            Field::Pattern => 1.0,
            Field::Integer => parse_num::<i64>(tok.next(), n, "integer value")? as f64,
            Field::Real => parse_num::<f64>(tok.next(), n, "value")?,
        };
        if !v.is_finite() {
            return Err(Error::parse(n, "non-finite value"));
        }
        if tok.next().is_some() {
            return Err(Error::parse(n, "trailing tokens"));
        }
        let (r, c) = (i - 1, j - 1);
        triplets.push((r, c, v));
        if banner.symmetry == Symmetry::Symmetric && r != c {
            triplets.push((c, r, v));
        }
    }
    if let Some((n, _)) = lines.next_data()? {
        return Err(Error::parse(n, format!("more than the declared {entries} entries")));
    }
    SparseMatrix::from_triplets(rows, cols, &triplets)
}

/// Loads a coordinate Matrix Market file and builds the cached transpose.
pub fn load_matrix_market(path: impl AsRef<Path>) -> Result<SparseMatrix> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    Ok(read_matrix_market(BufReader::new(file))?.with_transpose())
}

/// Writes `a` as `coordinate real general`. Values use the shortest
/// representation that parses back to the same bits.
pub fn write_matrix_market<W: Write>(a: &SparseMatrix, mut w: W) -> std::io::Result<()> {
    writeln!(w, "%%MatrixMarket matrix coordinate real general")?;
    writeln!(w, "{} {} {}", a.rows(), a.cols(), a.nnz())?;
    for (r, c, v) in a.triplets() {
        writeln!(w, "{} {} {:?}", r + 1, c + 1, v)?;
    }
    w.flush()
}

pub fn save_matrix_market(a: &SparseMatrix, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_matrix_market(a, BufWriter::new(file)).map_err(|e| Error::io(path, e))
}

/// Writes a dense block as `array real general` (column-major values).
pub fn write_dense_array<W: Write>(m: &DenseMatrix, mut w: W) -> std::io::Result<()> {
    writeln!(w, "%%MatrixMarket matrix array real general")?;
    writeln!(w, "{} {}", m.rows(), m.cols())?;
    for v in m.data() {
        writeln!(w, "{v:?}")?;
    }
    w.flush()
}

pub fn save_dense_array(m: &DenseMatrix, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_dense_array(m, BufWriter::new(file)).map_err(|e| Error::io(path, e))
}

/// Reads an `array real general` stream.
pub fn read_dense_array<R: BufRead>(reader: R) -> Result<DenseMatrix> {
    let mut lines = Lines {
        inner: reader.lines(),
        line_no: 0,
    };
    let (banner, size_line, dims) = read_header(&mut lines)?;
    if !matches!(banner.format, Format::Array) {
        return Err(Error::UnsupportedFormat("expected array format".into()));
    }
    if banner.field == Field::Pattern || banner.symmetry != Symmetry::General {
        return Err(Error::UnsupportedFormat("dense arrays must be real general".into()));
    }
    let [rows, cols] = dims[..] else {
        return Err(Error::parse(size_line, "size line must be 'rows cols'"));
    };
    let mut data = Vec::with_capacity(rows * cols);
    while data.len() < rows * cols {
        let (n, s) = lines
            .next_data()?
            .ok_or_else(|| Error::parse(lines.line_no + 1, format!("expected {} values", rows * cols)))?;
        for tok in s.split_whitespace() {
            let v: f64 = parse_num(Some(tok), n, "value")?;
            if !v.is_finite() {
                return Err(Error::parse(n, "non-finite value"));
            }
            data.push(v);
        }
    }
    if data.len() != rows * cols {
        return Err(Error::parse(lines.line_no, "too many values"));
    }
    if let Some((n, _)) = lines.next_data()? {
        return Err(Error::parse(n, "trailing data"));
    }
    DenseMatrix::new(rows, cols, data)
}

pub fn load_dense_array(path: impl AsRef<Path>) -> Result<DenseMatrix> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_dense_array(BufReader::new(file))
}
