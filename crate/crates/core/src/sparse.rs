//! Compressed sparse row matrices and the coordinate text format.

use std::io::{self, Write};

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Rows per parallel task in [`SparseMatrix::mul_vec`]. Each output entry is a
/// sequential dot product, so results do not depend on the thread count.
const PAR_ROW_CHUNK: usize = 2048;

/// Square operator `y = A x`.
pub trait LinearOperator: Sync {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[f64], y: &mut [f64]);
}

/// Real sparse matrix in CSR layout with sorted column indices per row.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl SparseMatrix {
    /// Builds from `(row, col, value)` entries. Duplicates are summed and exact
    /// zeros dropped. Panics on out-of-range indices.
    pub fn from_triplets<I>(rows: usize, cols: usize, triplets: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let mut entries: Vec<(usize, usize, f64)> = triplets.into_iter().collect();
        for &(r, c, _) in &entries {
            assert!(r < rows && c < cols, "entry ({r}, {c}) outside {rows}x{cols}");
        }
        entries.sort_by_key(|a| (a.0, a.1));
        let mut row_ptr = vec![0usize; rows + 1];
        let mut col_idx = Vec::with_capacity(entries.len());
        let mut values: Vec<f64> = Vec::with_capacity(entries.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in entries {
            if last == Some((r, c)) {
                *values.last_mut().unwrap() += v;
            } else {
                row_ptr[r + 1] += 1;
                col_idx.push(c);
                values.push(v);
                last = Some((r, c));
            }
        }
        for r in 0..rows {
            row_ptr[r + 1] += row_ptr[r];
        }
        Self {
            rows,
            cols,
            row_ptr,
            col_idx,
            values,
        }
        .drop_zeros()
    }

    fn drop_zeros(self) -> Self {
        if self.values.iter().all(|&v| v != 0.0) {
            return self;
        }
        let rows = self.rows;
        let cols = self.cols;
        Self::from_rows(
            rows,
            cols,
            (0..rows).map(|r| self.row(r).filter(|&(_, v)| v != 0.0).collect()),
        )
    }

    fn from_rows<I>(rows: usize, cols: usize, row_entries: I) -> Self
    where
        I: IntoIterator<Item = Vec<(usize, f64)>>,
    {
        let mut row_ptr = Vec::with_capacity(rows + 1);
        row_ptr.push(0);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        for entries in row_entries {
            for (c, v) in entries {
                col_idx.push(c);
                values.push(v);
            }
            row_ptr.push(col_idx.len());
        }
        debug_assert_eq!(row_ptr.len(), rows + 1);
        Self {
            rows,
            cols,
            row_ptr,
            col_idx,
            values,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_triplets(n, n, (0..n).map(|i| (i, i, 1.0)))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Nonzeros of row `r` as `(col, value)`, by increasing column.
    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        self.col_idx[span.clone()]
            .iter()
            .copied()
            .zip(self.values[span].iter().copied())
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        match self.col_idx[span.clone()].binary_search(&c) {
            Ok(k) => self.values[span.start + k],
            Err(_) => 0.0,
        }
    }

    /// All nonzeros in row-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.rows).flat_map(move |r| self.row(r).map(move |(c, v)| (r, c, v)))
    }

    pub fn column_sums(&self) -> Vec<f64> {
        let mut sums = vec![0.0; self.cols];
        for (_, c, v) in self.triplets() {
            sums[c] += v;
        }
        sums
    }

    pub fn transpose(&self) -> Self {
        Self::from_triplets(self.cols, self.rows, self.triplets().map(|(r, c, v)| (c, r, v)))
    }

    /// `y = A x`.
    pub fn mul_vec(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.cols);
        assert_eq!(y.len(), self.rows);
        let row_dot = |r: usize| self.row(r).map(|(c, v)| v * x[c]).sum::<f64>();
        if self.rows >= 2 * PAR_ROW_CHUNK {
            y.par_chunks_mut(PAR_ROW_CHUNK).enumerate().for_each(|(chunk, out)| {
                let base = chunk * PAR_ROW_CHUNK;
                for (k, yr) in out.iter_mut().enumerate() {
                    *yr = row_dot(base + k);
                }
            });
        } else {
            for (r, yr) in y.iter_mut().enumerate() {
                *yr = row_dot(r);
            }
        }
    }

    /// Sparse product `self * other`.
    pub fn matmul(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut acc = vec![0.0f64; other.cols];
        let mut touched = vec![false; other.cols];
        let mut pattern = Vec::new();
        let rows = (0..self.rows).map(|r| {
            for (k, a) in self.row(r) {
                for (c, b) in other.row(k) {
                    if !touched[c] {
                        touched[c] = true;
                        pattern.push(c);
                    }
                    acc[c] += a * b;
                }
            }
            pattern.sort_unstable();
            let entries: Vec<(usize, f64)> = pattern
                .iter()
                .map(|&c| {
                    let v = acc[c];
                    acc[c] = 0.0;
                    touched[c] = false;
                    (c, v)
                })
                .filter(|&(_, v)| v != 0.0)
                .collect();
            pattern.clear();
            entries
        });
        let rows: Vec<_> = rows.collect();
        Ok(Self::from_rows(self.rows, other.cols, rows))
    }

    /// `alpha * a + beta * b`.
    pub fn combine(alpha: f64, a: &SparseMatrix, beta: f64, b: &SparseMatrix) -> Result<SparseMatrix> {
        if (a.rows, a.cols) != (b.rows, b.cols) {
            return Err(Error::Dimension(format!(
                "{}x{} plus {}x{}",
                a.rows, a.cols, b.rows, b.cols
            )));
        }
        let triplets = a
            .triplets()
            .map(|(r, c, v)| (r, c, alpha * v))
            .chain(b.triplets().map(|(r, c, v)| (r, c, beta * v)));
        Ok(Self::from_triplets(a.rows, a.cols, triplets))
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut out = vec![vec![0.0; self.cols]; self.rows];
        for (r, c, v) in self.triplets() {
            out[r][c] = v;
        }
        out
    }

    /// Writes the matrix in coordinate text form:
    ///
    /// ```text
    /// %%coordinate real <rows> <cols> <nnz>
    /// <row> <col> <value>
    /// ```
    ///
    /// Values use the shortest representation that reads back exactly.
    pub fn write_coordinate<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "%%coordinate real {} {} {}", self.rows, self.cols, self.nnz())?;
        for (r, c, v) in self.triplets() {
            writeln!(w, "{r} {c} {v}")?;
        }
        Ok(())
    }

    /// Same as [`write_coordinate`](Self::write_coordinate) with the pattern
    /// header and no value column; every stored value must be 1.
    pub fn write_coordinate_pattern<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "%%coordinate pattern {} {} {}", self.rows, self.cols, self.nnz())?;
        for (r, c, _) in self.triplets() {
            writeln!(w, "{r} {c}")?;
        }
        Ok(())
    }

    /// Parses the coordinate text written by [`write_coordinate`](Self::write_coordinate)
    /// or [`write_coordinate_pattern`](Self::write_coordinate_pattern). Lines
    /// starting with `%` after the header are comments.
    pub fn parse_coordinate(bytes: &[u8]) -> Result<SparseMatrix> {
        let text = std::str::from_utf8(bytes).map_err(|e| Error::Parse {
            line: line_of_offset(bytes, e.valid_up_to()),
            message: "invalid UTF-8".into(),
        })?;
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
        let (_, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let pattern = match fields.as_slice() {
            ["%%coordinate", "real", ..] => false,
            ["%%coordinate", "pattern", ..] => true,
            _ => return Err(parse_err(1, "expected `%%coordinate real|pattern <rows> <cols> <nnz>`")),
        };
        if fields.len() != 5 {
            return Err(parse_err(1, "expected `%%coordinate real|pattern <rows> <cols> <nnz>`"));
        }
        let dim = |s: &str| s.parse::<usize>().map_err(|_| parse_err(1, format!("bad size {s:?}")));
        let (rows, cols, nnz) = (dim(fields[2])?, dim(fields[3])?, dim(fields[4])?);
        let mut triplets = Vec::new();
        for (line_no, line) in lines {
            if line.is_empty() || line.starts_with('%') {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            let expected = if pattern { 2 } else { 3 };
            if parts.len() != expected {
                return Err(parse_err(
                    line_no,
                    format!("expected {expected} fields, found {}", parts.len()),
                ));
            }
            let index = |s: &str, bound: usize| -> Result<usize> {
                let i = s
                    .parse::<usize>()
                    .map_err(|_| parse_err(line_no, format!("bad index {s:?}")))?;
                if i >= bound {
                    return Err(parse_err(line_no, format!("index {i} out of range {bound}")));
                }
                Ok(i)
            };
            let r = index(parts[0], rows)?;
            let c = index(parts[1], cols)?;
            let v = if pattern {
                1.0
            } else {
                let v: f64 = parts[2]
                    .parse()
                    .map_err(|_| parse_err(line_no, format!("bad value {:?}", parts[2])))?;
                if !v.is_finite() {
                    return Err(parse_err(line_no, "non-finite value"));
                }
                v
            };
            if triplets.len() == nnz {
                return Err(parse_err(line_no, format!("more than {nnz} entries")));
            }
            triplets.push((r, c, v));
        }
        if triplets.len() != nnz {
            return Err(parse_err(
                0,
                format!("expected {nnz} entries, found {}", triplets.len()),
            ));
        }
        Ok(Self::from_triplets(rows, cols, triplets))
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn line_of_offset(bytes: &[u8], offset: usize) -> usize {
    bytes[..offset].iter().filter(|&&b| b == b'\n').count() + 1
}

impl LinearOperator for SparseMatrix {
    fn dim(&self) -> usize {
        self.rows
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.mul_vec(x, y);
    }
}
