//! Compressed sparse row matrices.
//!
//! [`SparseMatrix`] is the substrate every estimator multiplies against. It is
//! immutable once built and always kept in canonical form: row offsets start
//! at zero and are non-decreasing, column indices are strictly increasing
//! within each row, and there are no duplicate entries. Duplicates coming in
//! through a [`TripletBuffer`] are summed when the buffer is finalized.

mod market;

pub use market::{
    parse_matrix_market, read_matrix_market, write_matrix_market, write_matrix_market_to,
};

use crate::error::{Error, Result};

/// Which matrix norm to compute with [`SparseMatrix::norm`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormKind {
    /// Maximum absolute column sum.
    One,
    /// Maximum absolute row sum.
    Inf,
    Frobenius,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix {
    nrows: usize,
    ncols: usize,
    row_offsets: Vec<usize>,
    col_indices: Vec<usize>,
    values: Vec<f64>,
}

/// Coordinate-format staging area. Duplicates are allowed until
/// [`TripletBuffer::into_matrix`] sums them.
#[derive(Clone, Debug, Default)]
pub struct TripletBuffer {
    nrows: usize,
    ncols: usize,
    entries: Vec<(usize, usize, f64)>,
}

impl TripletBuffer {
    pub fn new(nrows: usize, ncols: usize) -> Self {
        Self {
            nrows,
            ncols,
            entries: Vec::new(),
        }
    }

    pub fn with_capacity(nrows: usize, ncols: usize, capacity: usize) -> Self {
        Self {
            nrows,
            ncols,
            entries: Vec::with_capacity(capacity),
        }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn push(&mut self, row: usize, col: usize, value: f64) -> Result<()> {
        if row >= self.nrows || col >= self.ncols {
            return Err(Error::IndexOutOfBounds {
                row,
                col,
                nrows: self.nrows,
                ncols: self.ncols,
            });
        }
        self.entries.push((row, col, value));
        Ok(())
    }

    /// Sorts by (row, col) and sums duplicates in insertion order.
    pub fn into_matrix(self) -> SparseMatrix {
        let TripletBuffer {
            nrows,
            ncols,
            mut entries,
        } = self;
        // stable: duplicates are summed in the order they were pushed
        entries.sort_by_key(|&(r, c, _)| (r, c));

        let mut row_offsets = vec![0usize; nrows + 1];
        let mut col_indices = Vec::with_capacity(entries.len());
        let mut values: Vec<f64> = Vec::with_capacity(entries.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in entries {
            if last == Some((r, c)) {
                *values.last_mut().expect("entry present") += v;
            } else {
                col_indices.push(c);
                values.push(v);
                row_offsets[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for i in 0..nrows {
            row_offsets[i + 1] += row_offsets[i];
        }
        SparseMatrix {
            nrows,
            ncols,
            row_offsets,
            col_indices,
            values,
        }
    }
}

impl SparseMatrix {
    /// Builds a matrix from raw CSR arrays, checking every canonical-form invariant.
    pub fn try_from_csr(
        nrows: usize,
        ncols: usize,
        row_offsets: Vec<usize>,
        col_indices: Vec<usize>,
        values: Vec<f64>,
    ) -> Result<Self> {
        if row_offsets.len() != nrows + 1 {
            return Err(Error::DimensionMismatch {
                expected: nrows + 1,
                found: row_offsets.len(),
            });
        }
        if row_offsets[0] != 0 {
            return Err(Error::invalid("row_offsets[0] must be 0"));
        }
        if col_indices.len() != values.len() || row_offsets[nrows] != values.len() {
            return Err(Error::DimensionMismatch {
                expected: row_offsets[nrows],
                found: values.len(),
            });
        }
        for i in 0..nrows {
            let (start, end) = (row_offsets[i], row_offsets[i + 1]);
            if end < start {
                return Err(Error::invalid(format!("row_offsets decreases at row {i}")));
            }
            let cols = &col_indices[start..end];
            if let Some(&c) = cols.iter().find(|&&c| c >= ncols) {
                return Err(Error::IndexOutOfBounds {
                    row: i,
                    col: c,
                    nrows,
                    ncols,
                });
            }
            if cols.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::invalid(format!(
                    "column indices in row {i} are not strictly increasing"
                )));
            }
        }
        Ok(Self {
            nrows,
            ncols,
            row_offsets,
            col_indices,
            values,
        })
    }

    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self {
            nrows,
            ncols,
            row_offsets: vec![0; nrows + 1],
            col_indices: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn identity(d: usize) -> Self {
        Self::from_diagonal(&vec![1.0; d])
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let d = diag.len();
        Self {
            nrows: d,
            ncols: d,
            row_offsets: (0..=d).collect(),
            col_indices: (0..d).collect(),
            values: diag.to_vec(),
        }
    }

    /// Row-major dense input; exact zeros are dropped.
    pub fn from_dense(nrows: usize, ncols: usize, data: &[f64]) -> Result<Self> {
        if data.len() != nrows * ncols {
            return Err(Error::DimensionMismatch {
                expected: nrows * ncols,
                found: data.len(),
            });
        }
        let mut row_offsets = Vec::with_capacity(nrows + 1);
        let mut col_indices = Vec::new();
        let mut values = Vec::new();
        row_offsets.push(0);
        for row in data.chunks(ncols.max(1)).take(nrows) {
            for (j, &v) in row.iter().enumerate() {
                if v != 0.0 {
                    col_indices.push(j);
                    values.push(v);
                }
            }
            row_offsets.push(values.len());
        }
        if ncols == 0 {
            row_offsets.resize(nrows + 1, 0);
        }
        Ok(Self {
            nrows,
            ncols,
            row_offsets,
            col_indices,
            values,
        })
    }

    pub fn from_rows(rows: &[&[f64]]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(nrows * ncols);
        for r in rows {
            if r.len() != ncols {
                return Err(Error::DimensionMismatch {
                    expected: ncols,
                    found: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Self::from_dense(nrows, ncols, &data)
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn is_square(&self) -> bool {
        self.nrows == self.ncols
    }

    pub fn row_offsets(&self) -> &[usize] {
        &self.row_offsets
    }

    pub fn col_indices(&self) -> &[usize] {
        &self.col_indices
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Column indices and values of one row.
    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let range = self.row_offsets[i]..self.row_offsets[i + 1];
        (&self.col_indices[range.clone()], &self.values[range])
    }

    /// All stored entries in (row, col) order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.nrows).flat_map(move |i| {
            let (cols, vals) = self.row(i);
            cols.iter().zip(vals).map(move |(&j, &v)| (i, j, v))
        })
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i >= self.nrows {
            return 0.0;
        }
        let (cols, vals) = self.row(i);
        cols.binary_search(&j).map_or(0.0, |k| vals[k])
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.nrows.min(self.ncols))
            .map(|i| self.get(i, i))
            .collect()
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.nrows * self.ncols];
        for (i, j, v) in self.triplets() {
            out[i * self.ncols + j] = v;
        }
        out
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v *= factor);
        out
    }

    pub fn transpose(&self) -> Self {
        let mut counts = vec![0usize; self.ncols + 1];
        for &c in &self.col_indices {
            counts[c + 1] += 1;
        }
        for j in 0..self.ncols {
            counts[j + 1] += counts[j];
        }
        let row_offsets = counts.clone();
        let mut next = counts;
        let mut col_indices = vec![0usize; self.nnz()];
        let mut values = vec![0.0; self.nnz()];
        // rows are visited in increasing order, so each output row stays sorted
        for (i, j, v) in self.triplets() {
            let slot = next[j];
            col_indices[slot] = i;
            values[slot] = v;
            next[j] += 1;
        }
        Self {
            nrows: self.ncols,
            ncols: self.nrows,
            row_offsets,
            col_indices,
            values,
        }
    }

    /// Exact structural and numerical symmetry check up to `tol` absolute.
    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.is_square()
            && self
                .triplets()
                .all(|(i, j, v)| (v - self.get(j, i)).abs() <= tol)
    }

    /// Largest |i - j| over stored entries.
    pub fn bandwidth(&self) -> usize {
        self.triplets()
            .map(|(i, j, _)| i.abs_diff(j))
            .max()
            .unwrap_or(0)
    }

    /// `y = M x`.
    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut y = vec![0.0; self.nrows];
        self.matvec_into(x, &mut y)?;
        Ok(y)
    }

    pub fn matvec_into(&self, x: &[f64], y: &mut [f64]) -> Result<()> {
        if x.len() != self.ncols {
            return Err(Error::DimensionMismatch {
                expected: self.ncols,
                found: x.len(),
            });
        }
        if y.len() != self.nrows {
            return Err(Error::DimensionMismatch {
                expected: self.nrows,
                found: y.len(),
            });
        }
        self.mul_unchecked(x, y);
        Ok(())
    }

    /// Hot-path product; lengths are the caller's responsibility.
    pub(crate) fn mul_unchecked(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.ncols);
        debug_assert_eq!(y.len(), self.nrows);
        for (i, yi) in y.iter_mut().enumerate() {
            let range = self.row_offsets[i]..self.row_offsets[i + 1];
            let mut acc = 0.0;
            for (&j, &v) in self.col_indices[range.clone()]
                .iter()
                .zip(&self.values[range])
            {
                acc += v * x[j];
            }
            *yi = acc;
        }
    }

    /// `y = Mᵀ x` without forming the transpose.
    pub fn matvec_transpose(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut y = vec![0.0; self.ncols];
        self.matvec_transpose_into(x, &mut y)?;
        Ok(y)
    }

    pub fn matvec_transpose_into(&self, x: &[f64], y: &mut [f64]) -> Result<()> {
        if x.len() != self.nrows {
            return Err(Error::DimensionMismatch {
                expected: self.nrows,
                found: x.len(),
            });
        }
        if y.len() != self.ncols {
            return Err(Error::DimensionMismatch {
                expected: self.ncols,
                found: y.len(),
            });
        }
        self.mul_transpose_unchecked(x, y);
        Ok(())
    }

    pub(crate) fn mul_transpose_unchecked(&self, x: &[f64], y: &mut [f64]) {
        y.iter_mut().for_each(|v| *v = 0.0);
        for (i, &xi) in x.iter().enumerate() {
            let range = self.row_offsets[i]..self.row_offsets[i + 1];
            for (&j, &v) in self.col_indices[range.clone()]
                .iter()
                .zip(&self.values[range])
            {
                y[j] += v * xi;
            }
        }
    }

    /// `y = Mᵀ(M x)` in one sweep: each row is dotted with `x` and then
    /// scattered back while it is still in cache.
    pub(crate) fn mul_normal_unchecked(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.ncols);
        debug_assert_eq!(y.len(), self.ncols);
        y.iter_mut().for_each(|v| *v = 0.0);
        for i in 0..self.nrows {
            let range = self.row_offsets[i]..self.row_offsets[i + 1];
            let cols = &self.col_indices[range.clone()];
            let vals = &self.values[range];
            let mut t = 0.0;
            for (&j, &v) in cols.iter().zip(vals) {
                t += v * x[j];
            }
            for (&j, &v) in cols.iter().zip(vals) {
                y[j] += v * t;
            }
        }
    }

    pub fn norm(&self, kind: NormKind) -> f64 {
        match kind {
            NormKind::One => {
                let mut col_sums = vec![0.0; self.ncols];
                for (&j, &v) in self.col_indices.iter().zip(&self.values) {
                    col_sums[j] += v.abs();
                }
                col_sums.into_iter().fold(0.0, f64::max)
            }
            NormKind::Inf => (0..self.nrows)
                .map(|i| self.row(i).1.iter().map(|v| v.abs()).sum::<f64>())
                .fold(0.0, f64::max),
            NormKind::Frobenius => self.values.iter().map(|v| v * v).sum::<f64>().sqrt(),
        }
    }

    /// `(min_i (M_ii - R_i), max_i (M_ii + R_i))` where `R_i` is the
    /// off-diagonal absolute row sum. For symmetric matrices the interval
    /// contains the whole spectrum.
    pub fn gershgorin_interval(&self) -> Result<(f64, f64)> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                nrows: self.nrows,
                ncols: self.ncols,
            });
        }
        if self.nrows == 0 {
            return Ok((0.0, 0.0));
        }
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..self.nrows {
            let (cols, vals) = self.row(i);
            let mut center = 0.0;
            let mut radius = 0.0;
            for (&j, &v) in cols.iter().zip(vals) {
                if j == i {
                    center = v;
                } else {
                    radius += v.abs();
                }
            }
            lo = lo.min(center - radius);
            hi = hi.max(center + radius);
        }
        Ok((lo, hi))
    }
}
