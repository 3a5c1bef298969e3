//! Exact log-determinants by factorization, used as oracles.

use crate::error::{Error, Result};
use crate::sparsemat::SparseMatrix;

/// Largest dimension accepted by [`exact_logdet_dense`].
pub const DENSE_ORACLE_LIMIT: usize = 4096;

/// Row-major square matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn from_row_major(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: data.len(),
            });
        }
        Ok(Self { n, data })
    }

    pub fn from_sparse(m: &SparseMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::NotSquare {
                nrows: m.nrows(),
                ncols: m.ncols(),
            });
        }
        Ok(Self {
            n: m.nrows(),
            data: m.to_dense(),
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Submatrix on the given rows and columns.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Vec<f64> {
        let mut out = Vec::with_capacity(rows.len() * cols.len());
        for &i in rows {
            for &j in cols {
                out.push(self.get(i, j));
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExactMode {
    /// `2 Σ log L_ii` for symmetric positive definite input.
    CholeskyPd,
    /// `Σ log |U_ii|` from LU with partial pivoting.
    LuAbs,
}

/// Exact `log det M` (Cholesky) or `log |det M|` (LU), limited to
/// [`DENSE_ORACLE_LIMIT`].
pub fn exact_logdet_dense(m: &DenseMatrix, mode: ExactMode) -> Result<f64> {
    if m.dim() > DENSE_ORACLE_LIMIT {
        return Err(Error::TooLarge {
            what: "dense exact log-determinant",
            size: m.dim(),
            limit: DENSE_ORACLE_LIMIT,
        });
    }
    exact_logdet_dense_unbounded(m, mode)
}

/// [`exact_logdet_dense`] without the size guard.
pub fn exact_logdet_dense_unbounded(m: &DenseMatrix, mode: ExactMode) -> Result<f64> {
    match mode {
        ExactMode::CholeskyPd => Ok(DenseCholesky::factor(m.n, m.data.clone())?.logdet()),
        ExactMode::LuAbs => lu_log_abs_det(m.n, m.data.clone()).map(|(l, _)| l),
    }
}

/// Lower-triangular Cholesky factor, row-major with the strict upper part zeroed.
#[derive(Clone, Debug)]
pub struct DenseCholesky {
    n: usize,
    l: Vec<f64>,
}

impl DenseCholesky {
    /// Factors a symmetric positive definite row-major matrix; only the lower
    /// triangle is read.
    pub fn factor(n: usize, mut a: Vec<f64>) -> Result<Self> {
        if a.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: a.len(),
            });
        }
        for i in 0..n {
            for j in 0..=i {
                let (head, tail) = a.split_at_mut(i * n);
                let row_i = &mut tail[..n];
                let row_j: &[f64] = if j == i { &[] } else { &head[j * n..j * n + n] };
                let s = if j == i {
                    row_i[..j].iter().map(|x| x * x).sum::<f64>()
                } else {
                    row_i[..j]
                        .iter()
                        .zip(&row_j[..j])
                        .map(|(x, y)| x * y)
                        .sum::<f64>()
                };
                let v = row_i[j] - s;
                if j == i {
                    if !(v > 0.0) || !v.is_finite() {
                        return Err(Error::NotPositiveDefinite { pivot: i, value: v });
                    }
                    row_i[i] = v.sqrt();
                } else {
                    row_i[j] = v / row_j[j];
                }
            }
            for x in &mut a[i * n + i + 1..(i + 1) * n] {
                *x = 0.0;
            }
        }
        Ok(Self { n, l: a })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn logdet(&self) -> f64 {
        2.0 * (0..self.n)
            .map(|i| self.l[i * self.n + i].ln())
            .sum::<f64>()
    }

    /// Solves `A x = b` in place.
    pub fn solve_in_place(&self, b: &mut [f64]) {
        let n = self.n;
        for i in 0..n {
            let row = &self.l[i * n..i * n + i];
            let s: f64 = row.iter().zip(&b[..i]).map(|(x, y)| x * y).sum();
            b[i] = (b[i] - s) / self.l[i * n + i];
        }
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|k| self.l[k * n + i] * b[k]).sum();
            b[i] = (b[i] - s) / self.l[i * n + i];
        }
    }
}

/// `(log |det A|, sign)` from LU with partial pivoting.
pub fn lu_log_abs_det(n: usize, mut a: Vec<f64>) -> Result<(f64, f64)> {
    if a.len() != n * n {
        return Err(Error::DimensionMismatch {
            expected: n * n,
            found: a.len(),
        });
    }
    let mut sign = 1.0;
    let mut log_abs = 0.0;
    for k in 0..n {
        let p = (k..n)
            .max_by(|&x, &y| a[x * n + k].abs().total_cmp(&a[y * n + k].abs()))
            .expect("non-empty pivot range");
        let pivot = a[p * n + k];
        if pivot == 0.0 || !pivot.is_finite() {
            return Err(Error::Singular { pivot: k });
        }
        if p != k {
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
            sign = -sign;
        }
        if pivot < 0.0 {
            sign = -sign;
        }
        log_abs += pivot.abs().ln();
        let (top, bottom) = a.split_at_mut((k + 1) * n);
        let row_k = &top[k * n..];
        for row_i in bottom.chunks_mut(n) {
            let l = row_i[k] / pivot;
            if l != 0.0 {
                for (x, y) in row_i[k + 1..].iter_mut().zip(&row_k[k + 1..]) {
                    *x -= l * y;
                }
            }
        }
    }
    Ok((log_abs, sign))
}

/// Exact `log det M` for a symmetric positive definite sparse matrix by band
/// Cholesky in `O(d·w²)`, `w` the bandwidth. Only the lower band is read.
pub fn exact_logdet_banded(m: &SparseMatrix) -> Result<f64> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            nrows: m.nrows(),
            ncols: m.ncols(),
        });
    }
    let d = m.nrows();
    let w = m.bandwidth();
    let width = w + 1;
    // band[i*width + (j + w - i)] holds L_ij for i - w <= j <= i
    let mut band = vec![0.0; d * width];
    for (i, j, v) in m.triplets() {
        if j <= i {
            band[i * width + (j + w - i)] = v;
        }
    }
    let mut logdet = 0.0;
    for i in 0..d {
        let lo = i.saturating_sub(w);
        for j in lo..=i {
            let k0 = lo.max(j.saturating_sub(w));
            let mut s = 0.0;
            for k in k0..j {
                s += band[i * width + (k + w - i)] * band[j * width + (k + w - j)];
            }
            let v = band[i * width + (j + w - i)] - s;
            if j == i {
                if !(v > 0.0) || !v.is_finite() {
                    return Err(Error::NotPositiveDefinite { pivot: i, value: v });
                }
                let l = v.sqrt();
                band[i * width + w] = l;
                logdet += 2.0 * l.ln();
            } else {
                band[i * width + (j + w - i)] = v / band[j * width + w];
            }
        }
    }
    Ok(logdet)
}
