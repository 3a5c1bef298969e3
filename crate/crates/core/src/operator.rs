//! Matrix-free linear operators.
//!
//! Estimators only ever need `y = A x`, so they take anything implementing
//! [`LinearOperator`]. Compositions such as `x ↦ Cᵀ(Cx)/s` are expressed as
//! wrappers and never materialize the product matrix.

use crate::sparsemat::SparseMatrix;

/// A square linear map on `R^dim`.
///
/// `apply` may be called concurrently from several threads on distinct
/// buffers, hence the `Sync` bound.
pub trait LinearOperator: Sync {
    fn dim(&self) -> usize;

    /// Overwrites `y` with `A x`. Both slices have length `dim()`.
    fn apply(&self, x: &[f64], y: &mut [f64]);
}

impl<T: LinearOperator + ?Sized> LinearOperator for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        (**self).apply(x, y)
    }
}

/// Square sparse matrices act directly. Callers are expected to have checked
/// squareness; non-square matrices report `nrows` as the dimension.
impl LinearOperator for SparseMatrix {
    fn dim(&self) -> usize {
        self.nrows()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.mul_unchecked(x, y)
    }
}

/// Wraps a closure as an operator.
pub struct FnOperator<F> {
    dim: usize,
    f: F,
}

impl<F> FnOperator<F>
where
    F: Fn(&[f64], &mut [f64]) + Sync,
{
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, f }
    }
}

impl<F> LinearOperator for FnOperator<F>
where
    F: Fn(&[f64], &mut [f64]) + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        (self.f)(x, y)
    }
}

/// `x ↦ scale · Cᵀ(C x)`.
pub struct NormalOperator<'a> {
    c: &'a SparseMatrix,
    scale: f64,
}

impl<'a> NormalOperator<'a> {
    pub fn new(c: &'a SparseMatrix, scale: f64) -> Self {
        Self { c, scale }
    }
}

impl LinearOperator for NormalOperator<'_> {
    fn dim(&self) -> usize {
        self.c.ncols()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.c.mul_normal_unchecked(x, y);
        if self.scale != 1.0 {
            y.iter_mut().for_each(|v| *v *= self.scale);
        }
    }
}

/// `x ↦ shift · x + scale · (A x)`.
pub struct AffineOperator<O> {
    inner: O,
    shift: f64,
    scale: f64,
}

impl<O: LinearOperator> AffineOperator<O> {
    pub fn new(inner: O, shift: f64, scale: f64) -> Self {
        Self {
            inner,
            shift,
            scale,
        }
    }
}

impl<O: LinearOperator> LinearOperator for AffineOperator<O> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.inner.apply(x, y);
        for (yi, &xi) in y.iter_mut().zip(x) {
            *yi = self.shift * xi + self.scale * *yi;
        }
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normal_operator_matches_explicit_product() {
        let c = SparseMatrix::from_rows(&[&[1.0, 2.0], &[0.0, 3.0]]).unwrap();
        // CᵀC = [[1, 2], [2, 13]]
        let op = NormalOperator::new(&c, 0.5);
        let mut y = [0.0; 2];
        op.apply(&[1.0, -1.0], &mut y);
        assert_eq!(y, [0.5 * (1.0 - 2.0), 0.5 * (2.0 - 13.0)]);
    }

    #[test]
    fn affine_operator() {
        let m = SparseMatrix::from_diagonal(&[2.0, 4.0]);
        let op = AffineOperator::new(&m, 1.0, -0.5);
        let mut y = [0.0; 2];
        op.apply(&[1.0, 1.0], &mut y);
        assert_eq!(y, [0.0, -1.0]);
    }

    #[test]
    fn fn_operator() {
        let op = FnOperator::new(3, |x: &[f64], y: &mut [f64]| {
            for (a, b) in y.iter_mut().zip(x) {
                *a = 3.0 * b;
            }
        });
        let mut y = [0.0; 3];
        op.apply(&[1.0, 2.0, 3.0], &mut y);
        assert_eq!(y, [3.0, 6.0, 9.0]);
        assert_eq!(op.dim(), 3);
    }
}
