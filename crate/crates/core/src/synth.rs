//! Random test matrices.
//!
//! [`random_sparse_pd`] follows the benchmark recipe: five uniform `[−1, 1]`
//! off-diagonal entries per row, mirrored to the transposed position, and a
//! diagonal equal to the absolute row sum plus a small weight. An optional
//! band restricts the column choice to `|i − j| ≤ w`, which keeps exact
//! band-Cholesky oracles cheap at large `d`.
//!
//! [`with_singular_values`] and [`with_eigenvalues`] build matrices with a
//! known spectrum by sandwiching a diagonal between products of random Givens
//! rotations.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::sparsemat::{SparseMatrix, TripletBuffer};

pub const DEFAULT_OFFDIAG_PER_ROW: usize = 5;
pub const DEFAULT_WEIGHT: f64 = 1e-3;

/// Generator settings for [`random_sparse_pd`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RandomPdSpec {
    pub dim: usize,
    pub offdiag_per_row: usize,
    /// Restrict off-diagonal columns to `|i − j| ≤ band`.
    pub band: Option<usize>,
    pub weight: f64,
    pub seed: u64,
}

impl RandomPdSpec {
    pub fn new(dim: usize, seed: u64) -> Self {
        Self {
            dim,
            offdiag_per_row: DEFAULT_OFFDIAG_PER_ROW,
            band: None,
            weight: DEFAULT_WEIGHT,
            seed,
        }
    }

    pub fn banded(self, band: usize) -> Self {
        Self {
            band: Some(band),
            ..self
        }
    }
}

/// Symmetric diagonally dominant random matrix; its Gershgorin interval lies
/// in `[weight, ∞)`.
pub fn random_sparse_pd(spec: &RandomPdSpec) -> Result<SparseMatrix> {
    let d = spec.dim;
    if d < 2 {
        return Err(Error::invalid("dimension must be at least 2"));
    }
    let reach = spec.band.unwrap_or(d - 1).clamp(1, d - 1);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut upper: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for i in 0..d {
        let lo = i.saturating_sub(reach);
        let hi = (i + reach).min(d - 1);
        let choices = hi - lo;
        let k = spec.offdiag_per_row.min(choices);
        let mut picked = Vec::with_capacity(k);
        while picked.len() < k {
            let mut j = rng.random_range(lo..hi);
            if j >= i {
                j += 1;
            }
            if !picked.contains(&j) {
                picked.push(j);
            }
        }
        for j in picked {
            let v: f64 = rng.random_range(-1.0..=1.0);
            upper.insert((i.min(j), i.max(j)), v);
        }
    }
    let mut rowsum = vec![0.0; d];
    let mut t = TripletBuffer::with_capacity(d, d, 2 * upper.len() + d);
    for (&(i, j), &v) in &upper {
        t.push(i, j, v)?;
        t.push(j, i, v)?;
        rowsum[i] += v.abs();
        rowsum[j] += v.abs();
    }
    for (i, s) in rowsum.into_iter().enumerate() {
        t.push(i, i, s + spec.weight)?;
    }
    Ok(t.into_matrix())
}

/// `a·M + b·I` with the Gershgorin interval of `M` mapped onto `[lo, hi]`.
/// For symmetric `M` the spectrum of the result lies in `[lo, hi]`.
pub fn affine_into_interval(m: &SparseMatrix, lo: f64, hi: f64) -> Result<SparseMatrix> {
    if !(lo < hi) {
        return Err(Error::invalid(format!("empty interval [{lo}, {hi}]")));
    }
    let (g_lo, g_hi) = m.gershgorin_interval()?;
    let (a, b) = if g_hi > g_lo {
        let a = (hi - lo) / (g_hi - g_lo);
        (a, lo - a * g_lo)
    } else {
        (0.0, 0.5 * (lo + hi))
    };
    let mut t = TripletBuffer::with_capacity(m.nrows(), m.ncols(), m.nnz() + m.nrows());
    for (i, j, v) in m.triplets() {
        t.push(i, j, a * v)?;
    }
    for i in 0..m.nrows() {
        t.push(i, i, b)?;
    }
    Ok(t.into_matrix())
}

fn rotate_rows(a: &mut [f64], d: usize, i: usize, j: usize, c: f64, s: f64) {
    for k in 0..d {
        let (x, y) = (a[i * d + k], a[j * d + k]);
        a[i * d + k] = c * x - s * y;
        a[j * d + k] = s * x + c * y;
    }
}

fn rotate_cols(a: &mut [f64], d: usize, i: usize, j: usize, c: f64, s: f64) {
    for k in 0..d {
        let (x, y) = (a[k * d + i], a[k * d + j]);
        a[k * d + i] = c * x - s * y;
        a[k * d + j] = s * x + c * y;
    }
}

fn random_rotation(rng: &mut ChaCha8Rng, d: usize, window: usize) -> (usize, usize, f64, f64) {
    let i = rng.random_range(0..d);
    let lo = i.saturating_sub(window);
    let hi = (i + window).min(d - 1);
    let mut j = rng.random_range(lo..hi);
    if j >= i {
        j += 1;
    }
    let theta: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    (i, j, theta.cos(), theta.sin())
}

fn check_rotation_args(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::invalid("dimension must be at least 2"));
    }
    if d > 4096 {
        return Err(Error::TooLarge {
            what: "dense rotation generator",
            size: d,
            limit: 4096,
        });
    }
    Ok(())
}

/// `G·diag(s)·Hᵀ` with `G`, `H` products of `rotations` random Givens
/// rotations each, pairing indices at most `window` apart. The singular values
/// are exactly `|s_i|` up to rounding.
pub fn with_singular_values(
    s: &[f64],
    rotations: usize,
    window: usize,
    seed: u64,
) -> Result<SparseMatrix> {
    let d = s.len();
    check_rotation_args(d)?;
    let window = window.clamp(1, d - 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut a = vec![0.0; d * d];
    for (i, &v) in s.iter().enumerate() {
        a[i * d + i] = v;
    }
    for _ in 0..rotations {
        let (i, j, c, sn) = random_rotation(&mut rng, d, window);
        rotate_rows(&mut a, d, i, j, c, sn);
        let (i, j, c, sn) = random_rotation(&mut rng, d, window);
        rotate_cols(&mut a, d, i, j, c, sn);
    }
    SparseMatrix::from_dense(d, d, &a)
}

/// `Q·diag(λ)·Qᵀ` for a product `Q` of random Givens rotations; symmetric
/// with eigenvalues `λ` up to rounding.
pub fn with_eigenvalues(
    lambda: &[f64],
    rotations: usize,
    window: usize,
    seed: u64,
) -> Result<SparseMatrix> {
    let d = lambda.len();
    check_rotation_args(d)?;
    let window = window.clamp(1, d - 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut a = vec![0.0; d * d];
    for (i, &v) in lambda.iter().enumerate() {
        a[i * d + i] = v;
    }
    for _ in 0..rotations {
        let (i, j, c, sn) = random_rotation(&mut rng, d, window);
        rotate_rows(&mut a, d, i, j, c, sn);
        rotate_cols(&mut a, d, i, j, c, sn);
    }
    // exact symmetry
    for i in 0..d {
        for j in 0..i {
            let v = 0.5 * (a[i * d + j] + a[j * d + i]);
            a[i * d + j] = v;
            a[j * d + i] = v;
        }
    }
    SparseMatrix::from_dense(d, d, &a)
}

/// `d` values spread uniformly at random over `[lo, hi]`, always including
/// both endpoints.
pub fn spectrum_in(d: usize, lo: f64, hi: f64, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..d)
        .map(|i| match i {
            0 => lo,
            1 => hi,
            _ => rng.random_range(lo..=hi),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logdet::{exact_logdet_dense, DenseMatrix, ExactMode};

    #[test]
    fn random_pd_structure() {
        let m = random_sparse_pd(&RandomPdSpec::new(200, 3)).unwrap();
        assert!(m.is_symmetric(0.0));
        let (lo, _) = m.gershgorin_interval().unwrap();
        assert!(lo >= 1e-3 - 1e-12);
        // ~10 nnz per row plus the diagonal
        let per_row = m.nnz() as f64 / 200.0;
        assert!(per_row > 8.0 && per_row <= 11.0, "{per_row}");
        assert_eq!(m, random_sparse_pd(&RandomPdSpec::new(200, 3)).unwrap());
    }

    #[test]
    fn banded_generator_respects_band() {
        let m = random_sparse_pd(&RandomPdSpec::new(500, 1).banded(12)).unwrap();
        assert!(m.bandwidth() <= 12);
    }

    #[test]
    fn affine_map_lands_in_interval() {
        let m = random_sparse_pd(&RandomPdSpec::new(50, 8)).unwrap();
        let b = affine_into_interval(&m, 0.1, 0.9).unwrap();
        let (lo, hi) = b.gershgorin_interval().unwrap();
        assert!(lo >= 0.1 - 1e-12 && hi <= 0.9 + 1e-12);
    }

    #[test]
    fn rotations_preserve_determinant() {
        let s = [0.5, -2.0, 3.0, 1.5, 0.25];
        let c = with_singular_values(&s, 40, 4, 2).unwrap();
        let dm = DenseMatrix::from_sparse(&c).unwrap();
        let ld = exact_logdet_dense(&dm, ExactMode::LuAbs).unwrap();
        let expect: f64 = s.iter().map(|v: &f64| v.abs().ln()).sum();
        assert!((ld - expect).abs() < 1e-12);

        let lam = [0.2, 0.4, 0.6, 0.8];
        let b = with_eigenvalues(&lam, 30, 3, 5).unwrap();
        assert!(b.is_symmetric(0.0));
        let ld = exact_logdet_dense(
            &DenseMatrix::from_sparse(&b).unwrap(),
            ExactMode::CholeskyPd,
        )
        .unwrap();
        let expect: f64 = lam.iter().map(|v: &f64| v.ln()).sum();
        assert!((ld - expect).abs() < 1e-12);
    }
}
