#![allow(dead_code)]

use cheblogdet::SparseMatrix;
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn to_nalgebra(m: &SparseMatrix) -> DMatrix<f64> {
    DMatrix::from_row_slice(m.nrows(), m.ncols(), &m.to_dense())
}

pub fn eigenvalues(m: &SparseMatrix) -> Vec<f64> {
    let mut ev: Vec<f64> = to_nalgebra(m)
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .collect();
    ev.sort_by(f64::total_cmp);
    ev
}

pub fn singular_values(m: &SparseMatrix) -> Vec<f64> {
    let mut sv: Vec<f64> = to_nalgebra(m).singular_values().iter().copied().collect();
    sv.sort_by(f64::total_cmp);
    sv
}

/// Random sparse matrix with the given shape and fill probability.
pub fn sparse_matrix(
    max_rows: usize,
    max_cols: usize,
    density: f64,
) -> impl Strategy<Value = SparseMatrix> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(move |(r, c)| {
        prop::collection::vec((prop::bool::weighted(density), -10.0f64..10.0), r * c).prop_map(
            move |cells| {
                let data: Vec<f64> = cells
                    .into_iter()
                    .map(|(keep, v)| if keep { v } else { 0.0 })
                    .collect();
                SparseMatrix::from_dense(r, c, &data).unwrap()
            },
        )
    })
}

pub fn symmetric_matrix(max_dim: usize, density: f64) -> impl Strategy<Value = SparseMatrix> {
    sparse_matrix(max_dim, max_dim, density).prop_map(|m| {
        let n = m.nrows().min(m.ncols());
        let d = m.to_dense();
        let mut s = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                s[i * n + j] = 0.5 * (d[i * m.ncols() + j] + d[j * m.ncols() + i]);
            }
        }
        SparseMatrix::from_dense(n, n, &s).unwrap()
    })
}

/// `x ↦ Σ_j c_j T_j(A) x` applied column by column to the identity.
pub fn dense_chebyshev(a: &DMatrix<f64>, c: &[f64]) -> DMatrix<f64> {
    let n = a.nrows();
    let mut t0 = DMatrix::<f64>::identity(n, n);
    let mut p = &t0 * c[0];
    if c.len() == 1 {
        return p;
    }
    let mut t1 = a.clone();
    p += &t1 * c[1];
    for &cj in &c[2..] {
        let t2 = a * &t1 * 2.0 - &t0;
        p += &t2 * cj;
        t0 = t1;
        t1 = t2;
    }
    p
}

/// Dense-ish symmetric `d × d` matrix with entries uniform in `[−1, 1]`.
pub fn random_symmetric(d: usize, density: f64, seed: u64) -> SparseMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut a = vec![0.0; d * d];
    for i in 0..d {
        for j in 0..=i {
            if rng.random_bool(density) {
                let v: f64 = rng.random_range(-1.0..=1.0);
                a[i * d + j] = v;
                a[j * d + i] = v;
            }
        }
    }
    SparseMatrix::from_dense(d, d, &a).unwrap()
}
