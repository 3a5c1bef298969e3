//! Lattice Gaussian Markov random fields.
//!
//! The precision matrix of a `rows × cols` grid with 4-neighbour coupling is
//! `J(ρ) = I + ρ·Adj`, so ρ is literally the off-diagonal precision entry and
//! a negative ρ yields positively correlated neighbours. Under the opposite
//! convention `J = I − ρ·Adj` every sign below flips. `|ρ| < 1/4` keeps `J`
//! diagonally dominant, with spectrum inside `[1 − 4|ρ|, 1 + 4|ρ|]`.
//!
//! The likelihood scan evaluates `log det J(ρ) − xᵀJ(ρ)x` (constant dropped)
//! on a grid of ρ with one shared estimator seed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::logdet::{exact_logdet_banded, logdet_pd, DenseCholesky, EstimatorParams};
use crate::operator::dot;
use crate::sparsemat::{SparseMatrix, TripletBuffer};

pub const DEFAULT_SWEEPS: usize = 500;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LatticeSpec {
    rows: usize,
    cols: usize,
    rho: f64,
}

impl LatticeSpec {
    pub fn new(rows: usize, cols: usize, rho: f64) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::invalid(
                "lattice needs at least one row and one column",
            ));
        }
        if !(rho.abs() < 0.25) {
            return Err(Error::invalid(format!(
                "|rho| = {} must be below 1/4 for a positive definite precision",
                rho.abs()
            )));
        }
        Ok(Self { rows, cols, rho })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn dim(&self) -> usize {
        self.rows * self.cols
    }

    pub fn with_rho(&self, rho: f64) -> Result<Self> {
        Self::new(self.rows, self.cols, rho)
    }

    /// Eigenvalue interval `[1 − 4|ρ|, 1 + 4|ρ|]`.
    pub fn eigen_bounds(&self) -> (f64, f64) {
        (1.0 - 4.0 * self.rho.abs(), 1.0 + 4.0 * self.rho.abs())
    }

    /// Raster-order neighbours of site `i`.
    fn neighbours(&self, i: usize) -> impl Iterator<Item = usize> {
        let (r, c) = (i / self.cols, i % self.cols);
        let (rows, cols) = (self.rows, self.cols);
        [
            (r > 0).then(|| i - cols),
            (c > 0).then(|| i - 1),
            (c + 1 < cols).then(|| i + 1),
            (r + 1 < rows).then(|| i + cols),
        ]
        .into_iter()
        .flatten()
    }
}

/// `J = I + ρ·Adj` in raster order; bandwidth equals `cols`.
pub fn lattice_precision(spec: &LatticeSpec) -> SparseMatrix {
    let d = spec.dim();
    let mut t = TripletBuffer::with_capacity(d, d, 5 * d);
    for i in 0..d {
        t.push(i, i, 1.0).expect("in range");
        if spec.rho != 0.0 {
            for j in spec.neighbours(i) {
                t.push(i, j, spec.rho).expect("in range");
            }
        }
    }
    t.into_matrix()
}

/// Single-site Gibbs sampler in raster order, started from zero. Each update
/// draws `x_i ~ N(−ρ Σ_{j~i} x_j, 1)`.
pub struct GibbsChain {
    spec: LatticeSpec,
    rng: ChaCha8Rng,
    state: Vec<f64>,
    sweeps: usize,
}

impl GibbsChain {
    pub fn new(spec: LatticeSpec, seed: u64) -> Self {
        Self {
            spec,
            rng: ChaCha8Rng::seed_from_u64(seed),
            state: vec![0.0; spec.dim()],
            sweeps: 0,
        }
    }

    pub fn sweep(&mut self) {
        let rho = self.spec.rho;
        for i in 0..self.state.len() {
            let s: f64 = self.spec.neighbours(i).map(|j| self.state[j]).sum();
            let z: f64 = StandardNormal.sample(&mut self.rng);
            self.state[i] = -rho * s + z;
        }
        self.sweeps += 1;
    }

    pub fn run(&mut self, sweeps: usize) {
        for _ in 0..sweeps {
            self.sweep();
        }
    }

    pub fn state(&self) -> &[f64] {
        &self.state
    }

    pub fn sweeps(&self) -> usize {
        self.sweeps
    }
}

/// One field sample after `sweeps` full sweeps.
pub fn gibbs_sample(spec: &LatticeSpec, sweeps: usize, seed: u64) -> Result<Vec<f64>> {
    if sweeps == 0 {
        return Err(Error::invalid("at least one Gibbs sweep is required"));
    }
    let mut chain = GibbsChain::new(*spec, seed);
    chain.run(sweeps);
    Ok(chain.state)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanPoint {
    pub rho: f64,
    pub logdet: f64,
    pub quadratic: f64,
    pub loglik: f64,
}

fn check_sample(rows: usize, cols: usize, x: &[f64]) -> Result<()> {
    if x.len() != rows * cols {
        return Err(Error::DimensionMismatch {
            expected: rows * cols,
            found: x.len(),
        });
    }
    Ok(())
}

fn scan_with<F>(
    rows: usize,
    cols: usize,
    x: &[f64],
    rhos: &[f64],
    logdet: F,
) -> Result<Vec<ScanPoint>>
where
    F: Fn(&LatticeSpec, &SparseMatrix) -> Result<f64> + Sync,
{
    check_sample(rows, cols, x)?;
    rhos.par_iter()
        .map(|&rho| {
            let spec = LatticeSpec::new(rows, cols, rho)?;
            let j = lattice_precision(&spec);
            let ld = logdet(&spec, &j)?;
            let q = dot(x, &j.matvec(x)?);
            Ok(ScanPoint {
                rho,
                logdet: ld,
                quadratic: q,
                loglik: ld - q,
            })
        })
        .collect()
}

/// Stochastic likelihood curve, one shared seed across the grid.
pub fn loglik_scan(
    rows: usize,
    cols: usize,
    x: &[f64],
    rhos: &[f64],
    params: &EstimatorParams,
) -> Result<Vec<ScanPoint>> {
    scan_with(rows, cols, x, rhos, |spec, j| {
        let (lo, hi) = spec.eigen_bounds();
        Ok(logdet_pd(j, lo, hi, params)?.gamma)
    })
}

/// Likelihood curve with exact band-Cholesky log-determinants.
pub fn exact_loglik_scan(
    rows: usize,
    cols: usize,
    x: &[f64],
    rhos: &[f64],
) -> Result<Vec<ScanPoint>> {
    scan_with(rows, cols, x, rhos, |_, j| exact_logdet_banded(j))
}

/// The ρ of the largest log-likelihood (first one on ties).
pub fn scan_argmax(points: &[ScanPoint]) -> Option<f64> {
    points
        .iter()
        .fold(None::<&ScanPoint>, |best, p| match best {
            Some(b) if b.loglik >= p.loglik => Some(b),
            _ => Some(p),
        })
        .map(|p| p.rho)
}

/// `ρ` grid from `lo` to `hi` inclusive in steps of `step`, rounded to
/// suppress accumulation drift.
pub fn rho_grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    (0..=n)
        .map(|k| ((lo + k as f64 * step) * 1e9).round() / 1e9)
        .collect()
}

pub const SCHUR_LIMIT: usize = 500;

/// `(log det(J_o − J_oz J_z⁻¹ J_zo), log det J − log det J_z)` by dense
/// factorizations, for checking the marginal identity.
pub fn marginal_logdet_identity_check(j: &SparseMatrix, observed: &[usize]) -> Result<(f64, f64)> {
    if !j.is_square() {
        return Err(Error::NotSquare {
            nrows: j.nrows(),
            ncols: j.ncols(),
        });
    }
    let d = j.nrows();
    if d > SCHUR_LIMIT {
        return Err(Error::TooLarge {
            what: "dense Schur complement",
            size: d,
            limit: SCHUR_LIMIT,
        });
    }
    let mut is_obs = vec![false; d];
    for &o in observed {
        if o >= d || is_obs[o] {
            return Err(Error::invalid(format!(
                "observed index {o} out of range or repeated"
            )));
        }
        is_obs[o] = true;
    }
    let hidden: Vec<usize> = (0..d).filter(|&i| !is_obs[i]).collect();
    let dense = crate::logdet::DenseMatrix::from_sparse(j)?;
    let total = DenseCholesky::factor(d, dense.as_slice().to_vec())?.logdet();
    let no = observed.len();
    let nz = hidden.len();
    let j_oo = dense.select(observed, observed);
    let (schur, ld_z) = if nz == 0 {
        (j_oo, 0.0)
    } else {
        let jz =
            DenseCholesky::factor(nz, dense.select(&hidden, &hidden)).map_err(|e| match e {
                Error::NotPositiveDefinite { pivot, .. } => Error::Singular { pivot },
                other => other,
            })?;
        let j_zo = dense.select(&hidden, observed);
        // column c of J_z⁻¹ J_zo
        let mut solved = vec![0.0; nz * no];
        let mut col = vec![0.0; nz];
        for c in 0..no {
            for r in 0..nz {
                col[r] = j_zo[r * no + c];
            }
            jz.solve_in_place(&mut col);
            for r in 0..nz {
                solved[r * no + c] = col[r];
            }
        }
        let mut s = j_oo;
        for a in 0..no {
            for b in 0..no {
                let mut acc = 0.0;
                for r in 0..nz {
                    acc += j_zo[r * no + a] * solved[r * no + b];
                }
                s[a * no + b] -= acc;
            }
        }
        (s, jz.logdet())
    };
    let lhs = if no == 0 {
        0.0
    } else {
        DenseCholesky::factor(no, schur)?.logdet()
    };
    Ok((lhs, total - ld_z))
}
