//! Extreme eigenvalue and singular value bounds.
//!
//! The general estimator needs an interval `[σ_min, σ_max]` that brackets the
//! singular values of `C`. The cheap bound `√(‖C‖₁‖C‖_∞)` is always valid
//! for σ_max. Power iteration and inverse power iteration on `CᵀC` give
//! tighter values; they approach the extremes from inside the spectrum, so the
//! results are widened by the factors [`POWER_INFLATION`] and
//! [`INVERSE_DEFLATION`].

use crate::error::{Error, Result};
use crate::logdet::SpectrumBounds;
use crate::operator::{dot, norm2, LinearOperator, NormalOperator};
use crate::sparsemat::{NormKind, SparseMatrix};
use crate::trace::{rademacher_vector, RademacherStream};

pub const POWER_INFLATION: f64 = 1.01;
pub const INVERSE_DEFLATION: f64 = 0.99;

/// Iteration budget and stopping rule.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IterativeConfig {
    pub max_iterations: usize,
    pub rel_tolerance: f64,
    pub seed: u64,
}

impl Default for IterativeConfig {
    fn default() -> Self {
        Self {
            max_iterations: 1000,
            rel_tolerance: 1e-6,
            seed: 0,
        }
    }
}

impl IterativeConfig {
    pub fn new(max_iterations: usize, rel_tolerance: f64, seed: u64) -> Result<Self> {
        let cfg = Self {
            max_iterations,
            rel_tolerance,
            seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Conjugate-gradient defaults for dimension `d`: `10·d` iterations,
    /// tolerance `1e-8`.
    pub fn for_cg(d: usize) -> Self {
        Self {
            max_iterations: (10 * d).max(1),
            rel_tolerance: 1e-8,
            seed: 0,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.max_iterations == 0 {
            return Err(Error::invalid("max_iterations must be at least 1"));
        }
        if !(self.rel_tolerance > 0.0 && self.rel_tolerance < 1.0) {
            return Err(Error::invalid(format!(
                "rel_tolerance = {} must lie in (0, 1)",
                self.rel_tolerance
            )));
        }
        Ok(())
    }
}

/// An eigenvalue estimate with the safety factor already applied.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EigenEstimate {
    pub value: f64,
    /// Rayleigh quotient before the safety factor.
    pub raw: f64,
    pub iterations: usize,
    /// Advisory: false when the budget ran out first.
    pub converged: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CgSolution {
    pub x: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub relative_residual: f64,
}

fn require_square(m: &SparseMatrix) -> Result<()> {
    if m.is_square() {
        Ok(())
    } else {
        Err(Error::NotSquare {
            nrows: m.nrows(),
            ncols: m.ncols(),
        })
    }
}

/// `√(‖C‖₁ ‖C‖_∞)`, an upper bound on the largest singular value.
pub fn sigma_max_norm_bound(c: &SparseMatrix) -> Result<f64> {
    require_square(c)?;
    Ok((c.norm(NormKind::One) * c.norm(NormKind::Inf)).sqrt())
}

fn unit_start(d: usize, seed: u64) -> Vec<f64> {
    // z₁ + z₂/2 for two Rademacher vectors: a pure ±1 start coincides with
    // eigenvectors such as (1, −1) of small symmetric matrices
    let z1 = rademacher_vector(RademacherStream::new(seed, u64::MAX), d);
    let z2 = rademacher_vector(RademacherStream::new(seed, u64::MAX - 1), d);
    let mut v: Vec<f64> = z1.iter().zip(&z2).map(|(a, b)| a + 0.5 * b).collect();
    let n = norm2(&v);
    v.iter_mut().for_each(|x| *x /= n);
    v
}

/// Largest eigenvalue of a symmetric positive semi-definite operator,
/// inflated by [`POWER_INFLATION`].
pub fn power_iteration<O: LinearOperator + ?Sized>(
    m: &O,
    cfg: &IterativeConfig,
) -> Result<EigenEstimate> {
    cfg.validate()?;
    let d = m.dim();
    if d == 0 {
        return Err(Error::invalid("power iteration on an empty operator"));
    }
    let mut v = unit_start(d, cfg.seed);
    let mut w = vec![0.0; d];
    let mut lambda = 0.0;
    let mut converged = false;
    let mut iterations = 0;
    for it in 1..=cfg.max_iterations {
        iterations = it;
        m.apply(&v, &mut w);
        let rq = dot(&v, &w);
        let nw = norm2(&w);
        if !rq.is_finite() || !nw.is_finite() {
            return Err(Error::NonFinite(format!("power iteration step {it}")));
        }
        if nw == 0.0 {
            lambda = 0.0;
            converged = true;
            break;
        }
        let change = (rq - lambda).abs();
        lambda = rq;
        if it > 1 && change <= cfg.rel_tolerance * rq.abs() {
            converged = true;
            break;
        }
        for (vi, wi) in v.iter_mut().zip(&w) {
            *vi = wi / nw;
        }
    }
    Ok(EigenEstimate {
        value: lambda * POWER_INFLATION,
        raw: lambda,
        iterations,
        converged,
    })
}

/// Solves `M x = b` for symmetric positive definite `M`.
pub fn conjugate_gradient<O: LinearOperator + ?Sized>(
    m: &O,
    b: &[f64],
    cfg: &IterativeConfig,
) -> Result<CgSolution> {
    cfg.validate()?;
    let d = m.dim();
    if b.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: b.len(),
        });
    }
    let bnorm = norm2(b);
    let mut x = vec![0.0; d];
    if bnorm == 0.0 {
        return Ok(CgSolution {
            x,
            iterations: 0,
            converged: true,
            relative_residual: 0.0,
        });
    }
    let mut r = b.to_vec();
    let mut p = r.clone();
    let mut q = vec![0.0; d];
    let mut rr = dot(&r, &r);
    let mut iterations = 0;
    let mut converged = false;
    for it in 1..=cfg.max_iterations {
        iterations = it;
        m.apply(&p, &mut q);
        let curvature = dot(&p, &q);
        if !(curvature > 0.0) {
            return Err(Error::CgBreakdown {
                iteration: it,
                curvature,
            });
        }
        let alpha = rr / curvature;
        for i in 0..d {
            x[i] += alpha * p[i];
            r[i] -= alpha * q[i];
        }
        let rr_new = dot(&r, &r);
        if rr_new.sqrt() <= cfg.rel_tolerance * bnorm {
            converged = true;
            break;
        }
        let beta = rr_new / rr;
        rr = rr_new;
        for i in 0..d {
            p[i] = r[i] + beta * p[i];
        }
    }
    // recompute the true residual so the contract does not rest on the
    // recurrence
    m.apply(&x, &mut q);
    let res: Vec<f64> = b.iter().zip(&q).map(|(bi, qi)| bi - qi).collect();
    let relative_residual = norm2(&res) / bnorm;
    if !relative_residual.is_finite() {
        return Err(Error::NonFinite("conjugate gradient residual".into()));
    }
    Ok(CgSolution {
        x,
        iterations,
        converged: converged && relative_residual <= cfg.rel_tolerance,
        relative_residual,
    })
}

/// Smallest eigenvalue of a symmetric positive definite operator, deflated by
/// [`INVERSE_DEFLATION`]. Each step solves with [`conjugate_gradient`].
pub fn sigma_min_inverse_power<O: LinearOperator + ?Sized>(
    m: &O,
    cfg: &IterativeConfig,
) -> Result<EigenEstimate> {
    cfg.validate()?;
    let d = m.dim();
    if d == 0 {
        return Err(Error::invalid(
            "inverse power iteration on an empty operator",
        ));
    }
    let cg = IterativeConfig::for_cg(d);
    let mut v = unit_start(d, cfg.seed);
    let mut mv = vec![0.0; d];
    let mut lambda = f64::INFINITY;
    let mut converged = false;
    let mut iterations = 0;
    for it in 1..=cfg.max_iterations {
        iterations = it;
        let sol = conjugate_gradient(m, &v, &cg)?;
        let n = norm2(&sol.x);
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::NonFinite(format!("inverse power step {it}")));
        }
        for (vi, xi) in v.iter_mut().zip(&sol.x) {
            *vi = xi / n;
        }
        m.apply(&v, &mut mv);
        let rq = dot(&v, &mv);
        let change = (rq - lambda).abs();
        lambda = rq;
        if change <= cfg.rel_tolerance * rq.abs() {
            converged = true;
            break;
        }
    }
    Ok(EigenEstimate {
        value: lambda * INVERSE_DEFLATION,
        raw: lambda,
        iterations,
        converged,
    })
}

/// Singular value interval for a square non-singular `C`: power iteration on
/// `CᵀC` (capped by the norm bound) and inverse power iteration on `CᵀC`.
pub fn estimate_spectrum_bounds(c: &SparseMatrix, cfg: &IterativeConfig) -> Result<SpectrumBounds> {
    let norm_bound = sigma_max_norm_bound(c)?;
    let ctc = NormalOperator::new(c, 1.0);
    let hi = power_iteration(&ctc, cfg)?.value.sqrt().min(norm_bound);
    let lo = sigma_min_inverse_power(&ctc, cfg)?.value.sqrt();
    SpectrumBounds::new(lo, hi.max(lo))
}
