//! Stochastic log-determinant estimators and their parameter rules.
//!
//! * [`logdet_pd_unit`]: symmetric `B` with spectrum in `[δ, 1 − δ]`. The
//!   Chebyshev interpolant of `log(1 − λ)` is applied to `A = I − B` through
//!   the reference map, i.e. to `X = (I − 2B)/(1 − 2δ)`, and its trace is
//!   estimated with Rademacher probes. Cost `O(m·n·nnz(B))`.
//! * [`logdet_general`]: any non-singular `C` with singular values in
//!   `[σ_min, σ_max]`. Runs the unit estimator on `CᵀC/(σ_min² + σ_max²)`
//!   as a composed operator and undoes the scaling, estimating `log |det C|`.
//! * [`logdet_pd`]: symmetric positive definite input with eigenvalue bounds
//!   `[λ_min, λ_max]`, rescaled by `λ_min + λ_max` without squaring.
//!
//! Sample counts and degrees follow the closed-form bounds in
//! [`theorem1_params`], [`theorem2_params`] and the two multiplicative
//! corollaries. All logarithms are natural.

pub mod exact;

use std::time::{Duration, Instant};

use log::warn;

use crate::chebyshev::logdet_interpolant;
use crate::error::{Error, Result};
use crate::operator::{dot, AffineOperator, LinearOperator, NormalOperator};
use crate::sparsemat::SparseMatrix;
use crate::trace::{chebyshev_trace, estimate_with, TraceEstimate};

pub use exact::{
    exact_logdet_banded, exact_logdet_dense, exact_logdet_dense_unbounded, lu_log_abs_det,
    DenseCholesky, DenseMatrix, ExactMode, DENSE_ORACLE_LIMIT,
};

/// Largest admissible `δ`; rescaling by `σ_min² + σ_max²` reaches exactly 1/2
/// when the bounds coincide.
pub const DELTA_CLAMP: f64 = 0.5 - 1e-9;

/// Smallest `δ` accepted by the general estimator before it asks for better
/// spectral bounds.
pub const DELTA_FLOOR: f64 = 1e-12;

/// Practical defaults for callers not asking for guaranteed parameters.
pub const DEFAULT_SAMPLES: usize = 30;
pub const DEFAULT_DEGREE: usize = 15;

/// Sample count `m`, polynomial degree `n` and probe seed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EstimatorParams {
    pub samples: usize,
    pub degree: usize,
    pub seed: u64,
}

impl EstimatorParams {
    pub fn new(samples: usize, degree: usize, seed: u64) -> Result<Self> {
        if samples == 0 {
            return Err(Error::invalid("sample count m must be at least 1"));
        }
        if degree == 0 {
            return Err(Error::invalid("polynomial degree n must be at least 1"));
        }
        Ok(Self {
            samples,
            degree,
            seed,
        })
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }
}

impl Default for EstimatorParams {
    fn default() -> Self {
        Self {
            samples: DEFAULT_SAMPLES,
            degree: DEFAULT_DEGREE,
            seed: 0,
        }
    }
}

/// Bounds `0 < σ_min ≤ σ_max` on the singular values of the input.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectrumBounds {
    sigma_min: f64,
    sigma_max: f64,
}

impl SpectrumBounds {
    pub fn new(sigma_min: f64, sigma_max: f64) -> Result<Self> {
        if !(sigma_min > 0.0) || !sigma_min.is_finite() || !sigma_max.is_finite() {
            return Err(Error::invalid(format!(
                "sigma_min = {sigma_min} must be positive and finite"
            )));
        }
        if sigma_max < sigma_min {
            return Err(Error::invalid(format!(
                "sigma_max = {sigma_max} is below sigma_min = {sigma_min}"
            )));
        }
        Ok(Self {
            sigma_min,
            sigma_max,
        })
    }

    pub fn sigma_min(&self) -> f64 {
        self.sigma_min
    }

    pub fn sigma_max(&self) -> f64 {
        self.sigma_max
    }

    /// Upper bound `σ_max/σ_min` on the condition number.
    pub fn kappa(&self) -> f64 {
        self.sigma_max / self.sigma_min
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let f = factor.abs();
        Self::new(self.sigma_min * f, self.sigma_max * f)
    }
}

/// Output of an estimator run.
#[derive(Clone, Debug, PartialEq)]
pub struct LogDetEstimate {
    /// Estimated log-determinant Γ.
    pub gamma: f64,
    pub params: EstimatorParams,
    /// Interval parameter of the unit-spectrum subproblem.
    pub delta: f64,
    /// Condition-number bound of the input (1 for the unit problem's own
    /// `[δ, 1 − δ]`, reported as `(1 − δ)/δ`).
    pub kappa: f64,
    pub elapsed: Duration,
    /// Per-probe values on the same scale as `gamma`.
    pub per_sample: Vec<f64>,
}

fn check_delta(delta: f64) -> Result<()> {
    if delta > 0.0 && delta < 0.5 {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "delta = {delta} must lie in (0, 1/2)"
        )))
    }
}

fn check_square(m: &SparseMatrix) -> Result<()> {
    if m.is_square() {
        Ok(())
    } else {
        Err(Error::NotSquare {
            nrows: m.nrows(),
            ncols: m.ncols(),
        })
    }
}

fn warn_if_outside(m: &SparseMatrix, lo: f64, hi: f64, what: &str) {
    if let Ok((g_lo, g_hi)) = m.gershgorin_interval() {
        if g_lo < lo || g_hi > hi {
            warn!(
                "Gershgorin interval [{g_lo}, {g_hi}] of {what} is not contained in [{lo}, {hi}]; \
                 the estimate assumes the spectrum lies inside"
            );
        }
    }
}

/// Unit-spectrum estimator on an operator `B` with eigenvalues in `[δ, 1 − δ]`.
/// Returns `tr(p_n(I − B))` estimated from `params.samples` probes.
pub fn logdet_pd_unit_operator<O: LinearOperator + ?Sized>(
    b: &O,
    delta: f64,
    params: &EstimatorParams,
) -> Result<LogDetEstimate> {
    check_delta(delta)?;
    let start = Instant::now();
    let p = logdet_interpolant(delta, params.degree)?;
    // X = (I − 2B)/(1 − 2δ) carries [δ, 1 − δ] onto [−1, 1]
    let w = 1.0 - 2.0 * delta;
    let x = AffineOperator::new(b, 1.0 / w, -2.0 / w);
    let est = chebyshev_trace(&x, &p, params.samples, params.seed)?;
    Ok(LogDetEstimate {
        gamma: est.value,
        params: *params,
        delta,
        kappa: (1.0 - delta) / delta,
        elapsed: start.elapsed(),
        per_sample: est.per_sample,
    })
}

/// [`logdet_pd_unit_operator`] for an explicit matrix, with a Gershgorin
/// sanity warning when the spectrum might leak outside `[δ, 1 − δ]`.
pub fn logdet_pd_unit(
    b: &SparseMatrix,
    delta: f64,
    params: &EstimatorParams,
) -> Result<LogDetEstimate> {
    check_square(b)?;
    check_delta(delta)?;
    warn_if_outside(b, delta, 1.0 - delta, "B");
    logdet_pd_unit_operator(b, delta, params)
}

/// `log det M` for symmetric positive definite `M` with eigenvalues in
/// `[λ_min, λ_max]`: estimates `log det(M/s) + d log s` with
/// `s = λ_min + λ_max`. Equal bounds pin `M = λ I`, which is answered exactly.
pub fn logdet_pd(
    m: &SparseMatrix,
    lambda_min: f64,
    lambda_max: f64,
    params: &EstimatorParams,
) -> Result<LogDetEstimate> {
    check_square(m)?;
    if !(lambda_min > 0.0) || !(lambda_max >= lambda_min) || !lambda_max.is_finite() {
        return Err(Error::invalid(format!(
            "eigenvalue bounds [{lambda_min}, {lambda_max}] must satisfy 0 < min <= max < inf"
        )));
    }
    warn_if_outside(m, lambda_min, lambda_max, "the input");
    let d = m.nrows() as f64;
    if lambda_min == lambda_max {
        let gamma = d * lambda_min.ln();
        return Ok(LogDetEstimate {
            gamma,
            params: *params,
            delta: DELTA_CLAMP,
            kappa: 1.0,
            elapsed: Duration::ZERO,
            per_sample: vec![gamma; params.samples],
        });
    }
    let s = lambda_min + lambda_max;
    let delta = (lambda_min / s).min(DELTA_CLAMP);
    let b = AffineOperator::new(m, 0.0, 1.0 / s);
    let mut est = logdet_pd_unit_operator(&b, delta, params)?;
    let shift = d * s.ln();
    est.gamma += shift;
    est.per_sample.iter_mut().for_each(|q| *q += shift);
    est.kappa = lambda_max / lambda_min;
    Ok(est)
}

/// `log |det C|` for non-singular square `C` with singular values in
/// `[σ_min, σ_max]`. `CᵀC` is never formed.
pub fn logdet_general(
    c: &SparseMatrix,
    bounds: &SpectrumBounds,
    params: &EstimatorParams,
) -> Result<LogDetEstimate> {
    check_square(c)?;
    let lo2 = bounds.sigma_min * bounds.sigma_min;
    let hi2 = bounds.sigma_max * bounds.sigma_max;
    let s = lo2 + hi2;
    if !s.is_finite() || s == 0.0 {
        return Err(Error::precondition(format!(
            "sigma_min^2 + sigma_max^2 = {s} is not representable"
        )));
    }
    let delta = (lo2 / s).min(DELTA_CLAMP);
    if delta < DELTA_FLOOR {
        return Err(Error::precondition(format!(
            "delta = {delta:e} underflows: condition bound {} is too large; supply tighter spectrum bounds",
            bounds.kappa()
        )));
    }
    let b = NormalOperator::new(c, 1.0 / s);
    let mut est = logdet_pd_unit_operator(&b, delta, params)?;
    let shift = c.nrows() as f64 * s.ln();
    est.gamma = (est.gamma + shift) / 2.0;
    est.per_sample
        .iter_mut()
        .for_each(|q| *q = (*q + shift) / 2.0);
    est.kappa = bounds.kappa();
    Ok(est)
}

/// Same probes as the Chebyshev path but with the truncated Taylor series
/// `log(1 − x) ≈ −Σ_{k=1..n} xᵏ/k` applied to `A = I − B`.
pub fn logdet_taylor_baseline(
    b: &SparseMatrix,
    delta: f64,
    params: &EstimatorParams,
) -> Result<LogDetEstimate> {
    check_square(b)?;
    check_delta(delta)?;
    warn_if_outside(b, delta, 1.0 - delta, "B");
    let start = Instant::now();
    let d = b.nrows();
    let a = AffineOperator::new(b, 1.0, -1.0);
    let est: TraceEstimate = estimate_with(d, params.samples, params.seed, |v| {
        let mut w = v.to_vec();
        let mut next = vec![0.0; d];
        let mut u = vec![0.0; d];
        for k in 1..=params.degree {
            a.apply(&w, &mut next);
            std::mem::swap(&mut w, &mut next);
            let coef = -1.0 / k as f64;
            for (ui, wi) in u.iter_mut().zip(&w) {
                *ui += coef * wi;
            }
        }
        dot(v, &u)
    })?;
    Ok(LogDetEstimate {
        gamma: est.value,
        params: *params,
        delta,
        kappa: (1.0 - delta) / delta,
        elapsed: start.elapsed(),
        per_sample: est.per_sample,
    })
}

fn check_unit(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("{name} = {v} must lie in (0, 1)")))
    }
}

fn to_count(x: f64) -> usize {
    (x.ceil() as usize).max(1)
}

/// Unrounded degree bound for the unit-spectrum estimator:
/// `log((20/ε)(√(2/δ − 1) − 1)·log(2(1/δ − 1))/log(1/(1 − δ))) / log K`.
pub fn unit_degree_bound(delta: f64, eps: f64) -> Result<f64> {
    check_delta(delta)?;
    check_unit("eps", eps)?;
    let inner = 20.0 / eps * ((2.0 / delta - 1.0).sqrt() - 1.0) * (2.0 * (1.0 / delta - 1.0)).ln()
        / -(-delta).ln_1p();
    let rate = crate::chebyshev::convergence_rate(delta);
    Ok(inner.ln() / rate.ln())
}

/// `(m, n)` guaranteeing `|log det B − Γ| ≤ ε |log det B|` with probability
/// `1 − ζ` for spectrum in `[δ, 1 − δ]`: `m = ⌈54 ε⁻² log(2/ζ)⌉` and `n` from
/// [`unit_degree_bound`]. The seed is left at 0.
pub fn theorem1_params(delta: f64, eps: f64, zeta: f64) -> Result<EstimatorParams> {
    check_unit("zeta", zeta)?;
    let n = unit_degree_bound(delta, eps)?;
    let m = 54.0 / (eps * eps) * (2.0 / zeta).ln();
    EstimatorParams::new(to_count(m), to_count(n), 0)
}

/// `𝓜(ε, κ, ζ) = 14 ε⁻² (log(1 + κ²))² log(2/ζ)`.
pub fn general_sample_bound(eps: f64, kappa: f64, zeta: f64) -> f64 {
    let l = (kappa * kappa).ln_1p();
    14.0 / (eps * eps) * l * l * (2.0 / zeta).ln()
}

/// `𝓝(ε, κ)`: with `r = √(2κ² + 1)`,
/// `log((20/ε)(r − 1)·log(1 + κ²)·log(2κ²)/log(1 + κ⁻²)) / log((r + 1)/(r − 1))`.
pub fn general_degree_bound(eps: f64, kappa: f64) -> f64 {
    let k2 = kappa * kappa;
    let r = (2.0 * k2 + 1.0).sqrt();
    let inner = 20.0 / eps * (r - 1.0) * k2.ln_1p() * (2.0 * k2).ln() / (1.0 / k2).ln_1p();
    inner.ln() / ((r + 1.0) / (r - 1.0)).ln()
}

/// `(⌈𝓜⌉, ⌈𝓝⌉)` guaranteeing `|log |det C| − Γ| ≤ ε d` with probability
/// `1 − ζ` when `κ(C) ≤ kappa`.
pub fn theorem2_params(eps: f64, kappa: f64, zeta: f64) -> Result<EstimatorParams> {
    check_unit("eps", eps)?;
    check_unit("zeta", zeta)?;
    if !(kappa >= 1.0) || !kappa.is_finite() {
        return Err(Error::invalid(format!(
            "kappa = {kappa} must be finite and >= 1"
        )));
    }
    EstimatorParams::new(
        to_count(general_sample_bound(eps, kappa, zeta)),
        to_count(general_degree_bound(eps, kappa)),
        0,
    )
}

/// Multiplicative-error parameters when `σ_max < 1`: [`theorem2_params`] at
/// `ε₀ = ε·log(1/σ_max)`, which must stay below 1.
pub fn corollary1_params(eps: f64, zeta: f64, bounds: &SpectrumBounds) -> Result<EstimatorParams> {
    check_unit("eps", eps)?;
    if bounds.sigma_max >= 1.0 {
        return Err(Error::precondition(format!(
            "the sigma_max < 1 regime needs sigma_max < 1, got {}{}",
            bounds.sigma_max,
            if bounds.sigma_min > 1.0 {
                "; use the sigma_min > 1 regime"
            } else {
                ""
            }
        )));
    }
    let eps0 = eps * (1.0 / bounds.sigma_max).ln();
    if eps0 >= 1.0 {
        return Err(Error::precondition(format!(
            "eps must be below 2/log(1/sigma_max^2) = {}",
            2.0 / (1.0 / (bounds.sigma_max * bounds.sigma_max)).ln()
        )));
    }
    theorem2_params(eps0, bounds.kappa(), zeta)
}

/// Multiplicative-error parameters when `σ_min > 1`: [`theorem2_params`] at
/// `ε₀ = ε·log σ_min`, which must stay below 1.
pub fn corollary2_params(eps: f64, zeta: f64, bounds: &SpectrumBounds) -> Result<EstimatorParams> {
    check_unit("eps", eps)?;
    if bounds.sigma_min <= 1.0 {
        return Err(Error::precondition(format!(
            "the sigma_min > 1 regime needs sigma_min > 1, got {}{}",
            bounds.sigma_min,
            if bounds.sigma_max < 1.0 {
                "; use the sigma_max < 1 regime"
            } else {
                ""
            }
        )));
    }
    let eps0 = eps * bounds.sigma_min.ln();
    if eps0 >= 1.0 {
        return Err(Error::precondition(format!(
            "eps must be below 2/log(sigma_min^2) = {}",
            2.0 / (bounds.sigma_min * bounds.sigma_min).ln()
        )));
    }
    theorem2_params(eps0, bounds.kappa(), zeta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn scalar_identity_reduces_to_interpolation() {
        let b = SparseMatrix::identity(4).scaled(0.5);
        for n in [4, 10, 20] {
            let params = EstimatorParams::new(7, n, 3).unwrap();
            let est = logdet_pd_unit(&b, 0.3, &params).unwrap();
            let env = crate::chebyshev::error_envelope(0.3, n).unwrap();
            assert!((est.gamma - 4.0 * 0.5f64.ln()).abs() <= 4.0 * env.bound);
            let first = est.per_sample[0];
            assert!(est.per_sample.iter().all(|&q| (q - first).abs() < 1e-12));
        }
    }

    #[test]
    fn two_by_two_diagonal() {
        let b = SparseMatrix::from_diagonal(&[0.2, 0.4]);
        let params = EstimatorParams::new(50, 30, 11).unwrap();
        let est = logdet_pd_unit(&b, 0.15, &params).unwrap();
        let exact = 0.08f64.ln();
        assert!(
            (est.gamma - exact).abs() <= 0.05 * exact.abs(),
            "{}",
            est.gamma
        );
    }

    #[test]
    fn top_of_interval() {
        let delta = 0.2;
        let b = SparseMatrix::identity(6).scaled(1.0 - delta);
        let est = logdet_pd_unit(&b, delta, &EstimatorParams::new(3, 25, 0).unwrap()).unwrap();
        assert_relative_eq!(est.gamma, 6.0 * (1.0 - delta).ln(), max_relative = 1e-6);
    }

    #[test]
    fn delta_out_of_range() {
        let b = SparseMatrix::identity(2).scaled(0.5);
        let p = EstimatorParams::default();
        assert!(logdet_pd_unit(&b, 0.0, &p).is_err());
        assert!(logdet_pd_unit(&b, 0.5, &p).is_err());
        assert!(logdet_taylor_baseline(&b, 0.7, &p).is_err());
        assert!(EstimatorParams::new(0, 3, 0).is_err());
        assert!(EstimatorParams::new(3, 0, 0).is_err());
    }

    #[test]
    fn general_identity_multiple() {
        let c = SparseMatrix::identity(3).scaled(2.0);
        let bounds = SpectrumBounds::new(2.0, 2.0).unwrap();
        let est = logdet_general(&c, &bounds, &EstimatorParams::new(5, 15, 0).unwrap()).unwrap();
        assert!(est.delta < 0.5);
        assert_relative_eq!(est.gamma, 3.0 * 2f64.ln(), max_relative = 1e-6);
    }

    #[test]
    fn general_mixed_sign_diagonal() {
        let c = SparseMatrix::from_diagonal(&[1.0, -3.0]);
        let bounds = SpectrumBounds::new(1.0, 3.0).unwrap();
        let p = theorem2_params(0.05, 3.0, 0.1).unwrap().with_seed(5);
        let est = logdet_general(&c, &bounds, &p).unwrap();
        assert!(
            (est.gamma - 3f64.ln()).abs() <= 0.05 * 3f64.ln(),
            "{}",
            est.gamma
        );
    }

    #[test]
    fn general_rejects_extreme_condition() {
        let c = SparseMatrix::identity(2);
        let bounds = SpectrumBounds::new(1e-7, 1.0).unwrap();
        assert!(matches!(
            logdet_general(&c, &bounds, &EstimatorParams::default()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn pd_equal_bounds_is_exact() {
        let m = SparseMatrix::identity(4).scaled(0.5);
        let est = logdet_pd(&m, 0.5, 0.5, &EstimatorParams::default()).unwrap();
        assert_eq!(est.gamma, 4.0 * 0.5f64.ln());
        let id = SparseMatrix::identity(9);
        assert_eq!(
            logdet_pd(&id, 1.0, 1.0, &EstimatorParams::default())
                .unwrap()
                .gamma,
            0.0
        );
    }

    #[test]
    fn pd_convenience_path() {
        let m = SparseMatrix::from_diagonal(&[0.2, 0.4]);
        let params = EstimatorParams::new(50, 30, 7).unwrap();
        let est = logdet_pd(&m, 0.2, 0.4, &params).unwrap();
        assert!((est.gamma - 0.08f64.ln()).abs() < 1e-3 * 0.08f64.ln().abs());
        assert_relative_eq!(est.kappa, 2.0);
    }

    #[test]
    fn taylor_scalar_example() {
        let b = SparseMatrix::from_diagonal(&[0.5]);
        let est =
            logdet_taylor_baseline(&b, 0.25, &EstimatorParams::new(1, 2, 0).unwrap()).unwrap();
        assert_relative_eq!(est.gamma, -0.625, epsilon = 1e-15);
        let long =
            logdet_taylor_baseline(&b, 0.25, &EstimatorParams::new(1, 60, 0).unwrap()).unwrap();
        assert_relative_eq!(long.gamma, 0.5f64.ln(), epsilon = 1e-15);
    }

    #[test]
    fn theorem1_params_examples() {
        let p = theorem1_params(0.2, 0.5, 0.1).unwrap();
        assert_eq!(p.samples, 648);
        let p = theorem1_params(0.1, 0.01, 0.5).unwrap();
        assert_eq!(p.degree, 26);
        // monotone non-increasing in eps and delta
        let deltas = [0.02, 0.05, 0.1, 0.2, 0.3, 0.45];
        let epss = [0.01, 0.05, 0.1, 0.3, 0.6, 0.9];
        for w in deltas.windows(2) {
            for &e in &epss {
                assert!(
                    theorem1_params(w[1], e, 0.1).unwrap().degree
                        <= theorem1_params(w[0], e, 0.1).unwrap().degree
                );
            }
        }
        for w in epss.windows(2) {
            for &d in &deltas {
                assert!(
                    theorem1_params(d, w[1], 0.1).unwrap().degree
                        <= theorem1_params(d, w[0], 0.1).unwrap().degree
                );
            }
        }
    }

    #[test]
    fn theorem2_params_examples() {
        let raw_m = general_sample_bound(0.1, 1.0, 0.1);
        assert_relative_eq!(
            raw_m,
            1400.0 * 2f64.ln().powi(2) * 20f64.ln(),
            max_relative = 1e-14
        );
        let raw_n = general_degree_bound(0.1, 1.0);
        assert!((raw_n - 3.51).abs() < 0.01, "{raw_n}");
        let p = theorem2_params(0.1, 1.0, 0.1).unwrap();
        assert_eq!(p.samples, raw_m.ceil() as usize);
        assert_eq!(p.degree, 4);

        assert_relative_eq!(
            general_sample_bound(0.05, 7.0, 0.2) / general_sample_bound(0.1, 7.0, 0.2),
            4.0,
            max_relative = 1e-14
        );
        let mut prev = 0.0;
        for k in [1.0, 2.0, 5.0, 10.0, 100.0, 1e3, 1e4] {
            let n = general_degree_bound(0.1, k);
            assert!(n > prev);
            prev = n;
        }
        assert!(theorem2_params(0.1, 0.5, 0.1).is_err());
    }

    #[test]
    fn corollary_params_examples() {
        let e = std::f64::consts::E;
        let b1 = SpectrumBounds::new(0.05, 1.0 / e).unwrap();
        let p1 = corollary1_params(0.3, 0.1, &b1).unwrap();
        let p_ref = theorem2_params(0.3, b1.kappa(), 0.1).unwrap();
        // log(1/σ_max) = 1 up to rounding
        assert!(p1.samples.abs_diff(p_ref.samples) <= 1);
        assert_eq!(p1.degree, p_ref.degree);

        let b2 = SpectrumBounds::new(e, 4.0 * e).unwrap();
        let p2 = corollary2_params(0.3, 0.1, &b2).unwrap();
        let p_ref = theorem2_params(0.3, 4.0, 0.1).unwrap();
        assert!(p2.samples.abs_diff(p_ref.samples) <= 1);
        assert_eq!(p2.degree, p_ref.degree);

        let near = SpectrumBounds::new(0.5, 0.999).unwrap();
        let p = corollary1_params(0.5, 0.1, &near).unwrap();
        let base = theorem2_params(0.5, near.kappa(), 0.1).unwrap();
        let ratio = p.samples as f64 / base.samples as f64;
        assert!(ratio > 0.9e6 && ratio < 1.1e6, "{ratio}");

        assert!(matches!(
            corollary1_params(0.3, 0.1, &b2),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            corollary2_params(0.3, 0.1, &b1),
            Err(Error::Precondition(_))
        ));
        // eps0 would reach 1
        let tiny = SpectrumBounds::new(1e-3, 1e-2).unwrap();
        assert!(corollary1_params(0.5, 0.1, &tiny).is_err());
    }
}
