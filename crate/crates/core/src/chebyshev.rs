//! Chebyshev interpolation in the first-kind nodes.
//!
//! The log-determinant estimators need a single scalar object: the degree-`n`
//! interpolant of `λ ↦ log(1 − λ)` on `[δ, 1 − δ]`. It is built on the
//! reference interval `[-1, 1]` for the composite
//! `x ↦ log(1 − ((1 − 2δ)x + 1)/2)` and pulled back through the affine map
//! `λ ↦ (2λ − 1)/(1 − 2δ)`.
//!
//! Besides the interpolant this module carries the computable a-priori
//! error envelope `20·log(2(1/δ − 1)) / ((K − 1)Kⁿ)` with
//! `K = (√(2−δ) + √δ)/(√(2−δ) − √δ)`, and the sufficient condition under
//! which the interpolant stays strictly negative on `[δ, 1 − δ]`.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Slack allowed when checking that an argument lies in the domain, so that
/// grid endpoints computed in floating point are not rejected.
const DOMAIN_SLACK: f64 = 64.0 * f64::EPSILON;

/// `cos(π(k + 1/2)/(n + 1))` for `k = 0..=n`, in decreasing order.
pub fn chebyshev_nodes(n: usize) -> Vec<f64> {
    let denom = (n + 1) as f64;
    (0..=n)
        .map(|k| (PI * (k as f64 + 0.5) / denom).cos())
        .collect()
}

/// `p(x) = Σ c_j T_j(x)`, optionally tied to a target interval `[δ, 1 − δ]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChebyshevInterpolant {
    coefficients: Vec<f64>,
    delta: Option<f64>,
}

impl ChebyshevInterpolant {
    /// A raw expansion on `[-1, 1]`.
    pub fn from_coefficients(coefficients: Vec<f64>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::invalid(
                "an expansion needs at least one coefficient",
            ));
        }
        Ok(Self {
            coefficients,
            delta: None,
        })
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn delta(&self) -> Option<f64> {
        self.delta
    }

    /// Evaluates at `x`. Raw interpolants accept `x ∈ [-1, 1]`; mapped ones
    /// accept `x ∈ [δ, 1 − δ]` and apply the affine map internally.
    pub fn evaluate(&self, x: f64) -> Result<f64> {
        let t = match self.delta {
            None => {
                if !(-1.0 - DOMAIN_SLACK..=1.0 + DOMAIN_SLACK).contains(&x) {
                    return Err(Error::invalid(format!("{x} lies outside [-1, 1]")));
                }
                x.clamp(-1.0, 1.0)
            }
            Some(delta) => {
                if !(delta - DOMAIN_SLACK..=1.0 - delta + DOMAIN_SLACK).contains(&x) {
                    return Err(Error::invalid(format!(
                        "{x} lies outside [{delta}, {}]",
                        1.0 - delta
                    )));
                }
                to_reference(delta, x).clamp(-1.0, 1.0)
            }
        };
        Ok(self.evaluate_reference(t))
    }

    /// Clenshaw summation on the reference interval, no checks.
    pub fn evaluate_reference(&self, x: f64) -> f64 {
        let c = &self.coefficients;
        let (mut b1, mut b2) = (0.0, 0.0);
        for &cj in c[1..].iter().rev() {
            let b0 = cj + 2.0 * x * b1 - b2;
            b2 = b1;
            b1 = b0;
        }
        c[0] + x * b1 - b2
    }
}

/// `λ ↦ (2λ − 1)/(1 − 2δ)`, sending `[δ, 1 − δ]` onto `[-1, 1]`.
pub fn to_reference(delta: f64, lambda: f64) -> f64 {
    (2.0 * lambda - 1.0) / (1.0 - 2.0 * delta)
}

/// Inverse of [`to_reference`].
pub fn from_reference(delta: f64, x: f64) -> f64 {
    ((1.0 - 2.0 * delta) * x + 1.0) / 2.0
}

/// Degree-`n` interpolant of `f` in the Chebyshev nodes, coefficients by the
/// direct O(n²) node sums. `T_j(x_k) = cos(jθ_k)` is taken from the reduced
/// angle rather than a recurrence, which keeps the coefficients accurate to a
/// few ulps at high degree.
pub fn interpolate<F: Fn(f64) -> f64>(f: F, n: usize) -> Result<ChebyshevInterpolant> {
    let nodes = chebyshev_nodes(n);
    let values = nodes
        .iter()
        .map(|&xk| {
            let fk = f(xk);
            if fk.is_finite() {
                Ok(fk)
            } else {
                Err(Error::NonFinite(format!("f({xk}) = {fk}")))
            }
        })
        .collect::<Result<Vec<f64>>>()?;
    // θ_k = π(2k + 1)/(2(n + 1)); jθ_k is reduced modulo 2π in integers
    let period = 4 * (n + 1);
    let unit = PI / (2 * (n + 1)) as f64;
    let denom = (n + 1) as f64;
    let coefficients = (0..=n)
        .map(|j| {
            let s: f64 = values
                .iter()
                .enumerate()
                .map(|(k, fk)| fk * ((j * (2 * k + 1) % period) as f64 * unit).cos())
                .sum();
            if j == 0 {
                s / denom
            } else {
                2.0 * s / denom
            }
        })
        .collect();
    Ok(ChebyshevInterpolant {
        coefficients,
        delta: None,
    })
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

/// Interpolant of `log(1 − λ)` on `[δ, 1 − δ]`.
pub fn logdet_interpolant(delta: f64, n: usize) -> Result<ChebyshevInterpolant> {
    check_delta(delta)?;
    if n == 0 {
        return Err(Error::invalid("polynomial degree must be at least 1"));
    }
    let mut p = interpolate(|x| (1.0 - from_reference(delta, x)).ln(), n)?;
    p.delta = Some(delta);
    Ok(p)
}

/// A-priori uniform error bound for [`logdet_interpolant`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorEnvelope {
    /// Bernstein-ellipse parameter `K > 1`.
    pub rate: f64,
    /// Bound `M = 5·log(2(1/δ − 1))` on the analytic continuation.
    pub analytic_bound: f64,
    /// `4M / ((K − 1)Kⁿ)`.
    pub bound: f64,
}

pub fn convergence_rate(delta: f64) -> f64 {
    let a = (2.0 - delta).sqrt();
    let b = delta.sqrt();
    (a + b) / (a - b)
}

pub fn error_envelope(delta: f64, n: usize) -> Result<ErrorEnvelope> {
    check_delta(delta)?;
    let rate = convergence_rate(delta);
    let analytic_bound = 5.0 * (2.0 * (1.0 / delta - 1.0)).ln();
    let bound = 4.0 * analytic_bound / ((rate - 1.0) * rate.powi(n as i32));
    Ok(ErrorEnvelope {
        rate,
        analytic_bound,
        bound,
    })
}

/// Sufficient condition for the interpolant to be negative on `[δ, 1 − δ]`:
/// the error envelope does not exceed `log(1/(1 − δ))`.
pub fn negativity_holds(delta: f64, n: usize) -> Result<bool> {
    let env = error_envelope(delta, n)?;
    Ok(env.bound <= -(-delta).ln_1p())
}
