//! Hutchinson stochastic trace estimation with Rademacher probes.
//!
//! Every probe vector comes from its own counter-addressed ChaCha stream
//! (seed, sample index), so an estimate is a pure function of its inputs no
//! matter how rayon schedules the samples. Per-sample values are collected in
//! sample order and reduced by pairwise summation.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::chebyshev::ChebyshevInterpolant;
use crate::error::{Error, Result};
use crate::operator::{dot, LinearOperator};

/// Addresses one reproducible ±1 sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RademacherStream {
    pub seed: u64,
    pub stream_index: u64,
}

impl RademacherStream {
    pub fn new(seed: u64, stream_index: u64) -> Self {
        Self { seed, stream_index }
    }

    /// Fills `out` with ±1, one random bit per entry.
    pub fn fill(&self, out: &mut [f64]) {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_index);
        for chunk in out.chunks_mut(64) {
            let mut bits = rng.next_u64();
            for v in chunk {
                *v = if bits & 1 == 1 { 1.0 } else { -1.0 };
                bits >>= 1;
            }
        }
    }
}

pub fn rademacher_vector(stream: RademacherStream, d: usize) -> Vec<f64> {
    let mut v = vec![0.0; d];
    stream.fill(&mut v);
    v
}

/// Outcome of a Hutchinson run.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceEstimate {
    pub value: f64,
    pub samples: usize,
    /// The `m` quadratic forms `zᵢᵀ f(A) zᵢ`, in sample order.
    pub per_sample: Vec<f64>,
}

impl TraceEstimate {
    fn from_samples(per_sample: Vec<f64>) -> Self {
        let samples = per_sample.len();
        let value = pairwise_sum(&per_sample) / samples as f64;
        Self {
            value,
            samples,
            per_sample,
        }
    }

    /// Unbiased sample variance of the per-sample values (0 for one sample).
    pub fn sample_variance(&self) -> f64 {
        if self.samples < 2 {
            return 0.0;
        }
        let mean = self.value;
        let ss: Vec<f64> = self.per_sample.iter().map(|q| (q - mean).powi(2)).collect();
        pairwise_sum(&ss) / (self.samples - 1) as f64
    }

    pub fn standard_error(&self) -> f64 {
        (self.sample_variance() / self.samples as f64).sqrt()
    }
}

/// Deterministic pairwise summation.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    const BLOCK: usize = 8;
    if xs.len() <= BLOCK {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Runs `m` probes through `quadratic_form`, which receives the probe vector
/// and returns one sample. Samples run in parallel; the result does not
/// depend on the thread count.
pub fn estimate_with<F>(d: usize, m: usize, seed: u64, quadratic_form: F) -> Result<TraceEstimate>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    if m == 0 {
        return Err(Error::invalid("sample count m must be at least 1"));
    }
    if d == 0 {
        return Err(Error::invalid("dimension must be at least 1"));
    }
    let per_sample = (0..m as u64)
        .into_par_iter()
        .map(|i| {
            let v = rademacher_vector(RademacherStream::new(seed, i), d);
            let q = quadratic_form(&v);
            if q.is_finite() {
                Ok(q)
            } else {
                Err(Error::NonFinite(format!(
                    "quadratic form of sample {i} is {q}"
                )))
            }
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(TraceEstimate::from_samples(per_sample))
}

/// `(1/m) Σ zᵢᵀ A zᵢ`.
pub fn hutchinson_trace<O: LinearOperator + ?Sized>(
    op: &O,
    m: usize,
    seed: u64,
) -> Result<TraceEstimate> {
    let d = op.dim();
    estimate_with(d, m, seed, |v| {
        let mut y = vec![0.0; d];
        op.apply(v, &mut y);
        dot(v, &y)
    })
}

/// Estimates `tr(p(A))` for a Chebyshev expansion `p = Σ c_j T_j` using the
/// vector recurrence `w_{j+1} = 2A w_j − w_{j−1}`: `n` operator applications
/// per sample for a degree-`n` expansion.
///
/// The expansion is applied on the reference interval; the caller supplies
/// an operator whose spectrum lies in `[-1, 1]`.
pub fn chebyshev_trace<O: LinearOperator + ?Sized>(
    op: &O,
    p: &ChebyshevInterpolant,
    m: usize,
    seed: u64,
) -> Result<TraceEstimate> {
    let d = op.dim();
    let c = p.coefficients();
    estimate_with(d, m, seed, |v| dot(v, &chebyshev_apply(op, c, v)))
}

/// `u = Σ c_j T_j(A) v`.
pub(crate) fn chebyshev_apply<O: LinearOperator + ?Sized>(
    op: &O,
    c: &[f64],
    v: &[f64],
) -> Vec<f64> {
    let d = v.len();
    let mut u: Vec<f64> = v.iter().map(|x| c[0] * x).collect();
    if c.len() == 1 {
        return u;
    }
    let mut w0 = v.to_vec();
    let mut w1 = vec![0.0; d];
    op.apply(v, &mut w1);
    for (ui, wi) in u.iter_mut().zip(&w1) {
        *ui += c[1] * wi;
    }
    let mut w2 = vec![0.0; d];
    for &cj in &c[2..] {
        op.apply(&w1, &mut w2);
        for ((w2i, &w0i), ui) in w2.iter_mut().zip(&w0).zip(u.iter_mut()) {
            *w2i = 2.0 * *w2i - w0i;
            *ui += cj * *w2i;
        }
        // rotate (w0, w1, w2) ← (w1, w2, w0)
        std::mem::swap(&mut w0, &mut w1);
        std::mem::swap(&mut w1, &mut w2);
    }
    u
}

/// Sample count `⌈6 ε₀⁻² log(2/ζ₀)⌉` that makes the Hutchinson estimate of a
/// definite matrix `ε₀`-relatively accurate with probability `1 − ζ₀`.
pub fn trace_sample_bound(eps0: f64, zeta0: f64) -> Result<usize> {
    if !(eps0 > 0.0 && eps0 < 1.0) || !(zeta0 > 0.0 && zeta0 < 1.0) {
        return Err(Error::invalid(format!(
            "eps0 = {eps0} and zeta0 = {zeta0} must lie in (0, 1)"
        )));
    }
    Ok((6.0 / (eps0 * eps0) * (2.0 / zeta0).ln()).ceil() as usize)
}
