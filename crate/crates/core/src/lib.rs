//! Stochastic log-determinant estimation for large sparse matrices.
//!
//! `log det B = tr(log B)`; replacing `log` by a degree-`n` Chebyshev
//! interpolant and the trace by an `m`-probe Hutchinson average yields an
//! estimator whose cost is `O(m·n·nnz)`. The modules are layered:
//!
//! * [`sparsemat`]: compressed-row storage, products, norms, Matrix Market I/O.
//! * [`chebyshev`]: scalar interpolation of `log(1 − x)` and its error bounds.
//! * [`trace`]: Rademacher probes and the Chebyshev-recurrence trace estimator.
//! * [`logdet`]: the estimators, parameter rules and exact oracles.
//! * [`spectral`]: singular value / eigenvalue bounds feeding the estimators.
//! * [`spanning`]: spanning-tree counts through reduced Laplacians.
//! * [`gmrf`]: lattice Gaussian Markov random fields and likelihood scans.
//! * [`synth`]: random test matrices.
//!
//! ```
//! use cheblogdet::{logdet_pd, EstimatorParams, SparseMatrix};
//!
//! let m = SparseMatrix::from_diagonal(&[0.2, 0.4]);
//! let est = logdet_pd(&m, 0.2, 0.4, &EstimatorParams::new(50, 30, 7).unwrap()).unwrap();
//! assert!((est.gamma - 0.08f64.ln()).abs() < 1e-2);
//! ```

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod chebyshev;
pub mod error;
pub mod gmrf;
pub mod logdet;
pub mod operator;
pub mod spanning;
pub mod sparsemat;
pub mod spectral;
pub mod synth;
pub mod trace;

pub use chebyshev::{logdet_interpolant, ChebyshevInterpolant, ErrorEnvelope};
pub use error::{Error, ErrorKind, Result};
pub use logdet::{
    logdet_general, logdet_pd, logdet_pd_unit, logdet_taylor_baseline, theorem1_params,
    theorem2_params, EstimatorParams, LogDetEstimate, SpectrumBounds,
};
pub use operator::LinearOperator;
pub use sparsemat::{NormKind, SparseMatrix, TripletBuffer};
pub use trace::{RademacherStream, TraceEstimate};
