use std::path::Path;
use std::time::Instant;

use cheblogdet::gmrf::{
    exact_loglik_scan, gibbs_sample, lattice_precision, loglik_scan, rho_grid, scan_argmax,
    LatticeSpec,
};
use cheblogdet::logdet::{
    exact_logdet_dense_unbounded, theorem1_params, theorem2_params, DenseMatrix, ExactMode,
    DELTA_CLAMP, DENSE_ORACLE_LIMIT,
};
use cheblogdet::spanning::{
    count_exact, count_spanning_trees, find_hub, read_graph, reduced_laplacian, DETERMINANT_LIMIT,
};
use cheblogdet::sparsemat::read_matrix_market;
use cheblogdet::spectral::{estimate_spectrum_bounds, sigma_max_norm_bound, IterativeConfig};
use cheblogdet::synth::{random_sparse_pd, RandomPdSpec, DEFAULT_WEIGHT};
use cheblogdet::{
    logdet_general, logdet_pd, EstimatorParams, LogDetEstimate, NormKind, SparseMatrix,
    SpectrumBounds,
};

use crate::args::{
    BenchArgs, ExactArgs, ExactMethod, GmrfScanArgs, LogdetArgs, Sampling, SpanningArgs,
};
use crate::error::CliError;
use crate::report::{BenchRow, InputInfo, RunReport, ScanInfo, ScanRow, SpanningInfo};

type Result<T> = std::result::Result<T, CliError>;

fn describe(path: &Path, m: &SparseMatrix) -> InputInfo {
    InputInfo {
        path: Some(path.display().to_string()),
        nrows: m.nrows(),
        ncols: m.ncols(),
        nnz: m.nnz(),
    }
}

fn fixed_params(s: &Sampling) -> Result<EstimatorParams> {
    Ok(EstimatorParams::new(
        s.m.unwrap_or(cheblogdet::logdet::DEFAULT_SAMPLES),
        s.n.unwrap_or(cheblogdet::logdet::DEFAULT_DEGREE),
        s.seed,
    )?)
}

fn check_dense_guard(d: usize, allow_large: bool) -> Result<()> {
    if d > DENSE_ORACLE_LIMIT && !allow_large {
        return Err(cheblogdet::Error::TooLarge {
            what: "dense exact log-determinant",
            size: d,
            limit: DENSE_ORACLE_LIMIT,
        }
        .into());
    }
    Ok(())
}

fn dense_logdet(m: &SparseMatrix, mode: ExactMode, allow_large: bool) -> Result<f64> {
    if !m.is_square() {
        return Err(cheblogdet::Error::NotSquare {
            nrows: m.nrows(),
            ncols: m.ncols(),
        }
        .into());
    }
    check_dense_guard(m.nrows(), allow_large)?;
    Ok(exact_logdet_dense_unbounded(
        &DenseMatrix::from_sparse(m)?,
        mode,
    )?)
}

fn record_estimate(report: &mut RunReport, est: &LogDetEstimate) {
    report.estimate = Some(est.gamma);
    report.params.samples = Some(est.params.samples);
    report.params.degree = Some(est.params.degree);
    report.params.delta = Some(est.delta);
    report.params.seed = Some(est.params.seed);
}

pub fn logdet(a: &LogdetArgs, report: &mut RunReport) -> Result<()> {
    let c = read_matrix_market(&a.matrix)?;
    report.input = Some(describe(&a.matrix, &c));
    let s = &a.sampling;
    report.params.eps = s.eps;
    report.params.zeta = s.zeta;

    let (est, mode) = if a.pd {
        let (lo, hi) = if a.auto_bounds {
            let b = estimate_spectrum_bounds(&c, &IterativeConfig::default())?;
            (b.sigma_min(), b.sigma_max())
        } else {
            match (a.lambda_min, a.lambda_max) {
                (Some(lo), Some(hi)) => (lo, hi),
                _ => {
                    return Err(CliError::Precondition(
                        "--pd needs --lambda-min and --lambda-max, or --auto-bounds".into(),
                    ))
                }
            }
        };
        report.params.method = Some("pd".into());
        report.params.lambda_min = Some(lo);
        report.params.lambda_max = Some(hi);
        let params = match (s.eps, s.zeta) {
            (Some(eps), Some(zeta)) => {
                // relative guarantee on the normalized matrix M/(λ_min + λ_max)
                let delta = (lo / (lo + hi)).min(DELTA_CLAMP);
                theorem1_params(delta, eps, zeta)?.with_seed(s.seed)
            }
            _ => fixed_params(s)?,
        };
        (logdet_pd(&c, lo, hi, &params)?, ExactMode::CholeskyPd)
    } else {
        let bounds = if a.auto_bounds {
            estimate_spectrum_bounds(&c, &IterativeConfig::default())?
        } else {
            let lo = a.sigma_min.ok_or_else(|| {
                CliError::Precondition(
                    "the general path needs --sigma-min, or --auto-bounds".into(),
                )
            })?;
            let hi = match a.sigma_max {
                Some(hi) => hi,
                None => sigma_max_norm_bound(&c)?,
            };
            SpectrumBounds::new(lo, hi)?
        };
        report.params.method = Some("general".into());
        report.params.sigma_min = Some(bounds.sigma_min());
        report.params.sigma_max = Some(bounds.sigma_max());
        let params = match (s.eps, s.zeta) {
            (Some(eps), Some(zeta)) => {
                theorem2_params(eps, bounds.kappa(), zeta)?.with_seed(s.seed)
            }
            _ => fixed_params(s)?,
        };
        (logdet_general(&c, &bounds, &params)?, ExactMode::LuAbs)
    };
    record_estimate(report, &est);
    if a.oracle {
        let exact = dense_logdet(&c, mode, false)?;
        report.set_oracle(exact);
    }
    Ok(())
}

pub fn exact(a: &ExactArgs, report: &mut RunReport) -> Result<()> {
    let m = read_matrix_market(&a.matrix)?;
    report.input = Some(describe(&a.matrix, &m));
    let (mode, name) = match a.method {
        ExactMethod::Cholesky => (ExactMode::CholeskyPd, "cholesky"),
        ExactMethod::Lu => (ExactMode::LuAbs, "lu"),
    };
    report.params.method = Some(name.into());
    let value = dense_logdet(&m, mode, a.allow_large)?;
    report.estimate = Some(value);
    report.oracle = Some(value);
    report.relative_error = Some(0.0);
    Ok(())
}

pub fn spanning(a: &SpanningArgs, report: &mut RunReport) -> Result<()> {
    let g = read_graph(&a.graph)?;
    let hub = find_hub(&g)?;
    let l = reduced_laplacian(&g, hub)?;
    report.input = Some(describe(&a.graph, &l));
    let est = count_spanning_trees(&g, a.eps, a.zeta, a.seed)?;
    record_estimate(report, &est.estimate);
    report.params.method = Some("spanning".into());
    report.params.eps = Some(a.eps);
    report.params.zeta = Some(a.zeta);
    report.params.sigma_min = Some(1.0);
    report.params.sigma_max = Some(est.estimate.kappa);

    let mut info = SpanningInfo {
        vertices: g.nvertices(),
        edges: g.nedges(),
        hub,
        avg_degree: est.stats.avg,
        max_degree: est.stats.max,
        exact_tau: None,
        exact_method: None,
    };
    if !a.no_exact && g.nvertices() <= DETERMINANT_LIMIT {
        let exact = count_exact(&g)?;
        info.exact_tau = exact.tau;
        info.exact_method = Some(format!("{:?}", exact.method).to_lowercase());
        report.set_oracle(exact.log_tau);
    }
    report.spanning = Some(info);
    Ok(())
}

pub fn gmrf_scan(a: &GmrfScanArgs, report: &mut RunReport) -> Result<()> {
    if !(a.rho_step > 0.0) || !(a.rho_min <= a.rho_max) {
        return Err(CliError::Precondition(format!(
            "empty rho grid: [{}, {}] in steps of {}",
            a.rho_min, a.rho_max, a.rho_step
        )));
    }
    let spec = LatticeSpec::new(a.rows, a.cols, a.true_rho)?;
    let j = lattice_precision(&spec);
    report.input = Some(InputInfo {
        path: None,
        nrows: j.nrows(),
        ncols: j.ncols(),
        nnz: j.nnz(),
    });
    let params = EstimatorParams::new(
        a.m.unwrap_or(cheblogdet::logdet::DEFAULT_SAMPLES),
        a.n.unwrap_or(cheblogdet::logdet::DEFAULT_DEGREE),
        a.seed,
    )?;
    report.params.method = Some("gmrf-scan".into());
    report.params.samples = Some(params.samples);
    report.params.degree = Some(params.degree);
    report.params.seed = Some(a.seed);

    let x = gibbs_sample(&spec, a.sweeps, a.seed)?;
    let rhos = rho_grid(a.rho_min, a.rho_max, a.rho_step);
    let scan = loglik_scan(a.rows, a.cols, &x, &rhos, &params)?;
    let argmax = scan_argmax(&scan).expect("grid is non-empty");
    let exact = if a.exact {
        Some(exact_loglik_scan(a.rows, a.cols, &x, &rhos)?)
    } else {
        None
    };
    let points = scan
        .iter()
        .enumerate()
        .map(|(k, p)| ScanRow {
            rho: p.rho,
            logdet: p.logdet,
            quadratic: p.quadratic,
            loglik: p.loglik,
            exact_loglik: exact.as_ref().map(|e| e[k].loglik),
        })
        .collect();
    report.scan = Some(ScanInfo {
        rows: a.rows,
        cols: a.cols,
        true_rho: a.true_rho,
        sweeps: a.sweeps,
        argmax,
        exact_argmax: exact.as_deref().and_then(scan_argmax),
        points,
    });
    Ok(())
}

pub fn bench(a: &BenchArgs, report: &mut RunReport) -> Result<()> {
    if a.nnz_per_row < 2 {
        return Err(CliError::Precondition(
            "--nnz-per-row must be at least 2".into(),
        ));
    }
    let params = EstimatorParams::new(a.m, a.n, a.seed)?;
    report.params.method = Some("general".into());
    report.params.samples = Some(a.m);
    report.params.degree = Some(a.n);
    report.params.sigma_min = Some(DEFAULT_WEIGHT);
    report.params.seed = Some(a.seed);
    let mut rows = Vec::with_capacity(a.sizes.len());
    for &d in &a.sizes {
        let mut spec = RandomPdSpec::new(d, a.seed);
        spec.offdiag_per_row = a.nnz_per_row / 2;
        spec.band = a.band;
        let c = random_sparse_pd(&spec)?;
        // eigenvalues of the generator lie in [weight, |C|_1]
        let bounds = SpectrumBounds::new(DEFAULT_WEIGHT, c.norm(NormKind::One))?;
        let start = Instant::now();
        let est = logdet_general(&c, &bounds, &params)?;
        rows.push(BenchRow {
            d,
            nnz: c.nnz(),
            estimate: est.gamma,
            elapsed_seconds: start.elapsed().as_secs_f64(),
        });
    }
    report.bench = Some(rows);
    Ok(())
}
