//! Machine-readable run reports.
//!
//! Every field is always serialized, `null` when it does not apply. The
//! wall-clock time lives in `elapsed_seconds` fields only, so two runs of the
//! same command line differ in nothing else.

use std::io::Write;

use serde::Serialize;

use crate::args::Format;
use crate::error::CliError;

pub const SCHEMA: &str = include_str!("../schema/run_report.schema.json");

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    /// Arguments after the program name, verbatim.
    pub args: Vec<String>,
    pub input: Option<InputInfo>,
    pub estimate: Option<f64>,
    pub params: ParamInfo,
    pub oracle: Option<f64>,
    pub relative_error: Option<f64>,
    pub spanning: Option<SpanningInfo>,
    pub scan: Option<ScanInfo>,
    pub bench: Option<Vec<BenchRow>>,
    pub elapsed_seconds: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct InputInfo {
    pub path: Option<String>,
    pub nrows: usize,
    pub ncols: usize,
    pub nnz: usize,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ParamInfo {
    pub method: Option<String>,
    pub samples: Option<usize>,
    pub degree: Option<usize>,
    pub delta: Option<f64>,
    pub sigma_min: Option<f64>,
    pub sigma_max: Option<f64>,
    pub lambda_min: Option<f64>,
    pub lambda_max: Option<f64>,
    pub eps: Option<f64>,
    pub zeta: Option<f64>,
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpanningInfo {
    pub vertices: usize,
    pub edges: usize,
    pub hub: usize,
    pub avg_degree: f64,
    pub max_degree: usize,
    /// Exact count when it fits; `null` when skipped or unresolvable.
    pub exact_tau: Option<u128>,
    pub exact_method: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanInfo {
    pub rows: usize,
    pub cols: usize,
    pub true_rho: f64,
    pub sweeps: usize,
    pub argmax: f64,
    pub exact_argmax: Option<f64>,
    pub points: Vec<ScanRow>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanRow {
    pub rho: f64,
    pub logdet: f64,
    pub quadratic: f64,
    pub loglik: f64,
    pub exact_loglik: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchRow {
    pub d: usize,
    pub nnz: usize,
    pub estimate: f64,
    pub elapsed_seconds: f64,
}

/// Flat one-row view for CSV output of single-value commands.
#[derive(Serialize)]
struct SummaryRow<'a> {
    command: &'a str,
    path: Option<&'a str>,
    nrows: Option<usize>,
    ncols: Option<usize>,
    nnz: Option<usize>,
    estimate: Option<f64>,
    oracle: Option<f64>,
    relative_error: Option<f64>,
    method: Option<&'a str>,
    samples: Option<usize>,
    degree: Option<usize>,
    delta: Option<f64>,
    sigma_min: Option<f64>,
    sigma_max: Option<f64>,
    lambda_min: Option<f64>,
    lambda_max: Option<f64>,
    eps: Option<f64>,
    zeta: Option<f64>,
    seed: Option<u64>,
    exact_tau: Option<String>,
    elapsed_seconds: f64,
}

impl RunReport {
    pub fn new(command: &str, args: Vec<String>) -> Self {
        Self {
            command: command.to_owned(),
            args,
            input: None,
            estimate: None,
            params: ParamInfo::default(),
            oracle: None,
            relative_error: None,
            spanning: None,
            scan: None,
            bench: None,
            elapsed_seconds: 0.0,
        }
    }

    pub fn set_oracle(&mut self, exact: f64) {
        self.oracle = Some(exact);
        self.relative_error = self.estimate.map(|g| relative_error(g, exact));
    }

    pub fn write(&self, format: Format, out: &mut impl Write) -> Result<(), CliError> {
        match format {
            Format::Json => {
                serde_json::to_writer(&mut *out, self)?;
                writeln!(out)?;
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(&mut *out);
                if let Some(scan) = &self.scan {
                    for row in &scan.points {
                        w.serialize(row)?;
                    }
                } else if let Some(rows) = &self.bench {
                    for row in rows {
                        w.serialize(row)?;
                    }
                } else {
                    w.serialize(self.summary())?;
                }
                w.flush()?;
            }
        }
        Ok(())
    }

    fn summary(&self) -> SummaryRow<'_> {
        let input = self.input.as_ref();
        let p = &self.params;
        SummaryRow {
            command: &self.command,
            path: input.and_then(|i| i.path.as_deref()),
            nrows: input.map(|i| i.nrows),
            ncols: input.map(|i| i.ncols),
            nnz: input.map(|i| i.nnz),
            estimate: self.estimate,
            oracle: self.oracle,
            relative_error: self.relative_error,
            method: p.method.as_deref(),
            samples: p.samples,
            degree: p.degree,
            delta: p.delta,
            sigma_min: p.sigma_min,
            sigma_max: p.sigma_max,
            lambda_min: p.lambda_min,
            lambda_max: p.lambda_max,
            eps: p.eps,
            zeta: p.zeta,
            seed: p.seed,
            exact_tau: self
                .spanning
                .as_ref()
                .and_then(|s| s.exact_tau)
                .map(|t| t.to_string()),
            elapsed_seconds: self.elapsed_seconds,
        }
    }
}

/// `|estimate − exact| / |exact|`, or the absolute error when `exact = 0`.
pub fn relative_error(estimate: f64, exact: f64) -> f64 {
    let diff = (estimate - exact).abs();
    if exact == 0.0 {
        diff
    } else {
        diff / exact.abs()
    }
}
