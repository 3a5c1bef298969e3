use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Stochastic log-determinant estimation for large sparse matrices.
///
/// Exit codes: 0 success, 1 input error (unreadable or malformed file, bad
/// command line), 2 precondition violation, 3 numerical failure.
#[derive(Debug, Parser)]
#[command(name = "cheblogdet", version)]
pub struct Cli {
    /// Worker threads; defaults to all cores.
    #[arg(long, global = true, env = "CHEBLOGDET_THREADS")]
    pub threads: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// One JSON report per line.
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate log |det C| of a Matrix Market matrix.
    Logdet(LogdetArgs),
    /// Exact log-determinant by dense factorization.
    Exact(ExactArgs),
    /// Estimate the log of the number of spanning trees of a graph.
    Spanning(SpanningArgs),
    /// Likelihood scan over ρ for a simulated lattice GMRF.
    GmrfScan(GmrfScanArgs),
    /// Timing sweep over synthetic sparse matrices.
    Bench(BenchArgs),
    /// Print the JSON schema of the run report.
    Schema,
}

#[derive(Debug, Args)]
pub struct Sampling {
    /// Probe vectors.
    #[arg(long, conflicts_with = "eps")]
    pub m: Option<usize>,
    /// Polynomial degree.
    #[arg(long, conflicts_with = "eps")]
    pub n: Option<usize>,
    /// Target error; picks m and n from the guarantees.
    #[arg(long, requires = "zeta")]
    pub eps: Option<f64>,
    /// Failure probability for --eps.
    #[arg(long, requires = "eps")]
    pub zeta: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct LogdetArgs {
    pub matrix: PathBuf,
    #[command(flatten)]
    pub sampling: Sampling,
    /// Lower singular value bound.
    #[arg(long, conflicts_with = "pd")]
    pub sigma_min: Option<f64>,
    /// Upper singular value bound; defaults to sqrt(|C|_1 |C|_inf).
    #[arg(long, conflicts_with = "pd")]
    pub sigma_max: Option<f64>,
    /// Treat the input as symmetric positive definite.
    #[arg(long)]
    pub pd: bool,
    #[arg(long, requires = "pd")]
    pub lambda_min: Option<f64>,
    #[arg(long, requires = "pd")]
    pub lambda_max: Option<f64>,
    /// Estimate the spectrum bounds by power and inverse power iteration.
    #[arg(long, conflicts_with_all = ["sigma_min", "sigma_max", "lambda_min", "lambda_max"])]
    pub auto_bounds: bool,
    /// Also compute the exact value (dimension at most 4096).
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExactMethod {
    /// log det M for symmetric positive definite M.
    Cholesky,
    /// log |det M| by LU with partial pivoting.
    Lu,
}

#[derive(Debug, Args)]
pub struct ExactArgs {
    pub matrix: PathBuf,
    #[arg(long, value_enum, default_value_t = ExactMethod::Cholesky)]
    pub method: ExactMethod,
    /// Lift the 4096 dimension guard.
    #[arg(long)]
    pub allow_large: bool,
}

#[derive(Debug, Args)]
pub struct SpanningArgs {
    /// Graph file: `p <vertices> <edges>` then `e <u> <v>` lines, 0-indexed.
    pub graph: PathBuf,
    #[arg(long, default_value_t = 0.3)]
    pub eps: f64,
    #[arg(long, default_value_t = 0.2)]
    pub zeta: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Skip the exact count.
    #[arg(long)]
    pub no_exact: bool,
}

#[derive(Debug, Args)]
pub struct GmrfScanArgs {
    #[arg(long, default_value_t = 100)]
    pub rows: usize,
    #[arg(long, default_value_t = 100)]
    pub cols: usize,
    #[arg(long, allow_negative_numbers = true)]
    pub true_rho: f64,
    #[arg(long, default_value_t = 500)]
    pub sweeps: usize,
    #[arg(long, default_value_t = -0.24, allow_negative_numbers = true)]
    pub rho_min: f64,
    #[arg(long, default_value_t = 0.24, allow_negative_numbers = true)]
    pub rho_max: f64,
    #[arg(long, default_value_t = 0.02)]
    pub rho_step: f64,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Scan with exact band-Cholesky log-determinants as well.
    #[arg(long)]
    pub exact: bool,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Comma-separated dimensions; scientific notation accepted.
    #[arg(long, value_delimiter = ',', value_parser = parse_size, default_value = "1e4,2e4,4e4")]
    pub sizes: Vec<usize>,
    /// Stored entries per row, counting both triangles.
    #[arg(long, default_value_t = 10)]
    pub nnz_per_row: usize,
    /// Keep off-diagonal columns within this distance of the diagonal.
    #[arg(long)]
    pub band: Option<usize>,
    #[arg(long, default_value_t = 10)]
    pub m: usize,
    #[arg(long, default_value_t = 15)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

fn parse_size(s: &str) -> Result<usize, String> {
    let v: f64 = s.trim().parse().map_err(|e| format!("{s:?}: {e}"))?;
    if v >= 1.0 && v.fract() == 0.0 && v <= 1e12 {
        Ok(v as usize)
    } else {
        Err(format!("{s:?} is not a positive whole size"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn sizes_accept_scientific_notation() {
        assert_eq!(parse_size("1e4"), Ok(10_000));
        assert_eq!(parse_size("250"), Ok(250));
        assert!(parse_size("1.5").is_err());
        assert!(parse_size("0").is_err());
    }

    #[test]
    fn eps_needs_zeta() {
        assert!(Cli::try_parse_from(["cheblogdet", "logdet", "a.mtx", "--eps", "0.1"]).is_err());
        assert!(Cli::try_parse_from([
            "cheblogdet",
            "logdet",
            "a.mtx",
            "--eps",
            "0.1",
            "--zeta",
            "0.1"
        ])
        .is_ok());
        assert!(Cli::try_parse_from([
            "cheblogdet",
            "logdet",
            "a.mtx",
            "--eps",
            "0.1",
            "--zeta",
            "0.1",
            "--m",
            "3"
        ])
        .is_err());
    }
}
