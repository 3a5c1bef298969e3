//! `cheblogdet` command-line front end.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod args;
mod commands;
mod error;
mod report;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use args::{Cli, Command};
use error::{CliError, EXIT_INPUT};
use report::RunReport;

fn run(cli: &Cli, argv: Vec<String>) -> Result<(), CliError> {
    if let Some(threads) = cli.threads {
        if threads == 0 {
            return Err(CliError::Precondition(
                "thread count must be at least 1".into(),
            ));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()?;
    }
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let name = match &cli.command {
        Command::Logdet(_) => "logdet",
        Command::Exact(_) => "exact",
        Command::Spanning(_) => "spanning",
        Command::GmrfScan(_) => "gmrf-scan",
        Command::Bench(_) => "bench",
        Command::Schema => {
            out.write_all(report::SCHEMA.as_bytes())?;
            return Ok(());
        }
    };
    let mut report = RunReport::new(name, argv);
    let start = Instant::now();
    match &cli.command {
        Command::Logdet(a) => commands::logdet(a, &mut report)?,
        Command::Exact(a) => commands::exact(a, &mut report)?,
        Command::Spanning(a) => commands::spanning(a, &mut report)?,
        Command::GmrfScan(a) => commands::gmrf_scan(a, &mut report)?,
        Command::Bench(a) => commands::bench(a, &mut report)?,
        Command::Schema => unreachable!(),
    }
    report.elapsed_seconds = start.elapsed().as_secs_f64();
    report.write(cli.format, &mut out)?;
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // help and version go to stdout and succeed; usage errors are input errors
            return if e.use_stderr() {
                ExitCode::from(EXIT_INPUT as u8)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    let argv = std::env::args().skip(1).collect();
    match run(&cli, argv) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
