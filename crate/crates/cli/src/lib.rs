//! Command-line front end: argument parsing, configuration layering and
//! output files. The binary is a thin wrapper around [`run`].

pub mod args;
pub mod commands;
pub mod config;
pub mod output;
pub mod problem_file;

use std::ffi::OsString;

use clap::Parser;

use crate::args::{Cli, Command};
use crate::config::{resolve, BenchmarkConfig, RadiusRatioConfig, SolveConfig};

pub const EXIT_SUCCESS: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug)]
pub enum CliError {
    /// Invalid flags, settings or input files.
    Usage(String),
    /// The computation or the output failed.
    Runtime(anyhow::Error),
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        CliError::Runtime(e)
    }
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    let file = cli.config.as_deref();
    let name = cli.command.name();
    match &cli.command {
        Command::Solve(flags) => {
            let cfg: SolveConfig = resolve(name, file, flags, cli.seed)?;
            commands::solve(&cfg, &cli.out_dir)
        }
        Command::RadiusRatio(flags) => {
            let cfg: RadiusRatioConfig = resolve(name, file, flags, cli.seed)?;
            commands::radius_ratio(&cfg, &cli.out_dir)
        }
        Command::Benchmark(flags) => {
            let cfg: BenchmarkConfig = resolve(name, file, flags, cli.seed)?;
            commands::benchmark(&cfg, &cli.out_dir)
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let outcome = match cli.threads {
        Some(0) => Err(CliError::Usage("--threads must be positive".into())),
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| CliError::Runtime(e.into()))
            .and_then(|pool| pool.install(|| execute(&cli))),
        None => execute(&cli),
    };
    match outcome {
        Ok(()) => EXIT_SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}\n\nFor more information, try '--help'.");
            EXIT_USAGE
        }
        Err(CliError::Runtime(e)) => {
            eprintln!("error: {e:#}");
            EXIT_FAILURE
        }
    }
}
