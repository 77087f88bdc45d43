use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qfp_cli::commands::{self, parse_list, RunArgs, ValidateArgs, EXIT_ERROR};

/// Quasi-convex feasibility via cyclic star subgradient projections.
#[derive(Parser)]
#[command(name = "qfp", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a problem file and print the outcome as JSON.
    Run {
        #[arg(long)]
        problem: PathBuf,
        /// Stop once the residual is at most this value.
        #[arg(long, default_value_t = 1e-8)]
        eps: f64,
        #[arg(long, default_value_t = 10_000)]
        max_sweeps: usize,
        /// Write the trajectory as CSV.
        #[arg(long)]
        trace_out: Option<PathBuf>,
        /// Starting point as a comma-separated list, overriding `x0`.
        #[arg(long, allow_hyphen_values = true)]
        x0: Option<String>,
    },
    /// Check every function of a problem file by sampling and print one
    /// JSON report per function and property.
    Validate {
        #[arg(long)]
        problem: PathBuf,
        /// `lo,hi` for all axes or `lo1,hi1,lo2,hi2,...` per axis.
        #[arg(long, allow_hyphen_values = true, default_value = "-10,10")]
        region: String,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_ERROR as u8 } else { 0 });
        }
    };
    let (mut out, mut err) = (io::stdout().lock(), io::stderr().lock());
    let code = match cli.command {
        Command::Run {
            problem,
            eps,
            max_sweeps,
            trace_out,
            x0,
        } => {
            let x0 = match x0.as_deref().map(parse_list).transpose() {
                Ok(v) => v,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(EXIT_ERROR as u8);
                }
            };
            let args = RunArgs {
                problem,
                eps,
                max_sweeps,
                trace_out,
                x0,
            };
            commands::run(&args, &mut out, &mut err)
        }
        Command::Validate {
            problem,
            region,
            samples,
            seed,
            tol,
        } => {
            let region = match parse_list(&region) {
                Ok(v) => v,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(EXIT_ERROR as u8);
                }
            };
            let args = ValidateArgs {
                problem,
                region,
                samples,
                seed,
                tol,
            };
            commands::validate(&args, &mut out, &mut err)
        }
    };
    ExitCode::from(code as u8)
}
