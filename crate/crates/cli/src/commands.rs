//! `run` and `validate` subcommands. Both return the process exit code and
//! write to caller-supplied streams.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use qfp_core::verify::{
    check_cutter, check_konnov, check_quasiconvex, check_sholder, check_star_inequality,
    SampleRegion, ValidationReport,
};
use qfp_core::{solve, Point, SolveStatus, SolverConfig};
use serde::Serialize;

use crate::error::CliError;
use crate::problem::parse_problem;
use crate::trace::write_trace;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
/// `run`: sweep budget exhausted. `validate`: some property was violated.
pub const EXIT_NOT_REACHED: i32 = 2;
/// `validate`: some property could not be tested.
pub const EXIT_VACUOUS: i32 = 3;

/// Exit code of a finished solve.
pub fn status_exit_code(status: SolveStatus) -> i32 {
    match status {
        SolveStatus::Converged => EXIT_OK,
        SolveStatus::MaxSweepsReached => EXIT_NOT_REACHED,
        SolveStatus::OracleError => EXIT_ERROR,
    }
}

#[derive(Debug, Clone)]
pub struct RunArgs {
    pub problem: PathBuf,
    pub eps: f64,
    pub max_sweeps: usize,
    pub trace_out: Option<PathBuf>,
    pub x0: Option<Vec<f64>>,
}

#[derive(Debug, Clone)]
pub struct ValidateArgs {
    pub problem: PathBuf,
    /// Either `[lo, hi]` for every axis or `[lo1, hi1, …, lon, hin]`.
    pub region: Vec<f64>,
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
}

#[derive(Serialize)]
struct RunSummary<'a> {
    status: SolveStatus,
    final_point: &'a [f64],
    residual: f64,
    sweeps: usize,
}

/// Parses a comma-separated list of numbers.
pub fn parse_list(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Args(format!("`{t}` is not a number")))
        })
        .collect()
}

pub fn run(args: &RunArgs, out: &mut impl Write, err: &mut impl Write) -> i32 {
    match try_run(args, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

fn try_run(args: &RunArgs, out: &mut impl Write, err: &mut impl Write) -> Result<i32, CliError> {
    let parsed = parse_problem(&args.problem)?;
    let x0 = match (&args.x0, parsed.x0) {
        (Some(v), _) => Point::from_slice(v).map_err(|e| CliError::Args(format!("--x0: {e}")))?,
        (None, Some(p)) => p,
        (None, None) => return Err(CliError::Args("no starting point: set `x0` or pass --x0".into())),
    };
    x0.ensure_dim(parsed.problem.dimension())
        .map_err(|e| CliError::Args(format!("--x0: {e}")))?;
    let mut cfg = SolverConfig::new(args.eps, args.max_sweeps)
        .map_err(|e| CliError::Args(e.to_string()))?
        .with_record_inner(args.trace_out.is_some());
    if let Some(z) = &parsed.reference {
        cfg = cfg.with_reference(z.clone());
    }
    let result = solve(&parsed.problem, &x0, &cfg);
    if let Some(path) = &args.trace_out {
        let file = File::create(path).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
        write_trace(BufWriter::new(file), &parsed.problem, &x0, parsed.reference.as_ref(), &result)?;
    }
    let summary = RunSummary {
        status: result.status,
        final_point: result.point.coords(),
        residual: result.residual,
        sweeps: result.sweeps,
    };
    writeln!(out, "{}", serde_json::to_string(&summary).expect("summary serialises"))?;
    if let Some(e) = &result.error {
        writeln!(err, "error: {e}")?;
    }
    Ok(status_exit_code(result.status))
}

fn region_for(args: &ValidateArgs, dim: usize) -> Result<SampleRegion, CliError> {
    let (lo, hi): (Vec<f64>, Vec<f64>) = match args.region.as_slice() {
        [lo, hi] => (vec![*lo; dim], vec![*hi; dim]),
        r if r.len() == 2 * dim => r.chunks(2).map(|c| (c[0], c[1])).unzip(),
        r => {
            return Err(CliError::Args(format!(
                "--region needs 2 or {} numbers, got {}",
                2 * dim,
                r.len()
            )))
        }
    };
    let point = |v: Vec<f64>| Point::new(v).map_err(|e| CliError::Args(format!("--region: {e}")));
    SampleRegion::new(point(lo)?, point(hi)?, args.samples, args.seed)
        .map_err(|e| CliError::Args(format!("--region: {e}")))
}

pub fn validate(args: &ValidateArgs, out: &mut impl Write, err: &mut impl Write) -> i32 {
    match try_validate(args, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

type Check = fn(&qfp_core::QcOracle, &SampleRegion, f64) -> Result<ValidationReport, qfp_core::verify::VerifyError>;

const CHECKS: [Check; 5] = [
    check_quasiconvex,
    check_star_inequality,
    check_sholder,
    check_konnov,
    check_cutter,
];

fn try_validate(args: &ValidateArgs, out: &mut impl Write) -> Result<i32, CliError> {
    if !(args.tol >= 0.0 && args.tol.is_finite()) {
        return Err(CliError::Args("--tol must be finite and non-negative".into()));
    }
    let parsed = parse_problem(&args.problem)?;
    let region = region_for(args, parsed.problem.dimension())?;
    let mut reports = Vec::new();
    for f in parsed.problem.functions() {
        for check in CHECKS {
            let report = check(f, &region, args.tol)?;
            writeln!(out, "{}", serde_json::to_string(&report).expect("report serialises"))?;
            reports.push(report);
        }
    }
    Ok(if reports.iter().any(|r| !r.passed) {
        EXIT_NOT_REACHED
    } else if reports.iter().any(|r| r.vacuous) {
        EXIT_VACUOUS
    } else {
        EXIT_OK
    })
}
