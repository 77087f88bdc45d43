//! Cyclic star subgradient projection method.
//!
//! One sweep maps `x_k` to `x_{k+1} = P_{f_m} ∘ ⋯ ∘ P_{f_1}(x_k)`, recording
//! the inner points `y^0 = x_k, y^i = P_{f_i}(y^{i-1})`. The method itself
//! never terminates; [`solve`] stops once the residual `max_i (f_i)₊` drops
//! to `eps` or after `max_sweeps` sweeps.

use serde::Serialize;
use thiserror::Error;

use crate::error::{QcError, Result};
use crate::oracle::FeasibilityProblem;
use crate::point::Point;

/// Stopping rule and recording options for [`solve`].
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    eps: f64,
    max_sweeps: usize,
    record_inner: bool,
    fejer_reference: Option<Point>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            eps: 1e-8,
            max_sweeps: 10_000,
            record_inner: true,
            fejer_reference: None,
        }
    }
}

impl SolverConfig {
    pub fn new(eps: f64, max_sweeps: usize) -> Result<Self> {
        if !(eps >= 0.0 && eps.is_finite()) {
            return Err(QcError::InvalidConfig("eps must be finite and non-negative"));
        }
        if max_sweeps == 0 {
            return Err(QcError::InvalidConfig("max_sweeps must be at least 1"));
        }
        Ok(Self {
            eps,
            max_sweeps,
            ..Self::default()
        })
    }

    /// Keep every inner point `y^i` in the trace (default) or only the
    /// sweep endpoints.
    pub fn with_record_inner(mut self, record_inner: bool) -> Self {
        self.record_inner = record_inner;
        self
    }

    /// A known feasible point; each record then carries the distance of the
    /// new iterate to it.
    pub fn with_reference(mut self, z: Point) -> Self {
        self.fejer_reference = Some(z);
        self
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn max_sweeps(&self) -> usize {
        self.max_sweeps
    }

    pub fn record_inner(&self) -> bool {
        self.record_inner
    }

    pub fn fejer_reference(&self) -> Option<&Point> {
        self.fejer_reference.as_ref()
    }
}

/// An oracle failure during a sweep, tagged with the 1-based index of the
/// failing function (`None` when the failure is not tied to one function).
#[derive(Debug, Clone, PartialEq, Error)]
#[error("function {}: {source}", index.map_or_else(|| "-".to_string(), |i| i.to_string()))]
pub struct SolveError {
    pub index: Option<usize>,
    #[source]
    pub source: QcError,
}

/// One pass over all functions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRecord {
    /// 1-based sweep counter `k`.
    pub sweep_index: usize,
    /// `x_k = y^0`.
    pub entry: Point,
    /// `y^0, …, y^m`; empty unless inner points are recorded.
    pub inner: Vec<Point>,
    /// `f_i(y^{i-1})` for `i = 1..=m`.
    pub values: Vec<f64>,
    /// `x_{k+1} = y^m`.
    pub exit: Point,
    /// Residual at `exit`.
    pub residual: f64,
    /// `‖exit − z‖` for the configured reference `z`.
    pub reference_distance: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SolveStatus {
    Converged,
    MaxSweepsReached,
    OracleError,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveResult {
    pub status: SolveStatus,
    pub point: Point,
    /// Residual at `point`; infinite if it could never be evaluated.
    pub residual: f64,
    pub sweeps: usize,
    pub trace: Vec<SweepRecord>,
    #[serde(skip)]
    pub error: Option<SolveError>,
}

fn run_sweep(
    p: &FeasibilityProblem,
    x: &Point,
    sweep_index: usize,
    record_inner: bool,
    reference: Option<&Point>,
) -> Result<SweepRecord, SolveError> {
    x.ensure_dim(p.dimension()).map_err(|source| SolveError {
        index: None,
        source,
    })?;
    let mut inner = Vec::with_capacity(if record_inner { p.len() + 1 } else { 0 });
    let mut values = Vec::with_capacity(p.len());
    let mut y = x.clone();
    if record_inner {
        inner.push(y.clone());
    }
    for (i, f) in p.functions().iter().enumerate() {
        let tag = |source| SolveError {
            index: Some(i + 1),
            source,
        };
        values.push(f.evaluate(&y).map_err(tag)?);
        y = f.project(&y).map_err(tag)?;
        if record_inner {
            inner.push(y.clone());
        }
    }
    let residual = residual_tagged(p, &y)?;
    Ok(SweepRecord {
        sweep_index,
        entry: x.clone(),
        inner,
        values,
        reference_distance: reference.map(|z| y.distance(z)),
        exit: y,
        residual,
    })
}

fn residual_tagged(p: &FeasibilityProblem, x: &Point) -> Result<f64, SolveError> {
    let mut r = 0.0_f64;
    for (i, f) in p.functions().iter().enumerate() {
        let v = f.evaluate(x).map_err(|source| SolveError {
            index: Some(i + 1),
            source,
        })?;
        r = r.max(crate::projection::positive_part(v));
    }
    Ok(r)
}

/// One full cyclic pass from `x`, with inner points recorded.
pub fn sweep(p: &FeasibilityProblem, x: &Point) -> Result<SweepRecord, SolveError> {
    run_sweep(p, x, 1, true, None)
}

/// The sweep operator `T = P_{f_m} ∘ ⋯ ∘ P_{f_1}` as a closure.
pub fn compose_operator(p: &FeasibilityProblem) -> impl Fn(&Point) -> Result<Point, SolveError> + '_ {
    move |x| {
        let mut y = x.clone();
        for (i, f) in p.functions().iter().enumerate() {
            y = f.project(&y).map_err(|source| SolveError {
                index: Some(i + 1),
                source,
            })?;
        }
        Ok(y)
    }
}

/// Runs sweeps from `x0` until the residual is at most `eps` or the sweep
/// budget is exhausted. An oracle failure stops the run with status
/// [`SolveStatus::OracleError`]; the trace up to the failure is kept.
pub fn solve(p: &FeasibilityProblem, x0: &Point, cfg: &SolverConfig) -> SolveResult {
    let mut trace = Vec::new();
    let fail = |point: Point, residual: f64, trace: Vec<SweepRecord>, error: SolveError| {
        let sweeps = trace.len();
        SolveResult {
            status: SolveStatus::OracleError,
            point,
            residual,
            sweeps,
            trace,
            error: Some(error),
        }
    };
    if let Err(source) = x0.ensure_dim(p.dimension()) {
        return fail(x0.clone(), f64::INFINITY, trace, SolveError { index: None, source });
    }
    let mut x = x0.clone();
    let mut residual = match residual_tagged(p, &x) {
        Ok(r) => r,
        Err(e) => return fail(x, f64::INFINITY, trace, e),
    };
    let status = loop {
        if residual <= cfg.eps {
            break SolveStatus::Converged;
        }
        if trace.len() >= cfg.max_sweeps {
            break SolveStatus::MaxSweepsReached;
        }
        match run_sweep(
            p,
            &x,
            trace.len() + 1,
            cfg.record_inner,
            cfg.fejer_reference.as_ref(),
        ) {
            Ok(record) => {
                x = record.exit.clone();
                residual = record.residual;
                trace.push(record);
            }
            Err(e) => return fail(x, residual, trace, e),
        }
    };
    SolveResult {
        status,
        point: x,
        residual,
        sweeps: trace.len(),
        trace,
        error: None,
    }
}

/// Whether the iterates `x_1, x_2, …` of `trace` satisfy
/// `‖x_{k+1} − z‖ ≤ ‖x_k − z‖ + tol` for every consecutive pair.
///
/// `z` is trusted to be feasible.
pub fn fejer_check(trace: &[SweepRecord], z: &Point, tol: f64) -> Result<bool> {
    let first = trace.first().ok_or(QcError::EmptyTrace)?;
    let mut prev = first.entry.distance(z);
    for record in trace {
        // Entries must chain; a gap counts as a jump from the previous exit.
        for x in [&record.entry, &record.exit] {
            let d = x.distance(z);
            if d > prev + tol {
                return Ok(false);
            }
            prev = d;
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::{make_affine, make_paper_floor, make_sqrt_abs_shift};

    fn pt(c: &[f64]) -> Point {
        Point::from_slice(c).unwrap()
    }

    fn two_halfspaces() -> FeasibilityProblem {
        FeasibilityProblem::new(vec![
            make_affine(pt(&[1.0, 0.0]), 0.0).unwrap(),
            make_affine(pt(&[0.0, 1.0]), 0.0).unwrap(),
        ])
        .unwrap()
    }

    #[test]
    fn sweep_examples() {
        let p = two_halfspaces();
        let r = sweep(&p, &pt(&[2.0, 3.0])).unwrap();
        assert_eq!(r.inner, vec![pt(&[2.0, 3.0]), pt(&[0.0, 3.0]), pt(&[0.0, 0.0])]);
        assert_eq!(r.values, vec![2.0, 3.0]);
        assert_eq!(r.residual, 0.0);

        let r = sweep(&p, &pt(&[-1.0, -1.0])).unwrap();
        assert!(r.inner.iter().all(|y| *y == pt(&[-1.0, -1.0])));

        let r = sweep(&p, &pt(&[0.0, 5.0])).unwrap();
        assert_eq!(r.inner[1], pt(&[0.0, 5.0]));
        assert_eq!(r.exit, pt(&[0.0, 0.0]));
    }

    #[test]
    fn composition_matches_sweep() {
        let p = two_halfspaces();
        let t = compose_operator(&p);
        assert_eq!(t(&pt(&[2.0, 3.0])).unwrap(), pt(&[0.0, 0.0]));
        assert_eq!(t(&pt(&[-2.0, -0.5])).unwrap(), pt(&[-2.0, -0.5]));

        let single = FeasibilityProblem::new(vec![make_paper_floor()]).unwrap();
        let t = compose_operator(&single);
        let f = make_paper_floor();
        for x in [2.5, 0.5, -3.0, 7.25] {
            assert_eq!(t(&pt(&[x])).unwrap(), f.project(&pt(&[x])).unwrap());
        }
    }

    #[test]
    fn solve_examples() {
        let p = two_halfspaces();
        let cfg = SolverConfig::new(1e-6, 100).unwrap();
        let res = solve(&p, &pt(&[2.0, 3.0]), &cfg);
        assert_eq!(res.status, SolveStatus::Converged);
        assert_eq!(res.sweeps, 1);
        assert_eq!(res.point, pt(&[0.0, 0.0]));

        let res = solve(&p, &pt(&[-1.0, -1.0]), &cfg);
        assert_eq!(res.status, SolveStatus::Converged);
        assert_eq!(res.sweeps, 0);
        assert_eq!(res.point, pt(&[-1.0, -1.0]));

        let floor = FeasibilityProblem::new(vec![make_paper_floor()]).unwrap();
        let res = solve(&floor, &pt(&[2.5]), &SolverConfig::new(0.0, 10).unwrap());
        assert_eq!(res.status, SolveStatus::Converged);
        assert_eq!(res.sweeps, 2);
        assert_eq!(res.trace[0].exit, pt(&[0.5]));
        assert_eq!(res.point, pt(&[0.0]));
    }

    #[test]
    fn max_sweeps_and_endpoint_only_traces() {
        let p = FeasibilityProblem::new(vec![make_sqrt_abs_shift(1.0).unwrap()]).unwrap();
        let cfg = SolverConfig::new(0.0, 10).unwrap().with_record_inner(false);
        let res = solve(&p, &pt(&[9.0]), &cfg);
        assert_eq!(res.status, SolveStatus::MaxSweepsReached);
        assert_eq!(res.sweeps, 10);
        assert!(res.residual > 0.0);
        assert!(res.trace.iter().all(|r| r.inner.is_empty()));
        for w in res.trace.windows(2) {
            assert_eq!(w[0].exit, w[1].entry);
        }
    }

    #[test]
    fn oracle_error_keeps_partial_trace() {
        use crate::oracle::{Holder, QcOracle};
        // Valid for x > -5 only; the affine step from 10 jumps to -20.
        let guarded = QcOracle::from_fns_guarded(
            1,
            |x| x[0] - 100.0,
            |_| vec![1.0],
            |x| x[0] > -5.0,
            Holder::lipschitz(1.0).unwrap(),
        );
        let jump = make_affine(pt(&[1.0]), 20.0).unwrap();
        let p = FeasibilityProblem::new(vec![guarded, jump]).unwrap();
        let res = solve(&p, &pt(&[10.0]), &SolverConfig::new(0.0, 5).unwrap());
        assert_eq!(res.status, SolveStatus::OracleError);
        let err = res.error.unwrap();
        assert!(matches!(err.source, QcError::DomainViolation { .. }));
        assert_eq!(err.index, Some(1));
        assert_eq!(res.point, pt(&[10.0]));
    }

    #[test]
    fn fejer_examples() {
        let p = two_halfspaces();
        let z = pt(&[-1.0, -1.0]);
        let cfg = SolverConfig::new(1e-6, 10).unwrap().with_reference(z.clone());
        let res = solve(&p, &pt(&[2.0, 3.0]), &cfg);
        assert_eq!(res.trace[0].entry.distance(&z), 5.0);
        assert!((res.trace[0].reference_distance.unwrap() - 2f64.sqrt()).abs() < 1e-15);
        assert!(fejer_check(&res.trace, &z, 0.0).unwrap());

        let constant = sweep(&p, &pt(&[-1.0, -2.0])).unwrap();
        assert!(fejer_check(&[constant.clone(), constant], &z, 0.0).unwrap());

        let mut corrupted = res.trace.clone();
        corrupted[0].exit = pt(&[4.0, 4.0]);
        assert!(!fejer_check(&corrupted, &z, 1e-9).unwrap());

        assert_eq!(fejer_check(&[], &z, 0.0).unwrap_err(), QcError::EmptyTrace);
    }

    #[test]
    fn config_validation() {
        assert!(SolverConfig::new(-1.0, 10).is_err());
        assert!(SolverConfig::new(1e-3, 0).is_err());
        assert!(SolverConfig::new(f64::NAN, 1).is_err());
    }
}
