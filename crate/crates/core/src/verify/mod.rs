//! Sampling validators for the inequalities behind the projection method.
//!
//! Every universally quantified statement is checked on finitely many
//! samples drawn from an axis-aligned box, so a pass is evidence and not a
//! proof. Reports always carry the number of samples actually tested.
//! Sampling is deterministic in `(region, seed)`.

mod checks;
mod estimate;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::error::QcError;
use crate::oracle::QcOracle;
use crate::point::Point;

pub use checks::{
    check_composition_qne, check_cutter, check_fixed_point_closed, check_fixed_point_identity, check_konnov,
    check_quasiconvex, check_sholder, check_sqne, check_star_inequality,
};
pub use estimate::{dist_to_sublevel, estimate_holder, grid_resolution, HolderEstimate, HOLDER_SAFETY};

/// Default absolute tolerance of the validators.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Rejection sampling gives up after this many attempts per requested
/// sample.
pub const REJECTION_FACTOR: usize = 100;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error("no feasible samples found in the region")]
    NoFeasibleSamples,
    #[error("sequence does not converge within tolerance: {0}")]
    NonConvergentInput(String),
    #[error("invalid sample region: {0}")]
    InvalidRegion(&'static str),
    #[error("delta grid must be non-empty with positive finite entries")]
    InvalidDeltaGrid,
    #[error(transparent)]
    Oracle(#[from] QcError),
}

/// An axis-aligned box with a sample budget and a seed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleRegion {
    lower: Point,
    upper: Point,
    sample_count: usize,
    seed: u64,
}

impl SampleRegion {
    pub fn new(lower: Point, upper: Point, sample_count: usize, seed: u64) -> Result<Self, VerifyError> {
        if lower.dim() != upper.dim() {
            return Err(VerifyError::InvalidRegion("corner dimensions differ"));
        }
        if lower.coords().iter().zip(upper.coords()).any(|(l, u)| l > u) {
            return Err(VerifyError::InvalidRegion("lower corner exceeds upper corner"));
        }
        if sample_count == 0 {
            return Err(VerifyError::InvalidRegion("sample_count must be at least 1"));
        }
        Ok(Self {
            lower,
            upper,
            sample_count,
            seed,
        })
    }

    /// The cube `[lo, hi]^dim`.
    pub fn cube(dim: usize, lo: f64, hi: f64, sample_count: usize, seed: u64) -> Result<Self, VerifyError> {
        Self::new(
            Point::new(vec![lo; dim])?,
            Point::new(vec![hi; dim])?,
            sample_count,
            seed,
        )
    }

    pub fn with_samples(mut self, sample_count: usize) -> Self {
        self.sample_count = sample_count.max(1);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn dim(&self) -> usize {
        self.lower.dim()
    }

    pub fn lower(&self) -> &Point {
        &self.lower
    }

    pub fn upper(&self) -> &Point {
        &self.upper
    }

    pub fn sample_count(&self) -> usize {
        self.sample_count
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// `sample_count` uniform points of the box, deterministic in the seed.
    pub fn sample_points(&self) -> Vec<Point> {
        let mut rng = self.rng();
        (0..self.sample_count).map(|_| self.uniform(&mut rng)).collect()
    }

    pub(crate) fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    pub(crate) fn uniform(&self, rng: &mut impl Rng) -> Point {
        let coords = self
            .lower
            .coords()
            .iter()
            .zip(self.upper.coords())
            .map(|(&l, &u)| if l == u { l } else { rng.gen_range(l..=u) })
            .collect();
        Point::new(coords).expect("box samples are finite")
    }

    fn ensure_matches(&self, f: &QcOracle) -> Result<(), VerifyError> {
        if self.dim() != f.dimension() {
            return Err(QcError::DimensionMismatch {
                expected: f.dimension(),
                found: self.dim(),
            }
            .into());
        }
        Ok(())
    }

    /// Up to `sample_count` points with `accept(f(x))`, within a budget of
    /// `REJECTION_FACTOR * sample_count` draws. Points outside the oracle's
    /// domain are rejected.
    pub(crate) fn pool(
        &self,
        f: &QcOracle,
        rng: &mut impl Rng,
        accept: impl Fn(f64) -> bool,
    ) -> Vec<(Point, f64)> {
        let budget = REJECTION_FACTOR * self.sample_count;
        let mut out = Vec::new();
        for _ in 0..budget {
            if out.len() == self.sample_count {
                break;
            }
            let x = self.uniform(rng);
            if !f.accepts(&x) {
                continue;
            }
            if let Ok(v) = f.evaluate(&x) {
                if accept(v) {
                    out.push((x, v));
                }
            }
        }
        out
    }
}

/// Outcome of one sampled property check.
///
/// `max_violation` is the largest observed value of `lhs − rhs` for the
/// checked inequality `lhs ≤ rhs`; it is negative when every sample held
/// with slack. A sample counts as a violation once this exceeds the
/// tolerance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub property: String,
    pub function: String,
    pub samples_tested: usize,
    pub skipped: usize,
    pub violations: usize,
    pub max_violation: f64,
    pub worst_counterexample: Vec<Vec<f64>>,
    /// No sample could be tested (for instance no feasible points).
    pub vacuous: bool,
    pub passed: bool,
}

/// Accumulates per-sample excesses into a report.
pub(crate) struct Tally {
    property: &'static str,
    function: String,
    tol: f64,
    tested: usize,
    skipped: usize,
    violations: usize,
    max_excess: f64,
    worst: Vec<Vec<f64>>,
    vacuous: bool,
}

impl Tally {
    pub(crate) fn new(property: &'static str, f: &QcOracle, tol: f64) -> Self {
        Self::labelled(property, f.label(), tol)
    }

    pub(crate) fn labelled(property: &'static str, label: &str, tol: f64) -> Self {
        Self {
            property,
            function: label.to_owned(),
            tol,
            tested: 0,
            skipped: 0,
            violations: 0,
            max_excess: f64::NEG_INFINITY,
            worst: Vec::new(),
            vacuous: false,
        }
    }

    /// Records one tested sample with excess `lhs − rhs`.
    pub(crate) fn record(&mut self, excess: f64, inputs: &[&Point]) {
        self.record_with(excess, excess > self.tol || excess.is_nan(), inputs);
    }

    /// Records a sample whose violation status is decided by the caller.
    pub(crate) fn record_with(&mut self, excess: f64, violated: bool, inputs: &[&Point]) {
        self.tested += 1;
        if violated {
            self.violations += 1;
        }
        let excess = if excess.is_nan() { f64::INFINITY } else { excess };
        if excess > self.max_excess || self.worst.is_empty() {
            self.max_excess = excess;
            self.worst = inputs.iter().map(|p| p.coords().to_vec()).collect();
        }
    }

    pub(crate) fn skip(&mut self) {
        self.skipped += 1;
    }

    pub(crate) fn mark_vacuous(&mut self) {
        self.vacuous = true;
    }

    pub(crate) fn finish(self) -> ValidationReport {
        ValidationReport {
            property: self.property.to_owned(),
            function: self.function,
            samples_tested: self.tested,
            skipped: self.skipped,
            violations: self.violations,
            max_violation: if self.tested == 0 { 0.0 } else { self.max_excess },
            worst_counterexample: self.worst,
            vacuous: self.vacuous || self.tested == 0,
            passed: self.violations == 0,
        }
    }
}
