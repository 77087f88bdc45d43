//! Quasi-convex feasibility via cyclic star subgradient projections.
//!
//! Given quasi-convex functions `f_1, …, f_m` on ℝⁿ, the solver looks for a
//! point with `f_i(x) ≤ 0` for every `i` by sweeping the star subgradient
//! projections `P_{f_1}, …, P_{f_m}` in cyclic order. The [`verify`] module
//! checks the inequalities behind the method by brute-force sampling.

pub mod catalog;
pub mod error;
pub mod functions;
pub mod oracle;
pub mod point;
pub mod projection;
pub mod solver;
pub mod verify;

pub use error::{QcError, Result};
pub use functions::{
    make_affine, make_ball, make_linear_fractional, make_monotone_composition,
    make_paper_floor, make_sqrt_abs_shift, Family, FamilySpec,
};
pub use oracle::{FeasibilityProblem, Holder, QcOracle, QuasiConvexFn};
pub use point::Point;
pub use projection::positive_part;
pub use solver::{
    compose_operator, fejer_check, solve, sweep, SolveError, SolveResult, SolveStatus,
    SolverConfig, SweepRecord,
};
