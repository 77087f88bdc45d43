//! Problem files, trace files and the `run`/`validate` commands of the `qfp`
//! binary.

pub mod commands;
pub mod error;
pub mod problem;
pub mod trace;

pub use error::CliError;
pub use problem::{parse_problem, parse_problem_str, write_problem, ParsedProblem, ProblemFile};
