//! Problem files: a JSON document with `dimension`, `functions` and the
//! optional `x0` and `feasible_reference` points.
//!
//! ```json
//! {"dimension": 2,
//!  "functions": [{"family": "affine", "a": [1, 0], "b": 0},
//!                {"family": "ball", "center": [0, 0], "radius": 1, "L": 1}],
//!  "x0": [2, 3]}
//! ```
//!
//! Each function entry carries its `family` name, the family parameters,
//! optional `L`/`delta` overrides and an optional `label` (defaults to
//! `f1`..`fm`).

use std::path::Path;

use qfp_core::{Family, FamilySpec, FeasibilityProblem, Point};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemFile {
    pub dimension: usize,
    pub functions: Vec<FamilySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x0: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub feasible_reference: Option<Vec<f64>>,
}

/// A validated problem file turned into oracles.
#[derive(Debug, Clone)]
pub struct ParsedProblem {
    pub file: ProblemFile,
    pub problem: FeasibilityProblem,
    pub x0: Option<Point>,
    pub reference: Option<Point>,
}

fn schema(msg: impl Into<String>) -> CliError {
    CliError::Schema(msg.into())
}

/// Reads and validates a problem file.
pub fn parse_problem(path: &Path) -> Result<ParsedProblem, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })?;
    parse_problem_str(&text)
}

pub fn parse_problem_str(text: &str) -> Result<ParsedProblem, CliError> {
    let doc: Value = serde_json::from_str(text).map_err(|e| CliError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let obj = doc
        .as_object()
        .ok_or_else(|| schema("top level must be an object"))?;
    let dimension = match obj.get("dimension") {
        None => return Err(schema("missing key `dimension`")),
        Some(v) => v
            .as_u64()
            .filter(|&d| d >= 1)
            .ok_or_else(|| schema("`dimension` must be a positive integer"))? as usize,
    };
    let entries = match obj.get("functions") {
        None => return Err(schema("missing key `functions`")),
        Some(Value::Array(a)) if a.is_empty() => {
            return Err(schema("`functions` must contain at least one entry"))
        }
        Some(Value::Array(a)) => a,
        Some(_) => return Err(schema("`functions` must be an array")),
    };
    let mut functions = Vec::with_capacity(entries.len());
    for (i, entry) in entries.iter().enumerate() {
        functions.push(parse_entry(i, entry, dimension)?);
    }
    let point_key = |key: &str| -> Result<Option<Vec<f64>>, CliError> {
        match obj.get(key) {
            None | Some(Value::Null) => Ok(None),
            Some(v) => {
                let coords: Vec<f64> = serde_json::from_value(v.clone())
                    .map_err(|e| schema(format!("`{key}`: {e}")))?;
                if coords.len() != dimension {
                    return Err(schema(format!(
                        "`{key}` has {} coordinates, expected {dimension}",
                        coords.len()
                    )));
                }
                Ok(Some(coords))
            }
        }
    };
    let file = ProblemFile {
        dimension,
        functions,
        x0: point_key("x0")?,
        feasible_reference: point_key("feasible_reference")?,
    };
    build(file)
}

fn parse_entry(i: usize, entry: &Value, dimension: usize) -> Result<FamilySpec, CliError> {
    let ctx = |msg: String| schema(format!("functions[{i}]: {msg}"));
    let family = entry
        .get("family")
        .ok_or_else(|| ctx("missing key `family`".into()))?
        .as_str()
        .ok_or_else(|| ctx("`family` must be a string".into()))?;
    if !Family::NAMES.contains(&family) {
        return Err(CliError::UnknownFamily(family.to_owned()));
    }
    let spec: FamilySpec = serde_json::from_value(entry.clone()).map_err(|e| ctx(e.to_string()))?;
    for (key, value) in [("L", spec.modulus), ("delta", spec.order)] {
        if let Some(v) = value {
            if !(v.is_finite() && v > 0.0) {
                return Err(ctx(format!("`{key}` must be positive, got {v}")));
            }
        }
    }
    let implied = spec.family.dimension();
    if implied != dimension {
        return Err(ctx(format!(
            "{family} parameters have dimension {implied}, problem has {dimension}"
        )));
    }
    if let Family::LinearFractional { a, c, .. } = &spec.family {
        if a.len() != c.len() {
            return Err(ctx("`a` and `c` differ in length".into()));
        }
    }
    Ok(spec)
}

/// Builds oracles for an already-parsed document.
pub fn build(file: ProblemFile) -> Result<ParsedProblem, CliError> {
    let mut oracles = Vec::with_capacity(file.functions.len());
    for (i, spec) in file.functions.iter().enumerate() {
        let oracle = spec
            .build()
            .map_err(|e| schema(format!("functions[{i}]: {e}")))?;
        let label = spec.label.clone().unwrap_or_else(|| format!("f{}", i + 1));
        oracles.push(oracle.with_label(label));
    }
    let problem = FeasibilityProblem::new(oracles).map_err(|e| schema(e.to_string()))?;
    let point = |c: &Option<Vec<f64>>| -> Result<Option<Point>, CliError> {
        c.as_ref()
            .map(|v| Point::from_slice(v).map_err(|e| schema(e.to_string())))
            .transpose()
    };
    Ok(ParsedProblem {
        x0: point(&file.x0)?,
        reference: point(&file.feasible_reference)?,
        problem,
        file,
    })
}

/// Serialises a problem file as pretty-printed JSON.
pub fn write_problem(file: &ProblemFile) -> String {
    serde_json::to_string_pretty(file).expect("problem files serialise")
}
