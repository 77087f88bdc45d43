//! CSV trajectory files.
//!
//! Header: `sweep,index_i,x1,…,xn,f_value,residual,dist_to_reference`.
//!
//! - Sweep 0 has a single summary row holding the starting point.
//! - Every later sweep `k` has one row per inner step `i = 1..m`, with the
//!   point `y^i` and `f_value = f_i(y^{i-1})`, followed by a summary row
//!   (`index_i = m`) holding `x_{k+1}`, its residual and its distance to the
//!   reference.
//!
//! Summary rows leave `f_value` empty; inner rows leave `residual` and
//! `dist_to_reference` empty. Numbers use 17 significant digits, so every
//! value parses back to the identical `f64`.

use std::io::{Read, Write};

use qfp_core::{FeasibilityProblem, Point, SolveResult};

use crate::error::CliError;

/// `v` with 17 significant digits.
pub fn format_number(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn header(dim: usize) -> Vec<String> {
    let mut h = vec!["sweep".to_string(), "index_i".to_string()];
    h.extend((1..=dim).map(|i| format!("x{i}")));
    h.extend(["f_value", "residual", "dist_to_reference"].map(String::from));
    h
}

fn row(sweep: usize, index: usize, x: &Point, f_value: Option<f64>, residual: Option<f64>, dist: Option<f64>) -> Vec<String> {
    let opt = |v: Option<f64>| v.map(format_number).unwrap_or_default();
    let mut r = vec![sweep.to_string(), index.to_string()];
    r.extend(x.coords().iter().map(|&c| format_number(c)));
    r.extend([opt(f_value), opt(residual), opt(dist)]);
    r
}

/// Writes the trajectory of `result`, started from `x0`.
///
/// Inner rows are only emitted for sweeps whose inner points were recorded.
pub fn write_trace<W: Write>(
    out: W,
    problem: &FeasibilityProblem,
    x0: &Point,
    reference: Option<&Point>,
    result: &SolveResult,
) -> Result<(), CliError> {
    let m = problem.len();
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header(problem.dimension()))?;
    w.write_record(row(
        0,
        m,
        x0,
        None,
        Some(problem.residual(x0)?),
        reference.map(|z| x0.distance(z)),
    ))?;
    for rec in &result.trace {
        if rec.inner.len() == m + 1 {
            for i in 1..=m {
                w.write_record(row(rec.sweep_index, i, &rec.inner[i], Some(rec.values[i - 1]), None, None))?;
            }
        }
        w.write_record(row(
            rec.sweep_index,
            m,
            &rec.exit,
            None,
            Some(rec.residual),
            rec.reference_distance,
        ))?;
    }
    w.flush()?;
    Ok(())
}

/// One parsed trace row.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub sweep: usize,
    pub index: usize,
    pub raw_point: Vec<String>,
    pub point: Point,
    pub f_value: Option<f64>,
    pub residual: Option<f64>,
    pub dist_to_reference: Option<f64>,
}

impl TraceRow {
    pub fn is_summary(&self) -> bool {
        self.residual.is_some()
    }
}

pub fn read_trace<R: Read>(input: R, dim: usize) -> Result<Vec<TraceRow>, CliError> {
    let mut r = csv::Reader::from_reader(input);
    if r.headers()?.iter().collect::<Vec<_>>() != header(dim) {
        return Err(CliError::Trace("unexpected header".into()));
    }
    let num = |s: &str| -> Result<f64, CliError> {
        s.parse().map_err(|_| CliError::Trace(format!("bad number `{s}`")))
    };
    let opt = |s: &str| -> Result<Option<f64>, CliError> {
        if s.is_empty() {
            Ok(None)
        } else {
            num(s).map(Some)
        }
    };
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let field = |i: usize| rec.get(i).unwrap_or("");
        let int = |s: &str| -> Result<usize, CliError> {
            s.parse().map_err(|_| CliError::Trace(format!("bad integer `{s}`")))
        };
        let raw_point: Vec<String> = (0..dim).map(|j| field(2 + j).to_string()).collect();
        let coords = raw_point.iter().map(|s| num(s)).collect::<Result<Vec<_>, _>>()?;
        rows.push(TraceRow {
            sweep: int(field(0))?,
            index: int(field(1))?,
            point: Point::new(coords)?,
            raw_point,
            f_value: opt(field(2 + dim))?,
            residual: opt(field(3 + dim))?,
            dist_to_reference: opt(field(4 + dim))?,
        });
    }
    Ok(rows)
}

/// Recomputes every inner row by applying the projections to the preceding
/// row's point and compares the 17-digit renderings. Returns the number of
/// rows replayed.
pub fn replay_trace(problem: &FeasibilityProblem, rows: &[TraceRow]) -> Result<usize, CliError> {
    let m = problem.len();
    let mismatch = |r: &TraceRow, what: &str| {
        CliError::Trace(format!("sweep {} index {}: {what} differs", r.sweep, r.index))
    };
    let mut current: Option<&TraceRow> = None;
    let mut replayed = 0;
    for r in rows {
        let Some(prev) = current else {
            if !(r.sweep == 0 && r.is_summary()) {
                return Err(CliError::Trace("trace must start with the sweep-0 row".into()));
            }
            current = Some(r);
            continue;
        };
        if r.is_summary() {
            if r.raw_point != prev.raw_point && prev.sweep == r.sweep {
                return Err(mismatch(r, "summary point"));
            }
            let residual = problem.residual(&r.point)?;
            if r.residual.map(format_number) != Some(format_number(residual)) {
                return Err(mismatch(r, "residual"));
            }
        } else {
            if r.index == 0 || r.index > m {
                return Err(mismatch(r, "index"));
            }
            let f = &problem.functions()[r.index - 1];
            let value = f.evaluate(&prev.point)?;
            if r.f_value.map(format_number) != Some(format_number(value)) {
                return Err(mismatch(r, "f_value"));
            }
            let next = f.project(&prev.point)?;
            let rendered: Vec<String> = next.coords().iter().map(|&c| format_number(c)).collect();
            if rendered != r.raw_point {
                return Err(mismatch(r, "point"));
            }
            replayed += 1;
        }
        current = Some(r);
    }
    Ok(replayed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for v in [0.1, 1.0 / 3.0, -2.5e-300, 5.0, 0.0, 1e308, f64::MIN_POSITIVE] {
            let s = format_number(v);
            assert_eq!(s.parse::<f64>().unwrap(), v, "{s}");
            let mantissa = s.split('e').next().unwrap().trim_start_matches('-');
            assert_eq!(mantissa.chars().filter(|c| c.is_ascii_digit()).count(), 17);
        }
    }

    #[test]
    fn header_names() {
        assert_eq!(
            header(2).join(","),
            "sweep,index_i,x1,x2,f_value,residual,dist_to_reference"
        );
    }
}
