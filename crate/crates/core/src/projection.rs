//! The star subgradient projection operator.
//!
//! For an oracle `f` with Hölder data `(L, δ)` and selected star subgradient
//! `c(x)`,
//!
//! ```text
//! P(x) = x - (f₊(x) / L)^(1/δ) · c(x) / ‖c(x)‖   if f(x) > 0
//! P(x) = x                                       otherwise
//! ```
//!
//! The case split tests `f(x) > 0` exactly, without an epsilon, so that the
//! fixed points of `P` are exactly the points with `f(x) ≤ 0`.

use crate::error::{QcError, Result};
use crate::oracle::QcOracle;
use crate::point::{norm, Point};

/// `max(v, 0)`.
pub fn positive_part(v: f64) -> f64 {
    if v > 0.0 {
        v
    } else {
        0.0
    }
}

impl QcOracle {
    /// Length of the projection step at a point with value `value`, i.e.
    /// `(f₊ / L)^(1/δ)`.
    pub fn step_length(&self, value: f64) -> Result<f64> {
        let h = self.holder();
        let step = (positive_part(value) / h.modulus()).powf(h.order().recip());
        if step.is_finite() {
            Ok(step)
        } else {
            Err(QcError::NonFiniteStep {
                label: self.label().to_owned(),
            })
        }
    }

    /// Applies the star subgradient projection to `x`.
    ///
    /// The subgradient oracle is never called at feasible points.
    pub fn project(&self, x: &Point) -> Result<Point> {
        let value = self.evaluate(x)?;
        if value <= 0.0 {
            return Ok(x.clone());
        }
        let step = self.step_length(value)?;
        let c = self.subgradient_at(x, value)?;
        let scale = step / norm(c.coords());
        let moved: Vec<f64> = x
            .coords()
            .iter()
            .zip(c.coords())
            .map(|(xi, ci)| xi - scale * ci)
            .collect();
        Point::new(moved).map_err(|_| QcError::NonFiniteStep {
            label: self.label().to_owned(),
        })
    }

    /// Whether `‖P(x) - x‖ ≤ tol`.
    pub fn is_fixed_point(&self, x: &Point, tol: f64) -> Result<bool> {
        Ok(self.project(x)?.distance(x) <= tol)
    }
}
