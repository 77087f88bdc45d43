//! Finite points of n-dimensional Euclidean space.

use std::ops::Index;

use serde::{Deserialize, Serialize};

use crate::error::{QcError, Result};

/// A point of ℝⁿ with n ≥ 1 and every coordinate finite.
///
/// The dimension is fixed at construction. Arithmetic helpers return new
/// points; non-finite results are rejected by [`Point::new`] so callers that
/// can overflow go through the checked constructor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(QcError::EmptyPoint);
        }
        if let Some(index) = coords.iter().position(|c| !c.is_finite()) {
            return Err(QcError::NonFiniteCoordinate { index });
        }
        Ok(Self(coords))
    }

    pub fn from_slice(coords: &[f64]) -> Result<Self> {
        Self::new(coords.to_vec())
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        Self::new(vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn dot(&self, other: &Point) -> f64 {
        dot(&self.0, &other.0)
    }

    pub fn norm(&self) -> f64 {
        norm(&self.0)
    }

    /// `self - other`, coordinate-wise.
    pub fn sub(&self, other: &Point) -> Point {
        Point(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn distance(&self, other: &Point) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    /// Checks that `self` has `expected` coordinates.
    pub fn ensure_dim(&self, expected: usize) -> Result<()> {
        if self.dim() == expected {
            Ok(())
        } else {
            Err(QcError::DimensionMismatch {
                expected,
                found: self.dim(),
            })
        }
    }
}

impl Index<usize> for Point {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl AsRef<[f64]> for Point {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for Point {
    type Error = QcError;

    fn try_from(coords: Vec<f64>) -> Result<Self> {
        Point::new(coords)
    }
}

impl From<Point> for Vec<f64> {
    fn from(p: Point) -> Self {
        p.0
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_finite_and_empty() {
        assert_eq!(Point::new(vec![]), Err(QcError::EmptyPoint));
        assert_eq!(
            Point::new(vec![1.0, f64::NAN]),
            Err(QcError::NonFiniteCoordinate { index: 1 })
        );
        assert!(Point::new(vec![f64::INFINITY]).is_err());
    }

    #[test]
    fn basic_geometry() {
        let p = Point::new(vec![3.0, 4.0]).unwrap();
        let q = Point::zeros(2).unwrap();
        assert_eq!(p.norm(), 5.0);
        assert_eq!(p.distance(&q), 5.0);
        assert_eq!(p.sub(&q), p);
        assert_eq!(p.dot(&p), 25.0);
        assert!(p.ensure_dim(3).is_err());
    }

    #[test]
    fn serde_rejects_nan_free_invalid_input() {
        let p: Point = serde_json::from_str("[1.5, -2]").unwrap();
        assert_eq!(p.coords(), &[1.5, -2.0]);
        assert!(serde_json::from_str::<Point>("[]").is_err());
    }
}
