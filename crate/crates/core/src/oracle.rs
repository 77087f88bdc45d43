//! Quasi-convex function oracles and feasibility problems.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{QcError, Result};
use crate::point::{norm, Point};

/// A quasi-convex function together with a deterministic star-subgradient
/// selector.
///
/// Implementations must be pure: equal inputs give equal outputs and no state
/// is observable between calls. `star_subgradient` is only consulted where
/// `value(x) > 0`, and must return a nonzero vector there.
pub trait QuasiConvexFn: Send + Sync {
    fn dimension(&self) -> usize;

    fn value(&self, x: &[f64]) -> f64;

    fn star_subgradient(&self, x: &[f64]) -> Vec<f64>;

    /// Open set on which the oracle is valid. Defaults to all of ℝⁿ.
    fn in_domain(&self, _x: &[f64]) -> bool {
        true
    }
}

/// Hölder data `(L, δ)` of the bound `|f(x) - f(q)| ≤ L‖x - q‖^δ` for
/// feasible `q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Holder {
    modulus: f64,
    order: f64,
}

impl Holder {
    pub fn new(modulus: f64, order: f64) -> Result<Self> {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        if ok(modulus) && ok(order) {
            Ok(Self { modulus, order })
        } else {
            Err(QcError::InvalidHolder { modulus, order })
        }
    }

    /// Lipschitz data, `δ = 1`.
    pub fn lipschitz(modulus: f64) -> Result<Self> {
        Self::new(modulus, 1.0)
    }

    /// The modulus `L`.
    pub fn modulus(&self) -> f64 {
        self.modulus
    }

    /// The order `δ`.
    pub fn order(&self) -> f64 {
        self.order
    }
}

type EvalFn = dyn Fn(&[f64]) -> f64 + Send + Sync;
type SubgradFn = dyn Fn(&[f64]) -> Vec<f64> + Send + Sync;
type GuardFn = dyn Fn(&[f64]) -> bool + Send + Sync;

/// Closure-backed oracle for ad hoc functions.
struct ClosureFn {
    dimension: usize,
    eval: Box<EvalFn>,
    subgrad: Box<SubgradFn>,
    guard: Option<Box<GuardFn>>,
}

impl QuasiConvexFn for ClosureFn {
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn value(&self, x: &[f64]) -> f64 {
        (self.eval)(x)
    }

    fn star_subgradient(&self, x: &[f64]) -> Vec<f64> {
        (self.subgrad)(x)
    }

    fn in_domain(&self, x: &[f64]) -> bool {
        self.guard.as_ref().is_none_or(|g| g(x))
    }
}

/// A quasi-convex function bundle: the function, its Hölder data and a label
/// used in traces and reports.
///
/// Cloning is cheap; the function itself is shared.
#[derive(Clone)]
pub struct QcOracle {
    func: Arc<dyn QuasiConvexFn>,
    holder: Holder,
    label: String,
}

impl fmt::Debug for QcOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("QcOracle")
            .field("label", &self.label)
            .field("dimension", &self.dimension())
            .field("holder", &self.holder)
            .finish()
    }
}

impl QcOracle {
    pub fn new(func: impl QuasiConvexFn + 'static, holder: Holder, label: impl Into<String>) -> Self {
        Self {
            func: Arc::new(func),
            holder,
            label: label.into(),
        }
    }

    /// Builds an oracle from plain closures.
    pub fn from_fns<E, G>(dimension: usize, eval: E, subgrad: G, holder: Holder) -> Self
    where
        E: Fn(&[f64]) -> f64 + Send + Sync + 'static,
        G: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    {
        Self::new(
            ClosureFn {
                dimension,
                eval: Box::new(eval),
                subgrad: Box::new(subgrad),
                guard: None,
            },
            holder,
            "f",
        )
    }

    /// Like [`QcOracle::from_fns`] with a domain guard.
    pub fn from_fns_guarded<E, G, D>(
        dimension: usize,
        eval: E,
        subgrad: G,
        guard: D,
        holder: Holder,
    ) -> Self
    where
        E: Fn(&[f64]) -> f64 + Send + Sync + 'static,
        G: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
        D: Fn(&[f64]) -> bool + Send + Sync + 'static,
    {
        Self::new(
            ClosureFn {
                dimension,
                eval: Box::new(eval),
                subgrad: Box::new(subgrad),
                guard: Some(Box::new(guard)),
            },
            holder,
            "f",
        )
    }

    pub fn with_holder(mut self, holder: Holder) -> Self {
        self.holder = holder;
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn holder(&self) -> Holder {
        self.holder
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dimension(&self) -> usize {
        self.func.dimension()
    }

    pub(crate) fn raw_value(&self, x: &[f64]) -> f64 {
        self.func.value(x)
    }

    pub(crate) fn raw_subgradient(&self, x: &[f64]) -> Vec<f64> {
        self.func.star_subgradient(x)
    }

    /// Whether `x` has the right dimension and passes the domain guard.
    pub fn accepts(&self, x: &Point) -> bool {
        x.dim() == self.dimension() && self.func.in_domain(x.coords())
    }

    fn check_input(&self, x: &Point) -> Result<()> {
        x.ensure_dim(self.dimension())?;
        if !self.func.in_domain(x.coords()) {
            return Err(QcError::DomainViolation {
                label: self.label.clone(),
            });
        }
        Ok(())
    }

    /// `f(x)`.
    pub fn evaluate(&self, x: &Point) -> Result<f64> {
        self.check_input(x)?;
        let v = self.func.value(x.coords());
        if v.is_finite() {
            Ok(v)
        } else {
            Err(QcError::NonFiniteValue {
                label: self.label.clone(),
            })
        }
    }

    /// The selected star subgradient at `x`.
    ///
    /// A zero vector is an error whenever `f(x) > 0`: there `x` is not a
    /// minimizer, so the star subdifferential has nonzero elements and the
    /// oracle is broken.
    pub fn star_subgradient(&self, x: &Point) -> Result<Point> {
        let v = self.evaluate(x)?;
        self.subgradient_at(x, v)
    }

    pub(crate) fn subgradient_at(&self, x: &Point, value: f64) -> Result<Point> {
        let g = self.func.star_subgradient(x.coords());
        let g = Point::new(g).map_err(|e| match e {
            QcError::EmptyPoint => QcError::DimensionMismatch {
                expected: x.dim(),
                found: 0,
            },
            _ => QcError::NonFiniteValue {
                label: self.label.clone(),
            },
        })?;
        g.ensure_dim(x.dim())?;
        if value > 0.0 && norm(g.coords()) == 0.0 {
            return Err(QcError::ZeroSubgradient {
                label: self.label.clone(),
            });
        }
        Ok(g)
    }
}

/// An ordered list of quasi-convex functions sharing one dimension. The goal
/// is a point in the intersection of their zero sublevel sets.
#[derive(Debug, Clone)]
pub struct FeasibilityProblem {
    dimension: usize,
    functions: Vec<QcOracle>,
}

impl FeasibilityProblem {
    pub fn new(functions: Vec<QcOracle>) -> Result<Self> {
        let first = functions.first().ok_or(QcError::EmptyProblem)?;
        let dimension = first.dimension();
        if dimension == 0 {
            return Err(QcError::EmptyPoint);
        }
        for f in &functions {
            if f.dimension() != dimension {
                return Err(QcError::DimensionMismatch {
                    expected: dimension,
                    found: f.dimension(),
                });
            }
        }
        Ok(Self {
            dimension,
            functions,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn functions(&self) -> &[QcOracle] {
        &self.functions
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    /// `max_i (f_i)₊(x)`, zero exactly on the feasible set.
    pub fn residual(&self, x: &Point) -> Result<f64> {
        x.ensure_dim(self.dimension)?;
        self.functions.iter().try_fold(0.0_f64, |acc, f| {
            Ok(acc.max(crate::projection::positive_part(f.evaluate(x)?)))
        })
    }
}
