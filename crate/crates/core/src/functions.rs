//! Built-in quasi-convex function families.
//!
//! Each family ships one deterministic analytic star-subgradient selector:
//!
//! | family               | f(x)                               | selector           | default (L, δ) |
//! |----------------------|------------------------------------|--------------------|----------------|
//! | affine               | ⟨a,x⟩ + b                          | a                  | (‖a‖, 1)       |
//! | ball                 | ‖x − center‖ − r                   | x − center         | (1, 1)         |
//! | linear-fractional    | (⟨a,x⟩ + b) / (⟨c,x⟩ + d)          | a − f(x)·c         | (given, 1)     |
//! | sqrt-abs-shift (1-D) | √\|x\| − s                         | sign(x)            | (1, 1/2)       |
//! | floor example (1-D)  | ⌊x⌋ for x > 1, x otherwise         | 1                  | (1, 1)         |
//! | monotone composition | φ(g(x)), g convex, φ nondecreasing | a subgradient of g | (given)        |
//!
//! The linear-fractional family is not globally Hölder, so its modulus must be
//! stated for a compact operating region (see `verify::estimate_holder`).

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{QcError, Result};
use crate::oracle::{Holder, QcOracle, QuasiConvexFn};
use crate::point::{dot, norm, Point};

struct Affine {
    a: Vec<f64>,
    b: f64,
}

impl QuasiConvexFn for Affine {
    fn dimension(&self) -> usize {
        self.a.len()
    }

    fn value(&self, x: &[f64]) -> f64 {
        dot(&self.a, x) + self.b
    }

    fn star_subgradient(&self, _x: &[f64]) -> Vec<f64> {
        self.a.clone()
    }
}

struct Ball {
    center: Vec<f64>,
    radius: f64,
}

impl Ball {
    fn offset(&self, x: &[f64]) -> Vec<f64> {
        x.iter().zip(&self.center).map(|(a, b)| a - b).collect()
    }
}

impl QuasiConvexFn for Ball {
    fn dimension(&self) -> usize {
        self.center.len()
    }

    fn value(&self, x: &[f64]) -> f64 {
        norm(&self.offset(x)) - self.radius
    }

    // f(x) > 0 implies x != center, so the offset is nonzero where consulted.
    fn star_subgradient(&self, x: &[f64]) -> Vec<f64> {
        self.offset(x)
    }
}

struct LinearFractional {
    a: Vec<f64>,
    b: f64,
    c: Vec<f64>,
    d: f64,
}

impl LinearFractional {
    fn denominator(&self, x: &[f64]) -> f64 {
        dot(&self.c, x) + self.d
    }
}

impl QuasiConvexFn for LinearFractional {
    fn dimension(&self) -> usize {
        self.a.len()
    }

    fn value(&self, x: &[f64]) -> f64 {
        (dot(&self.a, x) + self.b) / self.denominator(x)
    }

    fn star_subgradient(&self, x: &[f64]) -> Vec<f64> {
        let fx = self.value(x);
        self.a.iter().zip(&self.c).map(|(a, c)| a - fx * c).collect()
    }

    fn in_domain(&self, x: &[f64]) -> bool {
        self.denominator(x) > 0.0
    }
}

struct SqrtAbsShift {
    shift: f64,
}

impl QuasiConvexFn for SqrtAbsShift {
    fn dimension(&self) -> usize {
        1
    }

    fn value(&self, x: &[f64]) -> f64 {
        x[0].abs().sqrt() - self.shift
    }

    // f(0) = -s < 0, so sign(0) is never consulted.
    fn star_subgradient(&self, x: &[f64]) -> Vec<f64> {
        vec![x[0].signum()]
    }
}

/// `⌊t⌋` for `t > 1`, `t` otherwise. Nondecreasing, upper semicontinuous,
/// with closed zero sublevel set `(-∞, 0]`.
pub fn floor_example(t: f64) -> f64 {
    if t > 1.0 {
        t.floor()
    } else {
        t
    }
}

struct PaperFloor;

impl QuasiConvexFn for PaperFloor {
    fn dimension(&self) -> usize {
        1
    }

    fn value(&self, x: &[f64]) -> f64 {
        floor_example(x[0])
    }

    // Strict sublevel sets are left half-lines.
    fn star_subgradient(&self, _x: &[f64]) -> Vec<f64> {
        vec![1.0]
    }
}

type ScalarFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
type VectorFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;
type Monotone = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

struct MonotoneComposition {
    dimension: usize,
    inner: ScalarFn,
    inner_subgrad: VectorFn,
    outer: Monotone,
}

impl QuasiConvexFn for MonotoneComposition {
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn value(&self, x: &[f64]) -> f64 {
        (self.outer)((self.inner)(x))
    }

    // A convex subgradient of g is a Greenberg-Pierskalla subgradient of φ∘g,
    // hence a star subgradient.
    fn star_subgradient(&self, x: &[f64]) -> Vec<f64> {
        (self.inner_subgrad)(x)
    }
}

/// `f(x) = ⟨a, x⟩ + b` with `L = ‖a‖`, `δ = 1`.
pub fn make_affine(a: Point, b: f64) -> Result<QcOracle> {
    let slope = a.norm();
    if slope == 0.0 {
        return Err(QcError::ZeroSlope);
    }
    if !b.is_finite() {
        return Err(QcError::NonFiniteCoordinate { index: 0 });
    }
    Ok(QcOracle::new(
        Affine {
            a: a.into_inner(),
            b,
        },
        Holder::lipschitz(slope)?,
        "affine",
    ))
}

/// `f(x) = ‖x − center‖ − radius` with `L = 1`, `δ = 1`.
pub fn make_ball(center: Point, radius: f64) -> Result<QcOracle> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(QcError::NonPositiveRadius(radius));
    }
    Ok(QcOracle::new(
        Ball {
            center: center.into_inner(),
            radius,
        },
        Holder::lipschitz(1.0)?,
        "ball",
    ))
}

/// `f(x) = (⟨a,x⟩ + b) / (⟨c,x⟩ + d)` on the half-space `⟨c,x⟩ + d > 0`.
///
/// `holder` must hold on the region where the oracle is used; `δ` is
/// normally 1.
pub fn make_linear_fractional(a: Point, b: f64, c: Point, d: f64, holder: Holder) -> Result<QcOracle> {
    c.ensure_dim(a.dim())?;
    if c.norm() == 0.0 {
        return Err(QcError::ZeroDenominator);
    }
    if !(b.is_finite() && d.is_finite()) {
        return Err(QcError::NonFiniteCoordinate { index: 0 });
    }
    Ok(QcOracle::new(
        LinearFractional {
            a: a.into_inner(),
            b,
            c: c.into_inner(),
            d,
        },
        holder,
        "linear_fractional",
    ))
}

/// One-dimensional `f(x) = √|x| − s` with `L = 1`, `δ = 1/2`.
pub fn make_sqrt_abs_shift(s: f64) -> Result<QcOracle> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(QcError::NonPositiveShift(s));
    }
    Ok(QcOracle::new(
        SqrtAbsShift { shift: s },
        Holder::new(1.0, 0.5)?,
        "sqrt_abs_shift",
    ))
}

/// One-dimensional floor example: `⌊x⌋` for `x > 1`, `x` otherwise.
/// 0-lower semicontinuous and upper semicontinuous, not lower
/// semicontinuous. `L = 1`, `δ = 1`.
pub fn make_paper_floor() -> QcOracle {
    QcOracle::new(PaperFloor, Holder::lipschitz(1.0).expect("valid"), "paper_floor")
}

/// `f = φ ∘ g` for convex `g` with subgradient oracle `g_subgrad` and
/// nondecreasing `φ`. Hölder data cannot be derived through `φ` and must be
/// supplied.
pub fn make_monotone_composition<G, S, P>(
    dimension: usize,
    g_eval: G,
    g_subgrad: S,
    phi_eval: P,
    holder: Holder,
) -> QcOracle
where
    G: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    S: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    P: Fn(f64) -> f64 + Send + Sync + 'static,
{
    QcOracle::new(
        MonotoneComposition {
            dimension,
            inner: Arc::new(g_eval),
            inner_subgrad: Arc::new(g_subgrad),
            outer: Arc::new(phi_eval),
        },
        holder,
        "monotone_composition",
    )
}

/// Convex inner function of a serialisable monotone composition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ConvexInner {
    Affine { a: Vec<f64>, b: f64 },
    Ball { center: Vec<f64>, radius: f64 },
}

/// Nondecreasing outer function of a serialisable monotone composition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MonotoneOuter {
    Identity,
    Cube,
    /// [`floor_example`].
    PaperFloor,
}

impl MonotoneOuter {
    pub fn apply(self, t: f64) -> f64 {
        match self {
            MonotoneOuter::Identity => t,
            MonotoneOuter::Cube => t * t * t,
            MonotoneOuter::PaperFloor => floor_example(t),
        }
    }
}

/// Family and parameters of a built-in oracle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    Affine {
        a: Vec<f64>,
        b: f64,
    },
    Ball {
        center: Vec<f64>,
        radius: f64,
    },
    LinearFractional {
        a: Vec<f64>,
        b: f64,
        c: Vec<f64>,
        d: f64,
    },
    SqrtAbsShift {
        s: f64,
    },
    PaperFloor,
    MonotoneComposition {
        inner: ConvexInner,
        outer: MonotoneOuter,
    },
}

impl Family {
    pub const NAMES: [&'static str; 6] = [
        "affine",
        "ball",
        "linear_fractional",
        "sqrt_abs_shift",
        "paper_floor",
        "monotone_composition",
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Family::Affine { .. } => "affine",
            Family::Ball { .. } => "ball",
            Family::LinearFractional { .. } => "linear_fractional",
            Family::SqrtAbsShift { .. } => "sqrt_abs_shift",
            Family::PaperFloor => "paper_floor",
            Family::MonotoneComposition { .. } => "monotone_composition",
        }
    }

    /// Whether the family has no default Hölder data.
    pub fn requires_holder(&self) -> bool {
        matches!(
            self,
            Family::LinearFractional { .. } | Family::MonotoneComposition { .. }
        )
    }

    /// Dimension implied by the parameters.
    pub fn dimension(&self) -> usize {
        match self {
            Family::Affine { a, .. } | Family::LinearFractional { a, .. } => a.len(),
            Family::Ball { center, .. } => center.len(),
            Family::SqrtAbsShift { .. } | Family::PaperFloor => 1,
            Family::MonotoneComposition { inner, .. } => match inner {
                ConvexInner::Affine { a, .. } => a.len(),
                ConvexInner::Ball { center, .. } => center.len(),
            },
        }
    }
}

/// A built-in oracle description: family parameters, optional Hölder
/// override and optional label. Mirrors one entry of a problem file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    #[serde(flatten)]
    pub family: Family,
    #[serde(rename = "L", default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<f64>,
    #[serde(rename = "delta", default, skip_serializing_if = "Option::is_none")]
    pub order: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl FamilySpec {
    pub fn new(family: Family) -> Self {
        Self {
            family,
            modulus: None,
            order: None,
            label: None,
        }
    }

    /// Builds the oracle. Overrides replace the family defaults; families
    /// without defaults need both `L` and `δ`, except linear-fractional,
    /// where `δ` defaults to 1.
    pub fn build(&self) -> Result<QcOracle> {
        let oracle = match &self.family {
            Family::Affine { a, b } => make_affine(Point::from_slice(a)?, *b)?,
            Family::Ball { center, radius } => make_ball(Point::from_slice(center)?, *radius)?,
            Family::LinearFractional { a, b, c, d } => {
                let modulus = self.modulus.ok_or(QcError::MissingHolder {
                    family: "linear_fractional",
                })?;
                let holder = Holder::new(modulus, self.order.unwrap_or(1.0))?;
                make_linear_fractional(Point::from_slice(a)?, *b, Point::from_slice(c)?, *d, holder)?
            }
            Family::SqrtAbsShift { s } => make_sqrt_abs_shift(*s)?,
            Family::PaperFloor => make_paper_floor(),
            Family::MonotoneComposition { inner, outer } => {
                let (Some(modulus), Some(order)) = (self.modulus, self.order) else {
                    return Err(QcError::MissingHolder {
                        family: "monotone_composition",
                    });
                };
                let g = match inner {
                    ConvexInner::Affine { a, b } => make_affine(Point::from_slice(a)?, *b)?,
                    ConvexInner::Ball { center, radius } => {
                        make_ball(Point::from_slice(center)?, *radius)?
                    }
                };
                let (g_eval, g_sub) = (g.clone(), g.clone());
                let outer = *outer;
                make_monotone_composition(
                    g.dimension(),
                    move |x| g_eval.raw_value(x),
                    move |x| g_sub.raw_subgradient(x),
                    move |t| outer.apply(t),
                    Holder::new(modulus, order)?,
                )
            }
        };
        let oracle = match (self.modulus, self.order) {
            (None, None) => oracle,
            (m, o) => {
                let h = oracle.holder();
                oracle.with_holder(Holder::new(m.unwrap_or(h.modulus()), o.unwrap_or(h.order()))?)
            }
        };
        Ok(match &self.label {
            Some(l) => oracle.with_label(l.clone()),
            None => oracle,
        })
    }
}
