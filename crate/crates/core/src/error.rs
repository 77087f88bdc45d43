use thiserror::Error;

/// Errors raised by points, oracles and the projection operator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QcError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("point has a non-finite coordinate at index {index}")]
    NonFiniteCoordinate { index: usize },
    #[error("point must have at least one coordinate")]
    EmptyPoint,
    #[error("oracle `{label}` evaluated outside its domain")]
    DomainViolation { label: String },
    #[error("oracle `{label}` returned a non-finite value")]
    NonFiniteValue { label: String },
    #[error("oracle `{label}` returned a zero star subgradient at an infeasible point")]
    ZeroSubgradient { label: String },
    #[error("oracle `{label}` produced a non-finite projection step")]
    NonFiniteStep { label: String },
    #[error("invalid Hölder data (L = {modulus}, delta = {order}); both must be positive and finite")]
    InvalidHolder { modulus: f64, order: f64 },
    #[error("affine slope vector must be nonzero")]
    ZeroSlope,
    #[error("ball radius must be positive, got {0}")]
    NonPositiveRadius(f64),
    #[error("shift must be positive, got {0}")]
    NonPositiveShift(f64),
    #[error("linear-fractional denominator vector must be nonzero")]
    ZeroDenominator,
    #[error("family `{family}` is one-dimensional, got dimension {found}")]
    NotOneDimensional { family: &'static str, found: usize },
    #[error("family `{family}` has no default Hölder data; supply it explicitly")]
    MissingHolder { family: &'static str },
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(&'static str),
    #[error("trace is empty")]
    EmptyTrace,
    #[error("feasibility problem needs at least one function")]
    EmptyProblem,
}

pub type Result<T, E = QcError> = std::result::Result<T, E>;
