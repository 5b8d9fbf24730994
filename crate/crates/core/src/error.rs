use thiserror::Error;

/// Errors raised anywhere in the toolkit.
///
/// Variants that say "internal" in their message indicate a consistency
/// check failed; they are never expected for valid input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("characteristic {0} is not prime")]
    NonPrimeCharacteristic(u64),
    #[error("modulus {0} is not irreducible of the requested degree")]
    ReducibleModulus(String),
    #[error("unsupported field: {0}")]
    UnsupportedKind(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live in different fields")]
    SpecMismatch,
    #[error("no element of exact multiplicative order {order} in {field}")]
    NoSuchRoot { order: u64, field: String },
    #[error("closure exceeded {cap} elements; the group is infinite or the cap is too small")]
    NotFiniteWithinCap { cap: usize },
    #[error("singular matrix (determinant zero)")]
    SingularMatrix,
    #[error("the two points must be different")]
    PointsEqual,
    #[error("configuration mixes data over different fields")]
    FieldMismatch,
    #[error("order of the zero function is undefined")]
    ZeroFunction,
    #[error("internal: no nonconstant elementary symmetric function")]
    NoNonconstantSymmetricFunction,
    #[error("internal: pole divisor mismatch: {0}")]
    PoleDivisorMismatch(String),
    #[error("eta is not an element of g2")]
    EtaNotInG2,
    #[error("internal: model degree {actual} differs from predicted {expected}")]
    DegreeMismatch { expected: i64, actual: i64 },
    #[error("internal: image point not as predicted: {0}")]
    ImageNotAsPredicted(String),
    #[error("the configuration does not satisfy the criterion: {0}")]
    CriterionFailed(String),
    #[error("line contains the whole curve")]
    LineContainsCurve,
    #[error("cannot remove extraneous factors: {0}")]
    ExtraneousFactorIrremovable(String),
    #[error("invariance failure: {0}")]
    InvarianceFailure(String),
    #[error("degree failure: {0}")]
    DegreeFailure(String),
    #[error("divisor identity failure: {0}")]
    DivisorIdentityFailure(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("search space too large: {size} configurations exceed budget {budget}")]
    SpaceTooLarge { size: u128, budget: u128 },
}

pub type Result<T> = std::result::Result<T, Error>;
