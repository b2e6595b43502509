use thiserror::Error;

/// Errors raised by the algebra, map, bubble-space and dynamics layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("component {index} is not homogeneous")]
    Inhomogeneous { index: usize },

    #[error("components have mismatched degrees {degrees:?}")]
    MismatchedDegrees { degrees: [u32; 3] },

    #[error("all components of the map vanish identically")]
    ZeroMap,

    #[error("point {point} is an indeterminacy point of the map")]
    IndeterminatePoint { point: String },

    #[error("jacobian vanishes identically (map is not dominant)")]
    ZeroJacobian,

    #[error("could not split a jacobian factor of degree {degree} into irreducible pieces: {factor}")]
    FactorizationIncomplete { factor: String, degree: u32 },

    #[error("map is not birational: {reason}")]
    NotBirational { reason: String },

    #[error("base locus contains non-rational points; residual form {residual}")]
    IrrationalBaseLocus { residual: String },

    #[error("noether equalities fail: sum m = {sum} (expected {expected_sum}), sum m^2 = {sum_sq} (expected {expected_sum_sq})")]
    NoetherMismatch {
        sum: i64,
        expected_sum: i64,
        sum_sq: i64,
        expected_sum_sq: i64,
    },

    #[error("germ has no base point at the chart origin")]
    NotABasePoint,

    #[error("point {point} is a base point of the map")]
    IsBasePoint { point: String },

    #[error("image tower exceeded depth bound {bound}")]
    DepthExceeded { bound: usize },

    #[error("composition degree {degree} exceeds cap {cap}")]
    DegreeCapExceeded { degree: u64, cap: u64 },

    #[error("transport failed at step {step} for point {point}: {reason}")]
    TransportFailure {
        step: usize,
        point: String,
        reason: String,
    },

    #[error("automorphism matrix is singular")]
    SingularMatrix,

    #[error("division by zero")]
    DivisionByZero,

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
