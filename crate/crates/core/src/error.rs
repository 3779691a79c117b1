use thiserror::Error;

use crate::plane::{ProjLine, ProjPoint};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("extension exponent must be positive")]
    ZeroExponent,
    #[error("field size {p}^{n} does not fit below 2^32")]
    FieldTooLarge { p: u32, n: u32 },
    #[error("element code {0} is outside the field")]
    InvalidElement(u32),
    #[error("zero has no multiplicative order")]
    ZeroElement,
    #[error("element {0} is not in the subfield GF(q)")]
    NotInSubfield(u32),
    #[error("objects from different field towers")]
    TowerMismatch,

    #[error("the zero vector is not a projective point or line")]
    ZeroVector,
    #[error("points coincide: {0}")]
    SamePoint(ProjPoint),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("points {0:?} do not form a projective frame")]
    NotAFrame(Vec<ProjPoint>),

    #[error("domain is not closed under the group: image {0} escaped")]
    DomainNotClosed(ProjPoint),
    #[error("point {0} is not in the unital")]
    PointNotInUnital(ProjPoint),
    #[error("not a unital: {0}")]
    NotAUnital(String),
    #[error("no unique 1-secant at {point}: found {found}")]
    TangentCount { point: ProjPoint, found: usize },
    #[error("Buekenhout-Metz construction needs odd q")]
    EvenCharacteristic,
    #[error("Buekenhout-Metz discriminant {discriminant} is not a non-square in GF(q)")]
    Discriminant { discriminant: u32 },
    #[error("Hermitian form parameter must be nonzero")]
    ZeroParameter,
    #[error("matrix is not conjugate-symmetric")]
    NotHermitian,
    #[error("Hermitian form has rank {0}, expected 3")]
    Degenerate(usize),
    #[error("stabiliser reduction produced an element that does not preserve the unital")]
    ReductionUnsound,

    #[error("element {0} is not primitive")]
    NotPrimitive(u32),
    #[error("set is not a union of group orbits off O and Y_inf: {0}")]
    NotInvariant(ProjPoint),
    #[error("incidence not well defined: orbit {orbit} straddles line {line}")]
    OrbitStraddlesLine { orbit: usize, line: usize },
    #[error("projectivity does not permute the quotient plane: {0}")]
    NotNormalising(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("weight rule conflict: total weight {total}, expected {expected}")]
    WeightConflict { total: usize, expected: usize },

    #[error("series precision underflow")]
    PrecisionUnderflow,
    #[error("branch precision {got} too small, need at least {need}")]
    PrecisionTooSmall { got: usize, need: usize },
    #[error("branch centre is not on the curve")]
    CentreNotOnCurve,
    #[error("intersection series vanishes to precision {0}: common component")]
    CommonComponent(usize),
    #[error("point {0} is not common to both curves")]
    NotCommonPoint(ProjPoint),
    #[error("tangent-sharing family total {total} differs from budget {budget}")]
    BezoutMismatch { total: u32, budget: u32 },
    #[error("line {0} is not a line of the geometry")]
    UnknownLine(ProjLine),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}
