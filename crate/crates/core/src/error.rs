use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero vector has no primitive generator")]
    ZeroVector,
    #[error("generators are linearly dependent (expected rank {expected})")]
    DependentGenerators { expected: usize },
    #[error("singular matrix")]
    SingularMatrix,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("ray {0} is the zero vector")]
    ZeroRay(usize),
    #[error("rays {0} and {1} coincide after primitive normalization")]
    DuplicateRay(usize, usize),
    #[error("ray index {index} out of range (fan has {rays} rays)")]
    RayIndexOutOfRange { index: usize, rays: usize },
    #[error("cone {0} is degenerate (repeated or dependent generators)")]
    DegenerateCone(usize),
    #[error("cone {0} is not three-dimensional")]
    NotPure(usize),
    #[error("cones {0} and {1} do not meet along a common face")]
    OverlappingCones(usize, usize),
    #[error("fan is not complete")]
    NotComplete,
    #[error("flip not defined: circuit sign pattern is ({positive},{negative})")]
    FlipNotDefined { positive: usize, negative: usize },
    #[error("wall {0} not found")]
    NoSuchWall(String),
    #[error("point lies outside the support of the fan")]
    OutsideSupport,
    #[error("point is not primitive")]
    NotPrimitive,
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("bad weights: {0}")]
    BadWeights(String),

    #[error("divisor is not nef")]
    NotNef,
    #[error("polytope is unbounded")]
    Unbounded,
    #[error("fan is not projective (nef cone not full-dimensional)")]
    NotProjective,
    #[error("Cartier data disagree on a shared face")]
    InconsistentCartierData,
    #[error("cross-check failed: {0}")]
    CrossCheckFailed(String),

    #[error("ray is not extremal")]
    NotExtremal,
    #[error("walls on one extremal ray classify differently")]
    InconsistentRay,
    #[error("Picard rank is {0}, expected 2")]
    NotRankTwo(usize),
    #[error("two-ray game exceeded {0} flips")]
    IterationCapExceeded(usize),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
