use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("functional is zero")]
    ZeroFunctional,

    #[error("vector is zero")]
    ZeroVector,

    #[error("nodes {first} and {second} coincide")]
    DuplicateNodes { first: usize, second: usize },

    #[error("matrix is singular (pivot {pivot:e} below threshold {threshold:e})")]
    Singular { pivot: f64, threshold: f64 },

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix of size {0} exceeds the supported maximum")]
    TooLarge(usize),

    #[error("subtraction lost all precision (relative cancellation {relative:e})")]
    LossOfPrecision { relative: f64 },

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("objective returned a non-finite value at restart {restart}")]
    NonFiniteObjective { restart: usize },

    #[error("search dimension {dim} exceeds the supported maximum {max}")]
    DimensionTooLarge { dim: usize, max: usize },

    #[error("invalid functional family: {0}")]
    InvalidFamily(String),

    #[error("functional family has rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },

    #[error("basis vectors are linearly dependent")]
    DependentBasis,

    #[error("at least 4 functionals are needed, got {0}")]
    TooFewFunctionals(usize),

    #[error("witness for tuple {tuple:?} is not annihilated (residual {residual:e})")]
    BadWitness { tuple: (usize, usize, usize, usize), residual: f64 },

    #[error("no witness supplied for tuple {0:?}")]
    MissingWitness((usize, usize, usize, usize)),

    #[error("functionals outside pair ({0}, {1}) do not span the space")]
    NotSpanning(usize, usize),

    #[error("hypotheses violated: {}", .0.join("; "))]
    HypothesisViolation(Vec<String>),

    #[error("f_{index}(y) vanishes; interpolation nodes are undefined")]
    DegenerateY { index: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("exponent must lie in (1, 2], got {0}")]
    BadExponent(f64),

    #[error("certificate failure in {bullet} at indices {indices:?}: residual {residual}")]
    CertificateFailure { bullet: String, indices: Vec<usize>, residual: String },

    #[error("bound violated at sample {sample:?}: {detail}")]
    ViolationFound { sample: Vec<f64>, detail: String },
}
