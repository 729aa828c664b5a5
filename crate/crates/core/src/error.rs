use thiserror::Error;

/// Everything that can go wrong inside the engine.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("degree overflow: {degree} exceeds fiber dimension {dim}")]
    DegreeOverflow { degree: usize, dim: usize },

    #[error("cannot contract a scalar")]
    ScalarContraction,

    #[error("invalid multi-index {0:?}")]
    InvalidMultiIndex(Vec<usize>),

    #[error("invalid curvature tensor: {what} (residual {residual:.3e})")]
    InvalidTensor { what: &'static str, residual: f64 },

    #[error("invalid O'Neill tensor: {0}")]
    InvalidONeill(String),

    #[error("degenerate plane: Gram determinant {0:.3e}")]
    DegeneratePlane(f64),

    #[error("degenerate point: {0}")]
    DegeneratePoint(String),

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("unknown field {0}")]
    UnknownField(String),

    #[error("eigen-solver failure: {0}")]
    EigenFailure(String),

    #[error("sampling budget of {0} draws exhausted")]
    SamplingExhausted(usize),

    #[error("identity `{name}` violated: residual {residual:.3e} [{digest}]")]
    IdentityViolation {
        name: &'static str,
        residual: f64,
        digest: String,
    },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("i/o: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
