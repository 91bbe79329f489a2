use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid register layout: {0}")]
    InvalidLayout(String),

    #[error("total dimension {dim} exceeds the configured cap {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("expected {expected} entries, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("state is not normalized: squared norm {0}")]
    NotNormalized(f64),

    #[error("operator is not Hermitian: max deviation {0:e}")]
    NotHermitian(f64),

    #[error("operator trace is {0}, expected 1")]
    BadTrace(f64),

    #[error("operator has eigenvalue {0:e} below the positivity window")]
    NotPositive(f64),

    #[error("invalid subsystem selection: {0}")]
    InvalidSubsystems(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("factor {index} is not unitary (deviation {deviation:e})")]
    NotUnitary { index: usize, deviation: f64 },

    #[error("invalid measure parameter: {0}")]
    InvalidParam(String),

    #[error("block bound k={k} is out of range for n={n}")]
    BoundOutOfRange { n: usize, k: usize },

    #[error("register size n={n} exceeds the cap {cap}")]
    RegisterTooLarge { n: usize, cap: usize },

    #[error("partition count for n={n}, k={k} overflows 64 bits")]
    CountOverflow { n: usize, k: usize },

    #[error("unknown measure `{0}`")]
    UnknownMeasure(String),

    #[error("ensemble size {members} is below the operator rank {rank}")]
    EnsembleTooSmall { members: usize, rank: usize },

    #[error("state file field `{field}`: {message}")]
    StateFile { field: String, message: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn field(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::StateFile {
            field: field.into(),
            message: message.into(),
        }
    }
}
