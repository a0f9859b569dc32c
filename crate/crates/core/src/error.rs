use thiserror::Error;

/// Errors raised by the engine.
///
/// `Input` variants describe malformed models, datasets or requests and map to
/// exit code 2 in the CLI; `Invariant` marks a broken internal guarantee.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },

    #[error("unbounded value: the abstract value is top")]
    Unbounded,

    #[error("unknown function tag `{0}`")]
    UnknownFunction(String),

    #[error("malformed one-hot tier: {0}")]
    MalformedTier(String),

    #[error("top component in one-hot value; concretization is unbounded")]
    TopComponent,

    #[error("invalid kernel: {0}")]
    InvalidKernel(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("multi-class models are not supported ({0} classes)")]
    MultiClass(usize),

    #[error("invalid schema: {0}")]
    InvalidSchema(String),

    #[error("invalid dataset (row {row}): {reason}")]
    InvalidRow { row: usize, reason: String },

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("empty dataset")]
    EmptyDataset,

    #[error("invalid perturbation: {0}")]
    InvalidPerturbation(String),

    #[error("operation requires the RAF domain")]
    RequiresRaf,

    #[error("need at least {needed} values, got {got}")]
    TooFewValues { needed: usize, got: usize },

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for errors caused by bad user input rather than engine bugs.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, Error::Invariant(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
