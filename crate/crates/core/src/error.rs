use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{field} must be positive (got {value})")]
    NonPositiveValue { field: &'static str, value: f64 },

    #[error("{field} must be non-negative (got {value})")]
    NegativeGain { field: &'static str, value: f64 },

    #[error("{field} must be finite (got {value})")]
    NonFinite { field: &'static str, value: f64 },

    #[error("regime condition not met: {0}")]
    ConditionNotMet(String),

    #[error("decoder {decoder} satisfies neither the imbalanced nor the balanced condition")]
    NoApplicableRegime { decoder: u8 },

    #[error("closed form requires a finite state variance")]
    UnboundedState,

    #[error("lattice dimension {dim} is not supported by {family}")]
    UnsupportedDimension { family: &'static str, dim: usize },

    #[error("scale factor must be positive and finite (got {0})")]
    NonPositiveScale(f64),

    #[error("expected a vector of length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("generator matrix is singular")]
    SingularGenerator,

    #[error("grid must be strictly increasing")]
    UnsortedGrid,

    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("lattice relation violated: {0}")]
    LatticeRelationViolated(String),

    #[error("unsupported scheme: {0}")]
    UnsupportedScheme(String),

    #[error("digital mode requires the integer-cubic family (got {0})")]
    UnsupportedFamily(&'static str),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("scenario: {0}")]
    Scenario(String),

    #[error("io: {0}")]
    Io(String),
}

impl Error {
    /// True for errors that mean "the parameters fall outside the regime where
    /// this result applies", as opposed to malformed input.
    pub fn is_condition_not_met(&self) -> bool {
        matches!(
            self,
            Error::ConditionNotMet(_) | Error::NoApplicableRegime { .. } | Error::UnboundedState
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
