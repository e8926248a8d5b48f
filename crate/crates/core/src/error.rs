use thiserror::Error;

/// Errors raised by the algebra layers and the command-line front end.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operands live over different coefficient rings")]
    MixedRings,
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("element is not a unit: {0}")]
    NotAUnit(String),
    #[error("matrix is not invertible: {0}")]
    NotInvertible(String),
    #[error("unit test undecidable within the known window: {0}")]
    Undecidable(String),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("coefficient ring not supported for this operation: {0}")]
    UnsupportedRing(String),
    #[error("transition not supported by the two-chart solver: {0}")]
    UnsupportedTransition(String),
    #[error("dimension did not stabilise below the cap: {0}")]
    CapExceeded(String),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("invalid input: {0}")]
    Schema(String),
}

impl Error {
    /// Machine-readable code used in CLI error documents.
    pub fn code(&self) -> &'static str {
        match self {
            Error::MixedRings => "mixed_rings",
            Error::InvalidRing(_) => "invalid_ring",
            Error::NotAUnit(_) => "not_a_unit",
            Error::NotInvertible(_) => "not_invertible",
            Error::Undecidable(_) => "undecidable",
            Error::PrecisionExhausted(_) => "precision_exhausted",
            Error::UnsupportedRing(_) => "unsupported_ring",
            Error::UnsupportedTransition(_) => "unsupported_transition",
            Error::CapExceeded(_) => "cap_exceeded",
            Error::SingularMatrix => "singular_matrix",
            Error::Schema(_) => "schema",
        }
    }

    /// Process exit code for the CLI.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NotAUnit(_) | Error::NotInvertible(_) | Error::SingularMatrix => 2,
            Error::PrecisionExhausted(_) | Error::Undecidable(_) | Error::CapExceeded(_) => 3,
            Error::MixedRings
            | Error::InvalidRing(_)
            | Error::UnsupportedRing(_)
            | Error::UnsupportedTransition(_)
            | Error::Schema(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
