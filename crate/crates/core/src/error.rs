use alloc::string::String;

/// Errors raised anywhere in the core toolkit.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("too large: {0}")]
    TooLarge(String),
    #[error("element is not a unit")]
    NotAUnit,
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("({0}, {1}) is not an inversion")]
    NotAnInversion(usize, usize),
    #[error("permutation is not a minimal coset representative for the given blocks")]
    NotMinimalRep,
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("numeric residual {residual:e} exceeds tolerance {tolerance:e}")]
    NumericInstability { residual: f64, tolerance: f64 },
    #[error("modular evaluations disagree; value is not a rational integer")]
    NotAnInteger,
    #[error("evaluation hit a pole: {0}")]
    Pole(String),
}

pub type Result<T> = core::result::Result<T, Error>;

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidField(_) => "invalid-field",
            Error::TooLarge(_) => "too-large",
            Error::NotAUnit => "not-a-unit",
            Error::NotInvertible => "not-invertible",
            Error::NotAnInversion(..) => "not-an-inversion",
            Error::NotMinimalRep => "not-minimal-rep",
            Error::InvalidParameters(_) => "invalid-parameters",
            Error::NumericInstability { .. } => "numeric-instability",
            Error::NotAnInteger => "not-an-integer",
            Error::Pole(_) => "pole",
        }
    }

    /// Whether the error comes from evaluation rather than from the input.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::NumericInstability { .. } | Error::NotAnInteger | Error::Pole(_)
        )
    }
}
