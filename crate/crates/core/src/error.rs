use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("empty matrix")]
    Empty,

    #[error("matrix is not Hermitian: max |H - H^dagger| = {residual:e} exceeds {tolerance:e}")]
    NotHermitian { residual: f64, tolerance: f64 },

    #[error("form is not positive definite: smallest eigenvalue {min_eigenvalue:e} (largest {max_eigenvalue:e})")]
    NotPositive {
        min_eigenvalue: f64,
        max_eigenvalue: f64,
    },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("ill-conditioned system: condition number {condition:e} exceeds cap {cap:e}")]
    IllConditioned { condition: f64, cap: f64 },

    #[error(
        "genericity tests disagree: nondegeneracy={by_nondegeneracy}, cyclicity={by_cyclicity}, commutant={by_commutant}"
    )]
    EquivalenceViolation {
        by_nondegeneracy: bool,
        by_cyclicity: bool,
        by_commutant: bool,
    },

    #[error("expected one phase per cluster: {expected} clusters, {found} values")]
    MissingClusterValue { expected: usize, found: usize },

    #[error("complex structures do not commute: max |[J1, J2]| = {residual:e}")]
    NotCompatible { residual: f64 },

    #[error("bad interval: {0}")]
    BadInterval(String),

    #[error("operator is not of the form 1 + x^2 on a box grid")]
    NotBoxOperator,

    #[error("bin [{lo}, {hi}) mixes multiplicities {found:?}")]
    MixedBin { lo: f64, hi: f64, found: Vec<usize> },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Variant name, used as the `kind` of serialized error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotSquare { .. } => "NotSquare",
            Error::Empty => "Empty",
            Error::NotHermitian { .. } => "NotHermitian",
            Error::NotPositive { .. } => "NotPositive",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::IllConditioned { .. } => "IllConditioned",
            Error::EquivalenceViolation { .. } => "EquivalenceViolation",
            Error::MissingClusterValue { .. } => "MissingClusterValue",
            Error::NotCompatible { .. } => "NotCompatible",
            Error::BadInterval(_) => "BadInterval",
            Error::NotBoxOperator => "NotBoxOperator",
            Error::MixedBin { .. } => "MixedBin",
            Error::InvalidArgument(_) => "InvalidArgument",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
