use thiserror::Error;

/// Errors produced by the measurement and certification routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("matrix is not square: {0}x{1}")]
    NotSquare(usize, usize),

    #[error("matrix is not Hermitian (asymmetry {0:.3e})")]
    NotHermitian(f64),

    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),

    #[error("columns are not orthonormal (Gram deviation {0:.3e})")]
    NotOrthonormal(f64),

    #[error("not a density matrix: {0}")]
    NotAState(String),

    #[error("invalid POVM: {0}")]
    InvalidPovm(String),

    #[error("identity is not contained in the requested span (residual {0:.3e})")]
    IdentityNotInSpan(f64),

    #[error("degenerate basis: {0}")]
    DegenerateBasis(String),

    #[error("random POVM generation failed after {0} attempts")]
    SingularFrame(usize),

    #[error("observable lies outside the operator span (residual {0:.3e})")]
    OutsideSpan(f64),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("invalid witness input: {0}")]
    InvalidWitness(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("subspace dimension {0} exceeds the brute-force limit of 3")]
    OracleDimension(usize),

    #[error("dimension budget exceeded: {0} > {1}")]
    BudgetExceeded(usize, usize),

    #[error("malformed document: {0}")]
    Format(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
