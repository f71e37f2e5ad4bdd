use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("radicand has a prime factor above the trial-division bound")]
    RadicandTooLarge,
    #[error("cannot add quadratic scalars with radicands {0} and {1}")]
    RadicandMismatch(String, String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not strongly invertible (determinant {0} is not a monomial)")]
    NotStronglyInvertible(String),
    #[error("exact division failed for {what}: remainder {remainder}")]
    NotDivisible { what: String, remainder: String },
    #[error("constant term is zero; jet is not invertible")]
    ZeroConstantTerm,
    #[error("spectral condition violated: {0}")]
    SpectralConditionViolated(String),
    #[error("polynomials are not coprime")]
    NotCoprime,
    #[error("vector vanishes at the origin")]
    ZeroAtOrigin,
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("structure check failed: {0}")]
    StructureCheckFailed(String),
    #[error("moment condition failed: {0}")]
    MomentConditionFailed(String),
    #[error("matrix is not Hermitian")]
    NotHermitian,
    #[error("filter is not balanced: {0}")]
    NotBalanced(String),
    #[error("operation needs roots of unity outside Q(i) for dilation {0}")]
    IrrationalShift(usize),
    #[error("multiplicity r = 1 is not supported; need r >= 2")]
    MultiplicityOne,
    #[error("Theta is not strongly invertible; exact deconvolution unavailable")]
    DeconvolutionUnavailable,
    #[error("Theta is not singular at the requested point")]
    NotSingularAtPoint,
    #[error("unknown fixture {0:?}")]
    UnknownFixture(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
