use thiserror::Error;

/// Everything that can go wrong while building or querying a spectrum.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("eigenvalue 0 cannot be stored as a spectral line")]
    ZeroEigenvalue,

    #[error("line at lambda = {lambda} has multiplicity 0")]
    NonPositiveMultiplicity { lambda: f64 },

    #[error("|lambda| = {lambda} exceeds the truncation {truncation}")]
    BeyondTruncation { lambda: f64, truncation: f64 },

    #[error("basis is singular or too ill-conditioned (condition estimate {condition:e})")]
    SingularBasis { condition: f64 },

    #[error("shell enumeration exceeded the cap of {cap} shells")]
    ShellCap { cap: usize },

    #[error("matrix is not in SO(4): {0}")]
    NotSpecialOrthogonal(String),

    #[error("group closure exceeded {cap} elements (infinite group?)")]
    ClosureCap { cap: usize },

    #[error("group element {index} has eigenvalue 1 (det(I - g) = {det:e})")]
    NotFixedPointFree { index: usize, det: f64 },

    #[error("coefficient {index} of {series} is {value}, at distance {residual:e} from an integer")]
    Residual {
        series: &'static str,
        index: usize,
        value: f64,
        residual: f64,
    },

    #[error("coefficient {index} of {series} rounds to the negative integer {value}")]
    NegativeCoefficient {
        series: &'static str,
        index: usize,
        value: i64,
    },

    #[error("counting identity mismatch at lambda = {lambda}: lhs {lhs}, rhs {rhs}")]
    CountingMismatch { lambda: f64, lhs: i64, rhs: i64 },

    #[error("multiplicity does not fit into 64 bits")]
    Overflow,
}

pub type Result<T> = std::result::Result<T, Error>;
