use thiserror::Error;

/// Errors raised by the arithmetic and certification pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero polynomial has no resultant")]
    ZeroPolynomial,

    #[error("degree collapse: leading coefficient vanishes modulo {modulus}")]
    DegreeCollapse { modulus: u64 },

    #[error("modulus must be at least 2, got {0}")]
    BadModulus(u64),

    #[error("{0} is not a perfect square")]
    NotPerfectSquare(String),

    #[error("cannot take the square root of negative {0}")]
    NegativeSquareRoot(String),

    #[error("cannot factor zero")]
    FactorZero,

    #[error("gcd({l}, {d}) > 1: multiplicative order undefined")]
    NotCoprime { l: String, d: u64 },

    #[error("real cyclotomic polynomial needs d >= 3, got {0}")]
    DegenerateRealSubfield(u64),

    #[error("twist parameter t must be odd and >= 3, got {0}")]
    InvalidTwist(i64),

    #[error("surgery coefficient d must be odd, got {0}")]
    EvenSurgery(u64),

    #[error("index n must be odd and positive, got {0}")]
    EvenIndex(u64),

    #[error("empty range: d_min = {d_min} > d_max = {d_max}")]
    EmptyRange { d_min: u64, d_max: u64 },

    #[error("inexact polynomial division")]
    InexactDivision,

    #[error("newton polygon top vertices mismatch for t = {t}, m = {m}: found {found}")]
    NewtonTopMismatch { t: u64, m: u64, found: String },

    #[error("hypotheses violated: {0}")]
    Hypotheses(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
