use thiserror::Error;

/// Errors surfaced by the exact-arithmetic and numerical layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("expected a unimodular matrix, got determinant {0}")]
    NotUnimodular(String),
    #[error("{0} is a perfect square; the surd (p + sqrt(d))/q would be rational")]
    SquareDiscriminant(String),
    #[error("zero denominator in surd")]
    ZeroSurdDenominator,
    #[error("continued fraction digit stream exhausted at index {0}")]
    DigitsExhausted(usize),
    #[error("operation requires a signed alternating expansion")]
    NotSigned,
    #[error("operation requires an unsigned expansion")]
    NotUnsigned,
    #[error("empty shift word")]
    EmptyWord,
    #[error("point is rational; its expansion terminates")]
    RationalPoint,
    #[error("shift letter digit must be nonzero")]
    ZeroLetter,
    #[error("letter digit {0} does not fit in i64")]
    LetterOverflow(String),
    #[error("weight mismatch: expected {expected}, got {got}")]
    WeightMismatch { expected: usize, got: usize },
    #[error("coset index {0} out of range (table has {1} cosets)")]
    CosetOutOfRange(usize, usize),
    #[error("word is not admissible: {0}")]
    NotAdmissible(String),
    #[error("shift word is not eventually periodic within {0} letters")]
    NotPeriodic(usize),
    #[error("q_n = 1: normalization 1/(2 log q_n) undefined at n = {0}")]
    DegenerateNormalizer(usize),
    #[error("series truncation insufficient: bound {bound:.3e} exceeds tolerance {tol:.3e}")]
    TruncationInsufficient { bound: f64, tol: f64 },
    #[error("evaluation height {height:.3e} too low for level {level} series with {terms} terms")]
    HeightTooLow { height: f64, level: u32, terms: usize },
    #[error("quadrature failed to converge after {0} bisection levels")]
    QuadratureDiverged(usize),
    #[error("cusp path not reducible to standard paths by available witnesses")]
    NonTransportable,
    #[error("numeric overflow in {0}")]
    Overflow(&'static str),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
