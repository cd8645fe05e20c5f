use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BowError {
    #[error("margin mismatch: sum(e) = {sum_e} but sum(f) = {sum_f}")]
    MarginMismatch { sum_e: i64, sum_f: i64 },

    #[error("index {index} out of range for {len} D5 branes")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("need at least one D5 and one NS5 brane (n = {n}, m = {m})")]
    EmptyDiagram { n: usize, m: usize },

    #[error("charge vector is not an m-bounded non-decreasing sequence")]
    NotQuiver,

    #[error("d must be non-negative for enumeration, got {0}")]
    NegativeD(i64),

    #[error("classes have different numbers of u-variables ({0} vs {1})")]
    RankMismatch(usize, usize),

    #[error("monomial has unsupported u-exponent {0:?}")]
    UnsupportedWeight(Vec<i64>),

    #[error("zero gamma-weight monomial {0}")]
    ZeroWeight(String),

    #[error("class has a non-positive coefficient {coeff} at {monomial}")]
    NonEffective { monomial: String, coeff: i64 },

    #[error("parameter point is not generic: the form {0} vanishes")]
    NonGeneric(String),

    #[error("operation requires {what}")]
    Precondition { what: String },

    #[error("malformed Maya diagram: {0}")]
    InvalidMaya(String),

    #[error("sigma is defined for k >= 1, got {0}")]
    SigmaDomain(i64),
}

pub type Result<T> = std::result::Result<T, BowError>;

impl BowError {
    pub(crate) fn precondition(what: impl Into<String>) -> Self {
        BowError::Precondition { what: what.into() }
    }
}
