use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("map is not strictly contractive")]
    NotContractive,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("constant polynomial")]
    ConstantPolynomial,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("size guard exceeded: {requested} > {limit}")]
    TooLarge { requested: u128, limit: u128 },
    #[error("curve lies in a hyperplane: coordinate {coordinate} vanishes to order {order}")]
    HyperplaneDegenerate { coordinate: usize, order: usize },
    #[error("insufficient truncation order: exponent {exponent} needs order at least {needed}, have {order}")]
    InsufficientOrder {
        exponent: usize,
        needed: usize,
        order: usize,
    },
    #[error("not in span: {0}")]
    NotInSpan(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }
}
