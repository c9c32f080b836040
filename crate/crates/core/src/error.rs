use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("label mismatch: {0}")]
    LabelMismatch(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("degree bound exceeded: {0}")]
    DegreeBoundExceeded(String),
    #[error("singular table: {0}")]
    SingularTable(String),
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("not stabilized: {0}")]
    NotStabilized(String),
    #[error("filtration leak: {0}")]
    FiltrationLeak(String),
    #[error("variant mismatch: {0}")]
    VariantMismatch(String),
    #[error("invalid basis key: {0}")]
    InvalidBasisKey(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
