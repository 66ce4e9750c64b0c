use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("order {from} does not divide {to}")]
    IncompatibleOrder { from: u64, to: u64 },
    #[error("cap exceeded: {what} needs {needed}, cap is {cap}")]
    CapExceeded { what: String, needed: u128, cap: u128 },
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("degree error: {0}")]
    Degree(String),
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("construction failed: {0}")]
    Construction(String),
    #[error("model inconsistency: {0}")]
    Inconsistent(String),
    #[error("open path: {0}")]
    OpenPath(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
