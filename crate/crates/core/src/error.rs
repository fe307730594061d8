use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("a = {a} is outside the supported family: {reason}")]
    NotInFamily { a: i64, reason: String },
    #[error("unsupported integral basis for a = {a} (module index {delta})")]
    UnsupportedBasis { a: i64, delta: i64 },
    #[error("element is not an algebraic integer")]
    NotIntegral,
    #[error("element is not totally positive")]
    NotTotallyPositive,
    #[error("region lookup failed for s = {s}, v = {v}, r = {r}")]
    NoRegion { s: i64, v: i64, r: i64 },
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
