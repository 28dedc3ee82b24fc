use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1, got {0}")]
    BadDegree(u32),
    #[error("capacity exceeded: {what} needs {needed} elements, limit is {limit}")]
    Capacity {
        what: &'static str,
        needed: u128,
        limit: u128,
    },
    #[error("degree {target} is not a multiple of {from}")]
    NotSubfield { from: u32, target: u32 },
    #[error("fields have different characteristic ({0} vs {1})")]
    Characteristic(u64, u64),
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("invalid field element: {0}")]
    BadElement(String),
    #[error("point is not on the curve")]
    NotOnCurve,
    #[error("curve is singular at the point")]
    SingularPoint,
    #[error("curve is singular")]
    SingularCurve,
    #[error("curve degree {0} is too small (need at least 3)")]
    DegreeTooSmall(u32),
    #[error("order is indeterminate: all coefficients vanish up to t^{at_least}")]
    Indeterminate { at_least: usize },
    #[error("internal error: {0}")]
    Internal(String),
    #[error("parity violation: {0} is odd")]
    Parity(i64),
    #[error("negative point count {0}")]
    Negative(i64),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("family condition failed: {0}")]
    Family(String),
    #[error("input format: {0}")]
    Format(String),
}
