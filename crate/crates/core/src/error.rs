use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("binomial upper argument must be non-negative, got {0}")]
    NegativeUpper(i64),
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("polynomial arity mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),
    #[error("matrix is singular (det = 0)")]
    SingularMatrix,
    #[error("p = 2 is not supported here")]
    EvenPrime,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid digit context: {0}")]
    InvalidContext(String),
    #[error("coefficient {0} is not in Z[1/2]")]
    NotInZHalf(String),
    #[error("internal invariant violated: {0}")]
    LogicFault(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
