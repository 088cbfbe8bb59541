use alloc::string::String;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("division by zero in {0}")]
    DivisionByZero(&'static str),
    #[error("undefined: {0}")]
    Undefined(&'static str),
    #[error("pole: {0}")]
    Pole(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("zero divisor in the recursion at sigma {sigma:?}, degree {degree:?}")]
    ZeroDivisor {
        sigma: alloc::vec::Vec<usize>,
        degree: alloc::vec::Vec<u32>,
    },
    #[error("truncation exhausted: degree {required} needed, series known to {available}")]
    Truncation { required: i64, available: i64 },
    #[error("term limit exceeded: {size} terms > {limit}")]
    TermLimit { size: usize, limit: usize },
    #[error("higher-order pole: {0}")]
    HigherOrderPole(String),
}

pub type Result<T> = core::result::Result<T, Error>;
