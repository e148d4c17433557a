use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("row lengths must be weakly decreasing (row {index} is longer than the row above it)")]
    NonMonotoneRows { index: usize },

    #[error("row {index} has non-positive length")]
    NonPositiveRow { index: usize },

    #[error("operation is undefined for the empty diagram")]
    EmptyDiagram,

    #[error("profile window [{lo}, {hi}] does not cover the non-constant part of the profile")]
    WindowTooNarrow { lo: i64, hi: i64 },

    #[error("n = {n} exceeds the enumeration limit {max}")]
    NTooLarge { n: usize, max: usize },

    #[error("tolerance {tol:e} unreachable for {what}")]
    ToleranceUnreachable { what: &'static str, tol: f64 },

    #[error("diagonal of the Bessel kernel requested through the off-diagonal formula; use the diagonal evaluator")]
    DiagonalRequested,

    #[error("determinant {value} lies outside [0, 1]: kernel is not a valid correlation kernel here")]
    NotAProbability { value: f64 },

    #[error("order {order} is within the edge margin of 2*theta = {edge}")]
    TooCloseToEdge { order: i64, edge: f64 },

    #[error("position {x} lies outside the admissible bulk |x| <= {limit}")]
    OutsideBulk { x: i64, limit: f64 },

    #[error("{what}: certified error {achieved:e} exceeds requested {requested:e}")]
    BudgetNotMet {
        what: &'static str,
        achieved: f64,
        requested: f64,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid pattern: {0}")]
    InvalidPattern(String),

    #[error("malformed record: {0}")]
    Record(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
