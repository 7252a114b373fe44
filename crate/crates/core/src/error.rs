use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimensions must be positive (got {0})")]
    ZeroDimension(&'static str),

    #[error("grid has shape {found_rows}x{found_cols}, expected {rows}x{cols}")]
    Shape {
        rows: usize,
        cols: usize,
        found_rows: usize,
        found_cols: usize,
    },

    #[error("symbol {symbol} at ({row}, {col}) is outside 1..={bound}")]
    SymbolOutOfRange {
        row: usize,
        col: usize,
        symbol: usize,
        bound: usize,
    },

    #[error("symbol {symbol} repeated at {first:?} and {second:?}")]
    RepeatedSymbol {
        symbol: u8,
        first: (usize, usize),
        second: (usize, usize),
    },

    #[error("expected a square rectangle, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("capacity exceeded after {subproblems} subproblems: {what}")]
    Capacity { what: String, subproblems: u64 },

    #[error("independent computations disagree: {0}")]
    Mismatch(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}
