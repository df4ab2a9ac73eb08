use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by the toolkit. Row, column, position and token indices in
/// messages are 1-based.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("alphabet order must be at least 2, got {0}")]
    OrderTooSmall(usize),
    #[error("alphabet order {order} exceeds the supported maximum {max}")]
    OrderTooLarge { order: usize, max: usize },
    #[error("table has {found} rows, expected {expected}")]
    RowCount { found: usize, expected: usize },
    #[error("row {row} has {found} entries, expected {expected}")]
    RowLength {
        row: usize,
        found: usize,
        expected: usize,
    },
    #[error("entry {value} at row {row}, column {column} is outside 1..={order}")]
    EntryOutOfRange {
        row: usize,
        column: usize,
        value: u64,
        order: usize,
    },
    #[error("duplicate in row {row}: symbol {symbol} appears more than once")]
    DuplicateInRow { row: usize, symbol: u64 },
    #[error("duplicate in column {column}: symbol {symbol} appears more than once")]
    DuplicateInColumn { column: usize, symbol: u64 },
    #[error("parastrophe index must be in 1..=6, got {0}")]
    ParastropheOutOfRange(usize),
    #[error("symbol {value} at position {position} is outside 1..={order}")]
    SymbolOutOfRange {
        position: usize,
        value: u64,
        order: usize,
    },
    #[error("leader {value} is outside 1..={order}")]
    LeaderOutOfRange { value: u64, order: usize },
    #[error("alphabet mismatch: expected order {expected}, found {found}")]
    AlphabetMismatch { expected: usize, found: usize },
    #[error("first block length must be at least 2, got {0}")]
    FirstBlockTooShort(usize),
    #[error("a key needs at least one round")]
    NoRounds,
    #[error("input is empty")]
    EmptyInput,
    #[error("transformation chain is empty")]
    EmptyChain,
    #[error("tuple length {m} is outside 1..={max}")]
    TupleLengthOutOfRange { m: usize, max: usize },
    #[error("tuple space {order}^{m} is too large to tabulate")]
    TupleSpaceTooLarge { order: usize, m: usize },
    #[error("distribution has no counted windows")]
    EmptyDistribution,
    #[error("invalid letter distribution: {0}")]
    InvalidDistribution(String),
    #[error("expected class count {classes} must be in 2..={cells}")]
    ClassCountOutOfRange { classes: usize, cells: usize },
    #[error("position {position} is outside 1..={max}")]
    PositionOutOfRange { position: usize, max: usize },
    #[error("exact enumeration needs {needed} evaluations, limit is {limit}")]
    EnumerationTooLarge { needed: u128, limit: u128 },
    #[error("byte codec supports orders 2, 4, 16 and 256, got {0}")]
    UnsupportedByteOrder(usize),
    #[error("length {len} not divisible by {group}")]
    LengthNotDivisible { len: usize, group: usize },
    #[error("token {index} ({token:?}) is not a non-negative integer")]
    InvalidToken { index: usize, token: String },
    #[error("token {index} has value {value}, outside 1..={order}")]
    TokenOutOfRange {
        index: usize,
        value: u64,
        order: usize,
    },
    #[error("key file line {line}: {message}")]
    KeyFileSyntax { line: usize, message: String },
    #[error("key file line {line}: {source}")]
    KeyFileTable {
        line: usize,
        #[source]
        source: Box<Error>,
    },
}
