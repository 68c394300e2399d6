use thiserror::Error;

use crate::table::CellLoc;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TableError {
    #[error("table has no rows")]
    Empty,
    #[error("cell {0} has a zero row or column span")]
    ZeroSpan(CellLoc),
    #[error("cell {cell} collides with cell {other} at grid position ({row}, {col})")]
    Overlap {
        cell: CellLoc,
        other: CellLoc,
        row: usize,
        col: usize,
    },
}

#[derive(Debug, Error)]
pub enum RecordError {
    #[error("malformed record: {0}")]
    Parse(String),
    #[error("highlighted cell {0} does not exist in the table")]
    Bounds(CellLoc),
    #[error(transparent)]
    Table(#[from] TableError),
}

impl From<serde_json::Error> for RecordError {
    fn from(e: serde_json::Error) -> Self {
        RecordError::Parse(e.to_string())
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricError {
    #[error("{hypotheses} hypotheses but {references} references")]
    LengthMismatch { hypotheses: usize, references: usize },
    #[error("corpus is empty")]
    EmptyCorpus,
    #[error("expected exactly 4 noisy-set scores, got {0}")]
    Arity(usize),
    #[error("highlight set is empty")]
    EmptyHighlights,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LossError {
    #[error("log-probability at position {index} is positive ({value})")]
    PositiveLogProb { index: usize, value: f64 },
    #[error("reward {0} is outside [0, 1]")]
    RewardOutOfRange(f64),
    #[error("loss term {0} is negative")]
    NegativeLoss(f64),
}

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("mixed dataset needs at least 5 records, got {0}")]
    TooSmall(usize),
    #[error("noise amount k must be at least 1")]
    ZeroK,
    #[error("line {line}: {source}")]
    Record {
        line: usize,
        #[source]
        source: RecordError,
    },
    #[error("invalid config line {line}: {reason}")]
    Config { line: usize, reason: String },
    #[error(transparent)]
    Table(#[from] TableError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
