//! Census errors and their process exit codes.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CensusError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("data conflict for {field_key} in column {column}: {detail}")]
    DataConflict { field_key: String, column: String, detail: String },
    #[error(transparent)]
    Core(#[from] quartic_core::error::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("thread pool: {0}")]
    ThreadPool(#[from] rayon::ThreadPoolBuildError),
}

impl CensusError {
    /// 2 for bad input, 3 for conflicting data, 4 for inconclusive
    /// computations, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        use quartic_core::error::Error as Core;
        match self {
            CensusError::InvalidArgument(_) | CensusError::Parse { .. } => 2,
            CensusError::Core(Core::InvalidArgument(_) | Core::InvalidS(_) | Core::NotAField(_)) => 2,
            CensusError::DataConflict { .. } => 3,
            CensusError::Core(Core::Inconclusive(_) | Core::SearchBudgetExhausted { .. }) => 4,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CensusError>;
