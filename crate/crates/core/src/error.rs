use std::path::PathBuf;

/// Everything that can go wrong while loading, hiding, recovering or evaluating.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("{path}: row {row}, column {col}: cannot parse {cell:?} as a number")]
    NonNumeric {
        path: PathBuf,
        row: usize,
        col: usize,
        cell: String,
    },

    #[error("{path}: row {row} has {found} columns, expected {expected}")]
    Ragged {
        path: PathBuf,
        row: usize,
        found: usize,
        expected: usize,
    },

    #[error("label row {row}: row sum {sum} outside tolerance")]
    LabelSum { row: usize, sum: f64 },

    #[error("label row {row}, column {col}: negative entry {value}")]
    NegativeLabel { row: usize, col: usize, value: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("row {row}: no positive observed label mass")]
    ZeroObservedMass { row: usize },

    #[error("non-finite value encountered at iteration {iteration} in {stage}")]
    NonFinite { iteration: usize, stage: &'static str },

    #[error("singular value decomposition failed: {0}")]
    Svd(String),

    #[error("non-finite training loss at iteration {iteration}")]
    NonFiniteLoss { iteration: usize },

    #[error("{context}: {source}")]
    Trial {
        context: String,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Wraps an error with the experiment coordinates it occurred at.
    pub fn in_trial(self, context: impl Into<String>) -> Self {
        Error::Trial {
            context: context.into(),
            source: Box::new(self),
        }
    }
}
