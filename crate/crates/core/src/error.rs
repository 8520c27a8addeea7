use std::path::PathBuf;

use thiserror::Error;

use crate::model::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("grade {0} is outside the six-point scale 1..=6")]
    InvalidGrade(i64),

    #[error("rank must be at least 1")]
    InvalidRank,

    #[error("relevance value {0} is outside [0, 1]")]
    InvalidRelevance(f64),

    #[error("cut-off {cutoff} exceeds list length {len}")]
    CutoffTooLarge { cutoff: usize, len: usize },

    #[error("click-based discount table has no weight for rank {0}")]
    RankOutsideClickTable(usize),

    #[error("invalid click weight table: {0}")]
    InvalidClickTable(String),

    /// NDCG with an all-zero ideal list; the query is dropped from evaluation.
    #[error("ideal DCG is zero")]
    ZeroIdeal,

    /// Average precision normalised by a zero divisor; the query is dropped.
    #[error("average precision divisor is zero")]
    ZeroDivisor,

    #[error("cannot average an empty set of scores")]
    EmptyInput,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("missing judgment: {0}")]
    MissingJudgment(String),

    #[error("unknown query {0:?}")]
    UnknownQuery(String),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("dataset failed validation with {} error(s)", .0.errors().count())]
    Validation(ValidationReport),

    #[error("infeasible synthetic dataset spec: {0}")]
    InfeasibleSpec(String),
}

impl Error {
    /// True for the conditions that drop a query from a metric's evaluation
    /// instead of aborting it.
    pub fn is_exclusion(&self) -> bool {
        matches!(self, Error::ZeroIdeal | Error::ZeroDivisor)
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
