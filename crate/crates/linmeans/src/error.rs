//! Error type shared across the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An edge connects an agent to itself.
    #[error("edge ({i}, {j}) is a self-loop")]
    SelfLoop { i: usize, j: usize },

    /// An edge endpoint or agent index lies outside `0..n`.
    #[error("agent index {index} out of range for {n} agents")]
    IndexOutOfRange { index: usize, n: usize },

    /// Vector lengths disagree with the group size.
    #[error("{what} has length {got}, expected {expected}")]
    DimensionMismatch {
        what: &'static str,
        got: usize,
        expected: usize,
    },

    /// An instrument specification cannot identify the requested model.
    #[error("invalid instrument spec: {0}")]
    InvalidSpec(String),

    /// The pooled instrument cross-product is numerically singular.
    #[error(
        "singular instrument cross-product (reciprocal condition {rcond:.2e}); \
         near-collinear columns: {}",
        columns.join(", ")
    )]
    RankFailure { rcond: f64, columns: Vec<String> },

    /// The instrument–regressor cross-product is rank deficient.
    #[error("identification failure: instrument-regressor cross-product has \
             effective rank {rank} < {needed} parameters")]
    IdentificationFailure { rank: usize, needed: usize },

    /// A t-statistic was requested for a coordinate with zero variance.
    #[error("undefined t-statistic for coordinate `{coord}`: variance is not positive")]
    UndefinedStatistic { coord: String },

    /// Two fits passed to a comparison were not produced from the same data.
    #[error("fits were produced from different datasets or models")]
    DatasetMismatch,

    /// A mathematical precondition was violated.
    #[error("{0}")]
    Precondition(String),

    /// A data file failed to parse.
    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: u64,
        message: String,
    },

    /// Run configuration was rejected.
    #[error("config error: {0}")]
    Config(String),

    /// Too many replications failed to fit.
    #[error("{failed} of {total} replications failed to fit (threshold {limit})")]
    TooManyFailures {
        failed: usize,
        total: usize,
        limit: usize,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures of numerical rank or identification, as opposed to
    /// malformed input data.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::RankFailure { .. }
                | Error::IdentificationFailure { .. }
                | Error::UndefinedStatistic { .. }
                | Error::Precondition(_)
                | Error::TooManyFailures { .. }
        )
    }
}
