use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown problem `{name}`; available: {}", available.join(", "))]
    UnknownProblem { name: String, available: Vec<String> },

    #[error("problem `{name}` does not accept dimension {dim}: {reason}")]
    InvalidDimension {
        name: String,
        dim: usize,
        reason: String,
    },

    #[error("unknown solver `{0}`; available: fast-csdfn, csdfn")]
    UnknownSolver(String),

    #[error("metric is not symmetric positive definite: {0}")]
    NotSpd(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("minimum-norm solve did not converge (kkt residual {residual:e})")]
    QpNotConverged { residual: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("bundle at {dir} is incomplete or corrupt: {}", files.join(", "))]
    Bundle { dir: PathBuf, files: Vec<String> },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Budget(#[from] BudgetExhausted),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

/// Raised by a counted evaluator once its evaluation budget is spent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("function evaluation budget exhausted")]
pub struct BudgetExhausted;
