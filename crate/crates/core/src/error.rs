use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the simulation, kernel, learning, or pipeline layers.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller violated an operation's precondition (bad index, empty set, out-of-range value).
    #[error("contract violation: {0}")]
    Contract(String),

    /// Invalid user-provided configuration.
    #[error("configuration error: {0}")]
    Config(String),

    /// The SVR solver exhausted its iteration budget.
    #[error("SVR solver did not converge after {iterations} iterations (KKT residual {residual:.3e}, tol {tol:.1e})")]
    Convergence {
        iterations: usize,
        residual: f64,
        tol: f64,
    },

    /// Cholesky factorization failed: the regularized Gram matrix is not positive definite.
    #[error("KRR system is not positive definite with ridge {ridge:e} and jitter {jitter:e}; increase the jitter")]
    NotPositiveDefinite { ridge: f64, jitter: f64 },

    /// A score is undefined for the given inputs (e.g. R² with zero label variance).
    #[error("undefined score: {0}")]
    UndefinedScore(String),

    /// A pipeline stage needs the output of an earlier stage that is not present.
    #[error("missing input {path}: run the `{stage}` stage first")]
    MissingInput { stage: &'static str, path: PathBuf },

    /// Malformed file contents.
    #[error("parse error in {path}: {message}")]
    Parse { path: PathBuf, message: String },

    /// A pipeline stage failed; wraps the underlying cause.
    #[error("stage `{stage}` failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    /// Tags an error with the pipeline stage it came from. Already-tagged errors are left as is.
    pub fn in_stage(self, stage: &'static str) -> Self {
        match self {
            Error::Stage { .. } => self,
            other => Error::Stage {
                stage,
                source: Box::new(other),
            },
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
