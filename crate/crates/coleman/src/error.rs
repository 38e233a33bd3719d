use thiserror::Error;

/// Errors shared by all numerical modules.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Argument outside the mathematical domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// Evaluation at coincident points where the kernel is singular.
    #[error("coincident points: {0}")]
    Coincident(String),

    /// An adaptive routine ran out of its subdivision or series budget.
    /// Carries the best estimate obtained so far.
    #[error("budget exceeded: {context} (best estimate {estimate:e}, error {error:e})")]
    Budget {
        context: String,
        estimate: f64,
        error: f64,
    },

    /// A limit / excision sequence failed to stabilize.
    #[error("did not converge: {0}")]
    NoConvergence(String),

    /// Malformed input (missing moments, singular kernel matrix, ...).
    #[error("invalid input: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;
