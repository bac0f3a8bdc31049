//! Error type shared across the crate.

use thiserror::Error;

/// Failure modes of the simulation pipeline.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// An input failed a domain precondition.
    #[error("domain error: {0}")]
    Domain(String),

    /// The classical steady-state equations are singular at these parameters.
    #[error("singular steady state: {0}")]
    SingularSteadyState(String),

    /// An operation requiring a strictly stable drift matrix received one
    /// whose spectrum touches or crosses the imaginary axis.
    #[error(
        "drift matrix not strictly stable: max Re eigenvalue {max_re:.6e} rad/s \
         against margin {margin:.6e} rad/s"
    )]
    NotStable { max_re: f64, margin: f64 },

    /// A dense linear-algebra routine failed or produced an inconsistent
    /// result.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// Invalid run configuration: bad key, malformed value, or an
    /// out-of-range solver control.
    #[error("configuration error: {0}")]
    Config(String),

    /// An iterative solve ran out of iterations.
    #[error("no convergence after {iterations} iterations (residual {residual:.6e})")]
    NoConvergence { iterations: usize, residual: f64 },
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
