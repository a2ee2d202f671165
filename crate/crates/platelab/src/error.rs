//! Crate-wide error type.

use thiserror::Error;

/// Errors raised anywhere in the laboratory.
#[derive(Debug, Error)]
pub enum Error {
    /// Interface ordering or domain geometry violated.
    #[error("geometry error: {0}")]
    Geometry(String),

    /// A physical or numerical parameter is out of range.
    #[error("parameter error: {0}")]
    Parameter(String),

    /// The finite-element space has no free degrees of freedom.
    #[error("degenerate space: every degree of freedom is clamped")]
    DegenerateSpace,

    /// Interpolated data does not satisfy the clamped boundary conditions.
    #[error("boundary mismatch: {0}")]
    BoundaryMismatch(String),

    /// A matrix factorization met a pivot below the singularity threshold.
    #[error("singular matrix: {0}")]
    SingularMatrix(String),

    /// A symmetric factorization found a non-positive pivot.
    #[error("matrix not positive definite: pivot {pivot:.3e} at index {index}")]
    NotPositiveDefinite { pivot: f64, index: usize },

    /// An iterative kernel exhausted its iteration budget.
    #[error("no convergence after {iterations} iterations: {context}")]
    NoConvergence { iterations: usize, context: String },

    /// An identity was asked for on an empty or reversed interval.
    #[error("degenerate interval: [{0}, {1}]")]
    DegenerateInterval(f64, f64),

    /// A stated precondition does not hold for the given data.
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    /// A decay-fit window is empty or lies outside the trace.
    #[error("window error: {0}")]
    Window(String),

    /// Log-linear fitting requires strictly positive energies.
    #[error("non-positive energy in fit window at t = {0}")]
    NonpositiveEnergy(f64),

    /// Malformed configuration file.
    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
