//! Crate-wide error type.

use crate::point::{Point, PointShape};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Two points (or a point and a metric) have incompatible shapes.
    #[error("shape mismatch: {0} vs {1}")]
    ShapeMismatch(PointShape, PointShape),

    /// A value fell outside the domain an operation requires.
    #[error("domain error: {0}")]
    Domain(String),

    /// An argument violated a precondition.
    #[error("input error: {0}")]
    Input(String),

    /// A structure descriptor or config is missing something it needs.
    #[error("configuration error: {0}")]
    Config(String),

    /// An operation failed while being evaluated on a sample tuple.
    /// Carries the offending inputs so the failure is reproducible.
    #[error("evaluation failed on {witness:?}: {reason}")]
    Eval { witness: Vec<Point>, reason: String },

    /// Division by (approximate) zero or a vanishing denominator.
    #[error("singularity: {0}")]
    Singularity(String),

    /// A solver's contraction / conditioning precondition does not hold.
    #[error("conditioning error: {0}")]
    Conditioning(String),

    /// An iterative solver ran out of iterations.
    #[error("no convergence after {iters} iterations (residual {residual:.3e})")]
    Convergence { iters: usize, residual: f64 },

    /// A sampled estimate could not be formed (e.g. every pair degenerate).
    #[error("estimation error: {0}")]
    Estimation(String),

    /// An operation left the declared carrier.
    #[error("closure error: {0}")]
    Closure(String),

    /// A structure claimed to be classical has nonzero axiom defects.
    #[error("not classical: {0}")]
    NotClassical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
