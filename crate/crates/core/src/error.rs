use std::fmt;

use thiserror::Error;

/// Why a digraph is outside the reach of the separation bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NotApplicable {
    /// The Laplacian fails `LLᵀ = LᵀL`.
    NotNormal { balanced: bool },
    /// The digraph is not weakly connected.
    Disconnected,
    /// A single vertex has no nonzero eigenvalue to select.
    NoNonzeroEigenvalue,
}

impl fmt::Display for NotApplicable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NotApplicable::NotNormal { balanced: false } => {
                write!(f, "Laplacian not normal (not eulerian)")
            }
            NotApplicable::NotNormal { balanced: true } => write!(f, "Laplacian not normal"),
            NotApplicable::Disconnected => write!(f, "digraph is not connected"),
            NotApplicable::NoNonzeroEigenvalue => {
                write!(f, "spectrum has no nonzero eigenvalue")
            }
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("a digraph needs at least one vertex")]
    NoVertices,
    #[error("loop at vertex {0}")]
    Loop(usize),
    #[error("vertex {vertex} out of range for a digraph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("expected distinct vertices, got {0} twice")]
    SameVertex(usize),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is not symmetric (asymmetry {0:e})")]
    NotSymmetric(f64),
    #[error("eigensolver did not converge within {0} sweeps")]
    NoConvergence(usize),
    #[error("matrix is not normal (commutator norm {0:e})")]
    NotNormalMatrix(f64),
    #[error("ill-conditioned spectrum: {0}")]
    IllConditioned(String),
    #[error("argument outside the domain: {0}")]
    Domain(String),
    #[error("not applicable: {0}")]
    NotApplicable(NotApplicable),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("order {n} exceeds the supported maximum of {max}")]
    TooLarge { n: usize, max: usize },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("gave up after {0} attempts")]
    RetryLimit(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
