use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("Legendre truncation failed: trailing coefficient {tail:e} still above threshold at M = {m}")]
    TruncationFailure { m: usize, tail: f64 },

    #[error("root count mismatch: expected {expected} interior zeros of the derivative, found {found}")]
    RootCount { expected: usize, found: usize },

    #[error("matrix is singular to working precision (pivot {pivot} of {size})")]
    Singular { pivot: usize, size: usize },

    #[error("ill-conditioned interpolation matrix: condition estimate {condition:e} at q = {q:.4}")]
    IllConditionedInterpolation { condition: f64, q: f64 },

    #[error("node value of psi_N too small at node {node}: {value:e}")]
    VanishingNodeValue { node: usize, value: f64 },

    #[error("degenerate grid: {0}")]
    DegenerateGrid(String),

    #[error("eigenvalue iteration did not converge: {0}")]
    NoConvergence(String),

    #[error("no root: {0}")]
    NoRoot(String),

    #[error("iterative solver breakdown after {iterations} iterations")]
    Breakdown { iterations: usize },

    #[error("mesh mismatch: {0}")]
    MeshMismatch(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
