use thiserror::Error;

/// Errors shared by every module in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),
    #[error("vectors and matrices must be non-empty")]
    Empty,
    #[error("zero divisor in rank-one update")]
    ZeroDivisor,
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not symmetric positive definite")]
    NotPositiveDefinite,
    #[error("parameter choice violates non-degeneracy condition {condition} at equation {equation}")]
    StrategyViolation {
        equation: usize,
        condition: &'static str,
    },
    #[error("rank deficiency detected at row {0}")]
    RankDeficient(usize),
    #[error("parameter matrices are not admissible: inner matrix is singular")]
    Inadmissible,
    #[error("operation requires a report with Solved status")]
    NotSolved,
    #[error("gcd of an all-zero vector is undefined")]
    ZeroGcd,
    #[error("structure constraints for column {0} are inconsistent")]
    InfeasibleStructure(usize),
    #[error("pivot denominator below tolerance for leaving {leaving}, entering {entering}")]
    NumericalPivot { leaving: usize, entering: usize },
    #[error("line search failed after {0} backtracking steps")]
    LineSearchFailed(usize),
    #[error("objective appears unbounded along the search direction")]
    UnboundedObjective,
    #[error("no convergence within the iteration limit")]
    NoConvergence,
    #[error("infeasible starting point: {0}")]
    InfeasibleStart(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
