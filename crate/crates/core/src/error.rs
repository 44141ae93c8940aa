use thiserror::Error;

use crate::graph::TreeDefect;

/// Failures of the solvers and evaluators.
#[derive(Debug, Error)]
pub enum SolveError {
    #[error("scenario has {found} costs but the instance has {expected} edges")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid tree: {0}")]
    InvalidTree(#[from] TreeDefect),
    #[error("{terminals} terminals exceed the exact solver cap of {cap}")]
    TerminalCap { terminals: usize, cap: usize },
    #[error("{edges} edges exceed the enumeration cap of {cap}")]
    EdgeCap { edges: usize, cap: usize },
    #[error("master problem has no cuts and is unbounded")]
    Unbounded,
    #[error("time limit reached")]
    Timeout,
    #[error(transparent)]
    Backend(#[from] crate::benders::BackendError),
}
