//! Deterministic Steiner tree solvers.
//!
//! These answer "what is the cheapest Steiner tree under this scenario", the
//! subproblem behind every regret evaluation. [`StpOracle`] selects one of
//! them at runtime; anything implementing [`SteinerSolver`] can be plugged in
//! where an oracle is expected.

mod brute;
mod dreyfus_wagner;
mod enumerate;
mod heuristic;

use serde::Serialize;

pub use brute::{solve_bruteforce, steiner_trees_by_subsets};
pub use dreyfus_wagner::solve_exact_dw;
pub use enumerate::{for_each_subtree, steiner_trees_by_growth, SubtreeVisit};
pub use heuristic::solve_heuristic_sp;

use crate::error::SolveError;
use crate::graph::{Instance, SteinerTree};
use crate::scenario::Scenario;

/// Default cap on `|Q|` for Dreyfus–Wagner.
pub const DEFAULT_TERMINAL_CAP: usize = 16;
/// Cap on `|E|` for subset enumeration.
pub const BRUTEFORCE_EDGE_CAP: usize = 16;

/// A Steiner tree together with its cost in the queried scenario's scale.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StpSolution {
    pub tree: SteinerTree,
    pub cost: u64,
    /// Set only by exact methods.
    pub optimal: bool,
}

pub trait SteinerSolver {
    fn solve(&self, inst: &Instance, scenario: &Scenario) -> Result<StpSolution, SolveError>;

    /// Whether [`SteinerSolver::solve`] always returns an optimum.
    fn is_exact(&self) -> bool;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StpOracle {
    DreyfusWagner { max_terminals: usize },
    BruteForce,
    ShortestPath,
}

impl Default for StpOracle {
    fn default() -> Self {
        StpOracle::DreyfusWagner {
            max_terminals: DEFAULT_TERMINAL_CAP,
        }
    }
}

impl SteinerSolver for StpOracle {
    fn solve(&self, inst: &Instance, scenario: &Scenario) -> Result<StpSolution, SolveError> {
        match *self {
            StpOracle::DreyfusWagner { max_terminals } => solve_exact_dw(inst, scenario, max_terminals),
            StpOracle::BruteForce => solve_bruteforce(inst, scenario),
            StpOracle::ShortestPath => solve_heuristic_sp(inst, scenario),
        }
    }

    fn is_exact(&self) -> bool {
        !matches!(self, StpOracle::ShortestPath)
    }
}

impl<S: SteinerSolver + ?Sized> SteinerSolver for &S {
    fn solve(&self, inst: &Instance, scenario: &Scenario) -> Result<StpSolution, SolveError> {
        (**self).solve(inst, scenario)
    }

    fn is_exact(&self) -> bool {
        (**self).is_exact()
    }
}
