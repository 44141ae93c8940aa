//! Single-scenario heuristics: solve the deterministic problem in one fixed
//! scenario and report the maximum regret of the resulting tree.
//!
//! With an exact oracle, the midpoint heuristic is a 2-approximation of the
//! min-max regret optimum, and so is the mean-upper combination.

use crate::error::SolveError;
use crate::graph::{Instance, SteinerTree};
use crate::regret::{robust_cost, RegretReport};
use crate::scenario::Scenario;
use crate::stp::SteinerSolver;

fn solve_in(
    inst: &Instance,
    scenario: &Scenario,
    oracle: &impl SteinerSolver,
) -> Result<(SteinerTree, RegretReport), SolveError> {
    let sol = oracle.solve(inst, scenario)?;
    let report = robust_cost(inst, &sol.tree, oracle)?;
    Ok((sol.tree, report))
}

/// Algorithm Mean: optimum of the midpoint scenario.
pub fn algorithm_mean(
    inst: &Instance,
    oracle: &impl SteinerSolver,
) -> Result<(SteinerTree, RegretReport), SolveError> {
    solve_in(inst, &Scenario::midpoint(inst), oracle)
}

/// Algorithm Upper: optimum of the upper scenario.
pub fn algorithm_upper(
    inst: &Instance,
    oracle: &impl SteinerSolver,
) -> Result<(SteinerTree, RegretReport), SolveError> {
    solve_in(inst, &Scenario::upper(inst), oracle)
}

/// Both trees from [`algorithm_mean_upper_pair`], plus the better one.
#[derive(Debug, Clone)]
pub struct MeanUpper {
    pub mean: (SteinerTree, RegretReport),
    pub upper: (SteinerTree, RegretReport),
}

impl MeanUpper {
    /// The smaller-regret pair; the mean tree wins ties.
    pub fn best(&self) -> &(SteinerTree, RegretReport) {
        if self.upper.1.robust_cost < self.mean.1.robust_cost {
            &self.upper
        } else {
            &self.mean
        }
    }
}

/// Runs both heuristics and keeps both results.
pub fn algorithm_mean_upper_pair(
    inst: &Instance,
    oracle: &impl SteinerSolver,
) -> Result<MeanUpper, SolveError> {
    Ok(MeanUpper {
        mean: algorithm_mean(inst, oracle)?,
        upper: algorithm_upper(inst, oracle)?,
    })
}

/// Algorithm Mean-Upper: the better of [`algorithm_mean`] and
/// [`algorithm_upper`].
pub fn algorithm_mean_upper(
    inst: &Instance,
    oracle: &impl SteinerSolver,
) -> Result<(SteinerTree, RegretReport), SolveError> {
    Ok(algorithm_mean_upper_pair(inst, oracle)?.best().clone())
}
