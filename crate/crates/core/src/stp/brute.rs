use super::{StpSolution, BRUTEFORCE_EDGE_CAP};
use crate::error::SolveError;
use crate::graph::{tree_cost, validate_tree, Instance, SteinerTree};
use crate::scenario::Scenario;

/// Every edge subset accepted by [`validate_tree`], in lexicographic order.
/// Fails when `|E| > cap`.
pub fn steiner_trees_by_subsets(inst: &Instance, cap: usize) -> Result<Vec<SteinerTree>, SolveError> {
    let m = inst.edge_count();
    if m > cap || m >= 64 {
        return Err(SolveError::EdgeCap { edges: m, cap });
    }
    let mut trees: Vec<SteinerTree> = (0..1u64 << m)
        .map(SteinerTree::from_mask)
        .filter(|t| validate_tree(inst, t).is_ok())
        .collect();
    trees.sort();
    Ok(trees)
}

/// Cheapest tree among all edge subsets; ties go to the lexicographically
/// smallest edge set.
pub fn solve_bruteforce(inst: &Instance, scenario: &Scenario) -> Result<StpSolution, SolveError> {
    scenario.check_dimension(inst)?;
    let mut best: Option<(u64, SteinerTree)> = None;
    for tree in steiner_trees_by_subsets(inst, BRUTEFORCE_EDGE_CAP)? {
        let cost = tree_cost(inst, &tree, scenario)?;
        if best.as_ref().is_none_or(|(c, _)| cost < *c) {
            best = Some((cost, tree));
        }
    }
    let (cost, tree) = best.expect("a connected instance has a Steiner tree");
    Ok(StpSolution {
        tree,
        cost,
        optimal: true,
    })
}
