//! Maximum regret (robust cost) of a Steiner tree.
//!
//! For interval data the regret of `x` is maximised by the extreme scenario
//! `S^x` that charges the upper cost on the edges of `x` and the lower cost
//! elsewhere, so `Z(x) = F(x, S^x) - F(z, S^x)` where `z` is optimal in
//! `S^x`. Evaluating `Z` therefore costs one exact Steiner tree solve.

use serde::Serialize;

use crate::error::SolveError;
use crate::graph::{tree_cost, Instance, SteinerTree};
use crate::scenario::Scenario;
use crate::stp::{steiner_trees_by_subsets, SteinerSolver};

/// Cap on `|E|` for [`minmax_regret_bruteforce`].
pub const MINMAX_BRUTEFORCE_EDGE_CAP: usize = 14;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RegretReport {
    /// `F(x, S^x)`, the tree's own cost in its worst case.
    pub tree_cost_worst: u64,
    /// `F(z, S^x)` for the adversary tree `z`.
    pub adversary_cost: u64,
    /// `Z(x) = tree_cost_worst - adversary_cost`.
    pub robust_cost: u64,
    pub worst_scenario: Scenario,
    pub adversary_tree: SteinerTree,
    /// False when the adversary came from a heuristic oracle, in which case
    /// `robust_cost` may under-estimate the true regret.
    pub exact: bool,
}

/// `Z(tree)` using `oracle` for the single Steiner subproblem.
pub fn robust_cost(
    inst: &Instance,
    tree: &SteinerTree,
    oracle: &impl SteinerSolver,
) -> Result<RegretReport, SolveError> {
    let worst = Scenario::worst_case(inst, tree)?;
    let own = tree_cost(inst, tree, &worst)?;
    let adversary = oracle.solve(inst, &worst)?;
    // A heuristic adversary can be costlier than the tree itself.
    let (adversary_tree, adversary_cost) = if adversary.cost > own {
        (tree.clone(), own)
    } else {
        (adversary.tree, adversary.cost)
    };
    Ok(RegretReport {
        tree_cost_worst: own,
        adversary_cost,
        robust_cost: own - adversary_cost,
        worst_scenario: worst,
        adversary_tree,
        exact: oracle.is_exact() && adversary.optimal,
    })
}

/// Exhaustive min-max regret: evaluates every Steiner tree against every
/// other and returns a minimiser of `Z`, the lexicographically smallest on
/// ties. Requires `|E| <= 14`.
pub fn minmax_regret_bruteforce(inst: &Instance) -> Result<(SteinerTree, RegretReport), SolveError> {
    let trees = steiner_trees_by_subsets(inst, MINMAX_BRUTEFORCE_EDGE_CAP)?;
    let mut best: Option<(SteinerTree, RegretReport)> = None;
    for x in &trees {
        let worst = Scenario::worst_case_unchecked(inst, x);
        let costs: Vec<u64> = trees
            .iter()
            .map(|z| z.edges().iter().map(|&e| worst.cost(e)).sum())
            .collect();
        let (zi, &adversary_cost) = costs
            .iter()
            .enumerate()
            .min_by_key(|&(i, &c)| (c, i))
            .expect("nonempty");
        let own = x.edges().iter().map(|&e| worst.cost(e)).sum::<u64>();
        let report = RegretReport {
            tree_cost_worst: own,
            adversary_cost,
            robust_cost: own - adversary_cost,
            worst_scenario: worst,
            adversary_tree: trees[zi].clone(),
            exact: true,
        };
        if best
            .as_ref()
            .is_none_or(|(_, b)| report.robust_cost < b.robust_cost)
        {
            best = Some((x.clone(), report));
        }
    }
    Ok(best.expect("a connected instance has a Steiner tree"))
}

#[cfg(test)]
mod tests {
    use std::cell::Cell;

    use super::*;
    use crate::fixtures::tiny1;
    use crate::graph::Edge;
    use crate::stp::{StpOracle, StpSolution};

    struct Counting<'a> {
        inner: StpOracle,
        calls: &'a Cell<usize>,
    }

    impl SteinerSolver for Counting<'_> {
        fn solve(&self, inst: &Instance, s: &Scenario) -> Result<StpSolution, SolveError> {
            self.calls.set(self.calls.get() + 1);
            self.inner.solve(inst, s)
        }
        fn is_exact(&self) -> bool {
            self.inner.is_exact()
        }
    }

    #[test]
    fn tiny1_regrets() {
        let inst = tiny1();
        let oracle = StpOracle::default();
        let r = robust_cost(&inst, &SteinerTree::new([1, 2]), &oracle).unwrap();
        assert_eq!((r.tree_cost_worst, r.adversary_cost, r.robust_cost), (6, 4, 2));
        assert_eq!(r.adversary_tree, SteinerTree::new([0]));
        assert_eq!(r.worst_scenario.costs(), &[4, 3, 3]);

        let r = robust_cost(&inst, &SteinerTree::new([0]), &oracle).unwrap();
        assert_eq!((r.tree_cost_worst, r.adversary_cost, r.robust_cost), (8, 2, 6));
        assert_eq!(r.adversary_tree, SteinerTree::new([1, 2]));
        assert!(r.exact);
    }

    #[test]
    fn one_exact_solve_per_evaluation() {
        let calls = Cell::new(0);
        let oracle = Counting {
            inner: StpOracle::default(),
            calls: &calls,
        };
        robust_cost(&tiny1(), &SteinerTree::new([1, 2]), &oracle).unwrap();
        assert_eq!(calls.get(), 1);
    }

    #[test]
    fn invalid_tree_is_rejected() {
        let err = robust_cost(&tiny1(), &SteinerTree::new([1]), &StpOracle::default()).unwrap_err();
        assert!(matches!(err, SolveError::InvalidTree(_)));
    }

    #[test]
    fn bruteforce_tiny1() {
        let (x, r) = minmax_regret_bruteforce(&tiny1()).unwrap();
        assert_eq!(x, SteinerTree::new([1, 2]));
        assert_eq!(r.robust_cost, 2);
    }

    #[test]
    fn degenerate_instances_have_zero_regret() {
        let edges = vec![
            Edge::fixed(1, 2, 3),
            Edge::fixed(2, 3, 4),
            Edge::fixed(1, 3, 6),
        ];
        let inst = Instance::new(3, edges, [1, 2, 3]).unwrap();
        let (x, r) = minmax_regret_bruteforce(&inst).unwrap();
        assert_eq!(r.robust_cost, 0);
        assert_eq!(x, SteinerTree::new([0, 1]));
        let opt = StpOracle::default().solve(&inst, &Scenario::upper(&inst)).unwrap();
        let r = robust_cost(&inst, &opt.tree, &StpOracle::default()).unwrap();
        assert_eq!(r.robust_cost, 0);
    }

    #[test]
    fn single_edge_singleton_phi() {
        let inst = Instance::new(2, vec![Edge::new(1, 2, 2, 9)], [1, 2]).unwrap();
        let (x, r) = minmax_regret_bruteforce(&inst).unwrap();
        assert_eq!((x, r.robust_cost), (SteinerTree::new([0]), 0));
    }
}
