//! Enumeration of the subtrees that contain the root.
//!
//! The search keeps a current tree `T` and a set of forbidden edges. It takes
//! the lowest-id frontier edge `e` (one endpoint in `T`, not forbidden) and
//! branches on "`e` in" / "`e` out". Every subtree containing the root is
//! produced exactly once. A branch is dropped as soon as some terminal can no
//! longer be reached without forbidden edges, so only subtrees that can still
//! grow into a Steiner tree are visited.

use crate::error::SolveError;
use crate::graph::{Instance, SteinerTree};

/// Returned by the visitor to continue into supersets of the visited tree
/// or to skip them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubtreeVisit {
    Descend,
    Skip,
}

struct Search<'a, F> {
    ends: Vec<(u32, u32)>,
    terminal_mask: u64,
    all_edges: u64,
    visit: &'a mut F,
}

/// Calls `visit(edge_mask, covers_terminals)` once per subtree containing
/// the root (starting with the root alone) from which a Steiner tree is
/// still reachable. Requires `|V| <= 64` and `|E| <= 64`.
pub fn for_each_subtree<F>(inst: &Instance, mut visit: F) -> Result<(), SolveError>
where
    F: FnMut(u64, bool) -> SubtreeVisit,
{
    if inst.edge_count() > 64 || inst.node_count() > 64 {
        return Err(SolveError::EdgeCap {
            edges: inst.edge_count(),
            cap: 64,
        });
    }
    let terminal_mask = inst
        .terminals()
        .iter()
        .fold(0u64, |m, &t| m | 1 << (t - 1));
    let mut search = Search {
        ends: inst
            .edges()
            .iter()
            .map(|e| (e.a as u32 - 1, e.b as u32 - 1))
            .collect(),
        terminal_mask,
        all_edges: if inst.edge_count() == 64 {
            u64::MAX
        } else {
            (1u64 << inst.edge_count()) - 1
        },
        visit: &mut visit,
    };
    search.grow(0, 1 << (inst.root() - 1), 0);
    Ok(())
}

impl<F: FnMut(u64, bool) -> SubtreeVisit> Search<'_, F> {
    fn grow(&mut self, edges: u64, nodes: u64, mut forbidden: u64) {
        let covers = nodes & self.terminal_mask == self.terminal_mask;
        if (self.visit)(edges, covers) == SubtreeVisit::Skip {
            return;
        }
        while let Some((e, new_node)) = self.frontier(edges, nodes, forbidden) {
            self.grow(edges | 1 << e, nodes | 1 << new_node, forbidden);
            forbidden |= 1 << e;
            if !self.terminals_reachable(nodes, forbidden) {
                return;
            }
        }
    }

    fn frontier(&self, edges: u64, nodes: u64, forbidden: u64) -> Option<(u32, u32)> {
        let mut open = self.all_edges & !edges & !forbidden;
        while open != 0 {
            let e = open.trailing_zeros();
            open &= open - 1;
            let (a, b) = self.ends[e as usize];
            match (nodes >> a & 1 == 1, nodes >> b & 1 == 1) {
                (true, false) => return Some((e, b)),
                (false, true) => return Some((e, a)),
                _ => {}
            }
        }
        None
    }

    fn terminals_reachable(&self, nodes: u64, forbidden: u64) -> bool {
        let usable = self.all_edges & !forbidden;
        let mut reached = nodes;
        loop {
            let mut grown = reached;
            let mut open = usable;
            while open != 0 {
                let e = open.trailing_zeros();
                open &= open - 1;
                let (a, b) = self.ends[e as usize];
                if grown >> a & 1 == 1 || grown >> b & 1 == 1 {
                    grown |= 1 << a | 1 << b;
                }
            }
            if grown & self.terminal_mask == self.terminal_mask {
                return true;
            }
            if grown == reached {
                return false;
            }
            reached = grown;
        }
    }
}

/// Every Steiner tree (including those with non-terminal leaves), listed by
/// root-growing enumeration and sorted lexicographically.
pub fn steiner_trees_by_growth(inst: &Instance) -> Result<Vec<SteinerTree>, SolveError> {
    let mut trees = Vec::new();
    for_each_subtree(inst, |mask, covers| {
        if covers {
            trees.push(SteinerTree::from_mask(mask));
        }
        SubtreeVisit::Descend
    })?;
    trees.sort();
    Ok(trees)
}
