use std::path::PathBuf;
use std::time::Instant;

use super::external::{ExternalSolver, BackendError};
use super::lp::{write_lp, LpModel};
use super::Cut;
use crate::error::SolveError;
use crate::graph::{extract_tree, Instance, SteinerTree};
use crate::stp::{for_each_subtree, SubtreeVisit};

/// Largest `|E|` the enumeration backend accepts.
pub const ENUMERATION_EDGE_CAP: usize = 24;

#[derive(Debug, Clone)]
pub enum MasterBackend {
    /// Exhaustive search over Steiner trees with bound pruning.
    Enumerate { max_edges: usize },
    /// LP file handed to an external MILP solver.
    ExternalLp(ExternalSolver),
}

impl Default for MasterBackend {
    fn default() -> Self {
        MasterBackend::Enumerate {
            max_edges: ENUMERATION_EDGE_CAP,
        }
    }
}

/// Master objective of `x`: `Σ_{e ∈ x} u_e − min over cuts of cut value`.
pub fn master_objective(inst: &Instance, cuts: &[Cut], x: &SteinerTree) -> i64 {
    let upper: u64 = x.edges().iter().map(|&e| inst.edge(e).upper).sum();
    let theta = cuts.iter().map(|c| c.value(inst, x)).min().unwrap_or(0);
    upper as i64 - theta as i64
}

/// Solves the master problem restricted to `cuts`, returning a minimising
/// tree and its objective.
pub fn master_solve(
    inst: &Instance,
    cuts: &[Cut],
    backend: &MasterBackend,
    deadline: Option<Instant>,
) -> Result<(SteinerTree, i64), SolveError> {
    if cuts.is_empty() {
        return Err(SolveError::Unbounded);
    }
    match backend {
        MasterBackend::Enumerate { max_edges } => enumerate(inst, cuts, *max_edges, deadline),
        MasterBackend::ExternalLp(solver) => external(inst, cuts, solver),
    }
}

struct CutData {
    mask: u64,
    base: i64,
}

fn enumerate(
    inst: &Instance,
    cuts: &[Cut],
    max_edges: usize,
    deadline: Option<Instant>,
) -> Result<(SteinerTree, i64), SolveError> {
    let m = inst.edge_count();
    if m > max_edges.min(64) {
        return Err(SolveError::EdgeCap {
            edges: m,
            cap: max_edges,
        });
    }
    let upper: Vec<i64> = inst.edges().iter().map(|e| e.upper as i64).collect();
    let width: Vec<i64> = inst.edges().iter().map(|e| e.width() as i64).collect();
    let cut_data: Vec<CutData> = cuts
        .iter()
        .map(|c| CutData {
            mask: c.tree.edges().iter().fold(0, |m, &e| m | 1 << e),
            base: c.tree.edges().iter().map(|&e| inst.edge(e).lower as i64).sum(),
        })
        .collect();
    let objective = |mask: u64| -> i64 {
        let sum_u: i64 = bits(mask).map(|e| upper[e]).sum();
        let theta = cut_data
            .iter()
            .map(|c| c.base + bits(mask & c.mask).map(|e| width[e]).sum::<i64>())
            .min()
            .expect("cuts nonempty");
        sum_u - theta
    };

    // The objective never decreases when an edge is added, so neither a
    // covering tree's supersets nor anything above the incumbent can win.
    let mut best: Option<(i64, u64)> = None;
    let mut visits = 0u64;
    let mut timed_out = false;
    for_each_subtree(inst, |mask, covers| {
        visits += 1;
        if timed_out || (visits.is_multiple_of(4096) && deadline.is_some_and(|d| Instant::now() >= d)) {
            timed_out = true;
            return SubtreeVisit::Skip;
        }
        let obj = objective(mask);
        if best.is_some_and(|(b, _)| obj >= b) {
            return SubtreeVisit::Skip;
        }
        if covers {
            best = Some((obj, mask));
            return SubtreeVisit::Skip;
        }
        SubtreeVisit::Descend
    })?;
    if timed_out {
        return Err(SolveError::Timeout);
    }
    let (obj, mask) = best.expect("a connected instance has a Steiner tree");
    Ok((SteinerTree::from_mask(mask), obj))
}

fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            return None;
        }
        let e = mask.trailing_zeros() as usize;
        mask &= mask - 1;
        Some(e)
    })
}

fn external(inst: &Instance, cuts: &[Cut], solver: &ExternalSolver) -> Result<(SteinerTree, i64), SolveError> {
    let dir = tempfile::tempdir().map_err(BackendError::Io)?;
    let lp_path: PathBuf = dir.path().join("master.lp");
    let sol_path: PathBuf = dir.path().join("master.sol");
    std::fs::write(&lp_path, write_lp(inst, &LpModel::Master { cuts })).map_err(BackendError::Io)?;
    let out = solver.run(&lp_path, &sol_path)?;
    let chosen = out.selected_edges(inst)?;
    let tree = extract_tree(inst, chosen).ok_or(BackendError::NonTree)?;
    let obj = master_objective(inst, cuts, &tree);
    Ok((tree, obj))
}
