//! Dreyfus–Wagner over terminal subsets, with the Dijkstra-style extension
//! step: for each subset `D` of non-root terminals and node `v`, `best[D][v]`
//! is the cheapest tree connecting `D ∪ {v}`. Runs in
//! `O(3^k n + 2^k m log n)` for `k = |Q| - 1`.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::StpSolution;
use crate::error::SolveError;
use crate::graph::{extract_tree, tree_cost, EdgeId, Instance, NodeId};
use crate::scenario::Scenario;

const INF: u64 = u64::MAX;

#[derive(Debug, Clone, Copy)]
enum Step {
    Unset,
    Leaf,
    Merge(u32),
    Extend { from: usize, edge: EdgeId },
}

/// Exact Steiner tree under `scenario`. Fails when `|Q| > max_terminals`.
pub fn solve_exact_dw(
    inst: &Instance,
    scenario: &Scenario,
    max_terminals: usize,
) -> Result<StpSolution, SolveError> {
    scenario.check_dimension(inst)?;
    let q = inst.terminals().len();
    if q > max_terminals || q > 31 {
        return Err(SolveError::TerminalCap {
            terminals: q,
            cap: max_terminals.min(31),
        });
    }
    let others: Vec<NodeId> = inst
        .terminals()
        .iter()
        .copied()
        .filter(|&t| t != inst.root())
        .collect();
    if others.is_empty() {
        return Ok(StpSolution {
            tree: Default::default(),
            cost: 0,
            optimal: true,
        });
    }

    let n = inst.node_count();
    let k = others.len();
    let full = (1u32 << k) - 1;
    let mut best = vec![vec![INF; n]; full as usize + 1];
    let mut step = vec![vec![Step::Unset; n]; full as usize + 1];

    for mask in 1..=full {
        let m = mask as usize;
        if mask.is_power_of_two() {
            let t = others[mask.trailing_zeros() as usize] - 1;
            best[m][t] = 0;
            step[m][t] = Step::Leaf;
        } else {
            let low = mask & mask.wrapping_neg();
            for v in 0..n {
                // submasks containing the lowest bit, each split counted once
                let rest = mask ^ low;
                let mut s = rest;
                loop {
                    let sub = s | low;
                    if sub != mask {
                        let (a, b) = (best[sub as usize][v], best[(mask ^ sub) as usize][v]);
                        if a != INF && b != INF && a + b < best[m][v] {
                            best[m][v] = a + b;
                            step[m][v] = Step::Merge(sub);
                        }
                    }
                    if s == 0 {
                        break;
                    }
                    s = (s - 1) & rest;
                }
            }
        }
        relax(inst, scenario, &mut best[m], &mut step[m]);
    }

    let mut edges = Vec::new();
    let mut stack = vec![(full, inst.root() - 1)];
    while let Some((mask, v)) = stack.pop() {
        match step[mask as usize][v] {
            Step::Leaf => {}
            Step::Merge(sub) => {
                stack.push((mask ^ sub, v));
                stack.push((sub, v));
            }
            Step::Extend { from, edge } => {
                edges.push(edge);
                stack.push((mask, from));
            }
            Step::Unset => unreachable!("backtrace reached an unset state"),
        }
    }
    let tree = extract_tree(inst, edges).expect("backtrace connects all terminals");
    let cost = tree_cost(inst, &tree, scenario)?;
    debug_assert!(cost <= best[full as usize][inst.root() - 1]);
    Ok(StpSolution {
        tree,
        cost,
        optimal: true,
    })
}

fn relax(inst: &Instance, scenario: &Scenario, dist: &mut [u64], step: &mut [Step]) {
    let mut heap: BinaryHeap<Reverse<(u64, usize)>> = dist
        .iter()
        .enumerate()
        .filter(|&(_, &d)| d != INF)
        .map(|(v, &d)| Reverse((d, v)))
        .collect();
    while let Some(Reverse((d, v))) = heap.pop() {
        if d > dist[v] {
            continue;
        }
        for &(w, edge) in inst.neighbours(v + 1) {
            let nd = d + scenario.cost(edge);
            if nd < dist[w - 1] {
                dist[w - 1] = nd;
                step[w - 1] = Step::Extend { from: v, edge };
                heap.push(Reverse((nd, w - 1)));
            }
        }
    }
}
