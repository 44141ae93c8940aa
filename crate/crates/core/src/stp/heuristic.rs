use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::StpSolution;
use crate::error::SolveError;
use crate::graph::{extract_tree, tree_cost, EdgeId, Instance};
use crate::scenario::Scenario;

/// Shortest-path construction: starting from the root, repeatedly attach the
/// terminal nearest to the current tree along a shortest path, then strip
/// non-terminal leaves. Polynomial, not exact.
pub fn solve_heuristic_sp(inst: &Instance, scenario: &Scenario) -> Result<StpSolution, SolveError> {
    scenario.check_dimension(inst)?;
    let n = inst.node_count();
    let mut in_tree = vec![false; n];
    in_tree[inst.root() - 1] = true;
    let mut edges: Vec<EdgeId> = Vec::new();
    let mut remaining: Vec<usize> = inst
        .terminals()
        .iter()
        .map(|&t| t - 1)
        .filter(|&t| !in_tree[t])
        .collect();

    while !remaining.is_empty() {
        let (dist, pred) = multi_source_dijkstra(inst, scenario, &in_tree);
        let (pos, &target) = remaining
            .iter()
            .enumerate()
            .min_by_key(|&(_, &t)| (dist[t], t))
            .expect("nonempty");
        remaining.swap_remove(pos);
        let mut v = target;
        while !in_tree[v] {
            let (from, edge) = pred[v].expect("connected graph");
            edges.push(edge);
            in_tree[v] = true;
            v = from;
        }
        remaining.retain(|&t| !in_tree[t]);
    }

    let tree = extract_tree(inst, edges).expect("every terminal was attached");
    let cost = tree_cost(inst, &tree, scenario)?;
    Ok(StpSolution {
        tree,
        cost,
        optimal: false,
    })
}

#[allow(clippy::type_complexity)]
fn multi_source_dijkstra(
    inst: &Instance,
    scenario: &Scenario,
    sources: &[bool],
) -> (Vec<u64>, Vec<Option<(usize, EdgeId)>>) {
    let n = inst.node_count();
    let mut dist = vec![u64::MAX; n];
    let mut pred = vec![None; n];
    let mut heap = BinaryHeap::new();
    for v in (0..n).filter(|&v| sources[v]) {
        dist[v] = 0;
        heap.push(Reverse((0u64, v)));
    }
    while let Some(Reverse((d, v))) = heap.pop() {
        if d > dist[v] {
            continue;
        }
        for &(w, edge) in inst.neighbours(v + 1) {
            let nd = d + scenario.cost(edge);
            if nd < dist[w - 1] {
                dist[w - 1] = nd;
                pred[w - 1] = Some((v, edge));
                heap.push(Reverse((nd, w - 1)));
            }
        }
    }
    (dist, pred)
}
