//! Seeded random connected instances, for tests and benchmark suites.

use crate::graph::{Edge, Instance, NodeId};
use crate::instgen::Stream;

#[derive(Debug, Clone, Copy)]
pub struct SynthParams {
    pub nodes: usize,
    pub edges: usize,
    pub terminals: usize,
    pub max_cost: u64,
    /// Force `l = u` on every edge.
    pub degenerate: bool,
}

/// A connected instance with exactly `min(edges, n(n−1)/2)` edges (at least
/// `n − 1`) and `terminals` distinct terminals. Intervals are drawn as
/// `l ~ U{0..max}`, `u ~ U{l..max}`.
pub fn random_instance(seed: u64, p: &SynthParams) -> Instance {
    assert!(p.nodes >= 1 && p.terminals >= 1 && p.terminals <= p.nodes);
    let n = p.nodes;
    let mut rng = Stream::new(seed);
    let cost = |rng: &mut Stream| {
        let lower = rng.uniform(0, p.max_cost);
        let upper = if p.degenerate { lower } else { rng.uniform(lower, p.max_cost) };
        (lower, upper)
    };

    let mut label: Vec<NodeId> = (1..=n).collect();
    shuffle(&mut rng, &mut label);
    let mut present = std::collections::HashSet::new();
    let mut edges = Vec::new();
    for i in 1..n {
        let j = rng.uniform(0, i as u64 - 1) as usize;
        let (a, b) = (label[i], label[j]);
        present.insert((a.min(b), a.max(b)));
        let (l, u) = cost(&mut rng);
        edges.push(Edge::new(a, b, l, u));
    }
    let target = p.edges.max(n - 1).min(n * (n - 1) / 2);
    while edges.len() < target {
        let a = rng.uniform(1, n as u64) as usize;
        let b = rng.uniform(1, n as u64) as usize;
        if a == b || !present.insert((a.min(b), a.max(b))) {
            continue;
        }
        let (l, u) = cost(&mut rng);
        edges.push(Edge::new(a, b, l, u));
    }
    let mut nodes: Vec<NodeId> = (1..=n).collect();
    shuffle(&mut rng, &mut nodes);
    Instance::new(n, edges, nodes[..p.terminals].iter().copied()).expect("construction is connected")
}

fn shuffle<T>(rng: &mut Stream, items: &mut [T]) {
    for i in (1..items.len()).rev() {
        let j = rng.uniform(0, i as u64) as usize;
        items.swap(i, j);
    }
}
