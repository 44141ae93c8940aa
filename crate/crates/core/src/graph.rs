//! Interval-cost graphs, Steiner trees and their validation.
//!
//! Node ids are 1-based, exactly as they appear in SteinLib files. Edge ids are
//! 0-based positions in [`Instance::edges`]; every other structure in the
//! crate (scenarios, trees, cuts) is indexed by edge id.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::SolveError;
use crate::scenario::Scenario;

/// Node identifier, 1-based.
pub type NodeId = usize;
/// Index into [`Instance::edges`].
pub type EdgeId = usize;

/// Undirected edge with an interval cost `[lower, upper]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub a: NodeId,
    pub b: NodeId,
    pub lower: u64,
    pub upper: u64,
}

impl Edge {
    pub fn new(a: NodeId, b: NodeId, lower: u64, upper: u64) -> Self {
        Edge { a, b, lower, upper }
    }

    /// Edge with a degenerate interval `[cost, cost]`.
    pub fn fixed(a: NodeId, b: NodeId, cost: u64) -> Self {
        Edge::new(a, b, cost, cost)
    }

    pub fn width(&self) -> u64 {
        self.upper - self.lower
    }

    pub fn other(&self, v: NodeId) -> NodeId {
        if v == self.a {
            self.b
        } else {
            self.a
        }
    }

    fn key(&self) -> (NodeId, NodeId) {
        (self.a.min(self.b), self.a.max(self.b))
    }
}

/// Why an [`Instance`] could not be built.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("instance has no nodes")]
    NoNodes,
    #[error("node {node} is outside 1..={node_count}")]
    DanglingNode { node: NodeId, node_count: usize },
    #[error("self-loop on node {0}")]
    SelfLoop(NodeId),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(NodeId, NodeId),
    #[error("edge {{{a}, {b}}} has lower bound {lower} above upper bound {upper}")]
    InvertedInterval {
        a: NodeId,
        b: NodeId,
        lower: u64,
        upper: u64,
    },
    #[error("terminal set is empty")]
    EmptyTerminals,
    #[error("root {0} is not a terminal")]
    RootNotTerminal(NodeId),
    #[error("graph is disconnected ({reached} of {node_count} nodes reachable from node 1)")]
    Disconnected { reached: usize, node_count: usize },
}

/// A connected undirected graph with interval edge costs, a terminal set and
/// a root terminal.
///
/// Instances are validated on construction and immutable afterwards.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    name: Option<String>,
    node_count: usize,
    edges: Vec<Edge>,
    terminals: Vec<NodeId>,
    root: NodeId,
    // adjacency[v - 1] = (neighbour, edge id), sorted by edge id
    adjacency: Vec<Vec<(NodeId, EdgeId)>>,
}

impl Instance {
    /// Builds an instance rooted at its lowest-id terminal.
    pub fn new(
        node_count: usize,
        edges: Vec<Edge>,
        terminals: impl IntoIterator<Item = NodeId>,
    ) -> Result<Self, InstanceError> {
        let terminals: BTreeSet<NodeId> = terminals.into_iter().collect();
        let root = *terminals.first().ok_or(InstanceError::EmptyTerminals)?;
        Self::with_root(node_count, edges, terminals, root)
    }

    pub fn with_root(
        node_count: usize,
        edges: Vec<Edge>,
        terminals: impl IntoIterator<Item = NodeId>,
        root: NodeId,
    ) -> Result<Self, InstanceError> {
        if node_count == 0 {
            return Err(InstanceError::NoNodes);
        }
        let in_range = |node: NodeId| {
            if node == 0 || node > node_count {
                Err(InstanceError::DanglingNode { node, node_count })
            } else {
                Ok(())
            }
        };
        let mut seen = HashSet::with_capacity(edges.len());
        let mut adjacency = vec![Vec::new(); node_count];
        for (id, e) in edges.iter().enumerate() {
            check_edge(e, node_count)?;
            if !seen.insert(e.key()) {
                return Err(InstanceError::DuplicateEdge(e.key().0, e.key().1));
            }
            adjacency[e.a - 1].push((e.b, id));
            adjacency[e.b - 1].push((e.a, id));
        }
        let terminals: Vec<NodeId> = terminals
            .into_iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        if terminals.is_empty() {
            return Err(InstanceError::EmptyTerminals);
        }
        for &t in &terminals {
            in_range(t)?;
        }
        if terminals.binary_search(&root).is_err() {
            return Err(InstanceError::RootNotTerminal(root));
        }

        let inst = Instance {
            name: None,
            node_count,
            edges,
            terminals,
            root,
            adjacency,
        };
        let reached = inst.reachable_from(1);
        if reached != node_count {
            return Err(InstanceError::Disconnected {
                reached,
                node_count,
            });
        }
        Ok(inst)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    /// Same graph and terminals, different root. Fails if `root` is not a
    /// terminal.
    pub fn rerooted(&self, root: NodeId) -> Result<Self, InstanceError> {
        if self.terminals.binary_search(&root).is_err() {
            return Err(InstanceError::RootNotTerminal(root));
        }
        let mut inst = self.clone();
        inst.root = root;
        Ok(inst)
    }

    /// Same graph, with edge costs replaced. Used by the interval generators.
    pub fn with_intervals(&self, intervals: &[(u64, u64)]) -> Result<Self, InstanceError> {
        assert_eq!(intervals.len(), self.edges.len(), "one interval per edge");
        let mut inst = self.clone();
        for (e, &(lower, upper)) in inst.edges.iter_mut().zip(intervals) {
            e.lower = lower;
            e.upper = upper;
            check_edge(e, inst.node_count)?;
        }
        Ok(inst)
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id]
    }

    /// Terminals in increasing id order.
    pub fn terminals(&self) -> &[NodeId] {
        &self.terminals
    }

    pub fn is_terminal(&self, v: NodeId) -> bool {
        self.terminals.binary_search(&v).is_ok()
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    /// Neighbours of `v` as `(node, edge id)` pairs, by increasing edge id.
    pub fn neighbours(&self, v: NodeId) -> &[(NodeId, EdgeId)] {
        &self.adjacency[v - 1]
    }

    /// Looks up the id of edge `{a, b}`.
    pub fn find_edge(&self, a: NodeId, b: NodeId) -> Option<EdgeId> {
        if a == 0 || a > self.node_count {
            return None;
        }
        self.neighbours(a)
            .iter()
            .find(|&&(w, _)| w == b)
            .map(|&(_, id)| id)
    }

    /// True when every edge has `lower == upper`.
    pub fn is_degenerate(&self) -> bool {
        self.edges.iter().all(|e| e.lower == e.upper)
    }

    fn reachable_from(&self, start: NodeId) -> usize {
        let mut seen = vec![false; self.node_count];
        let mut queue = VecDeque::from([start]);
        seen[start - 1] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &(w, _) in self.neighbours(v) {
                if !seen[w - 1] {
                    seen[w - 1] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count
    }
}

pub(crate) fn check_edge(e: &Edge, node_count: usize) -> Result<(), InstanceError> {
    for node in [e.a, e.b] {
        if node == 0 || node > node_count {
            return Err(InstanceError::DanglingNode { node, node_count });
        }
    }
    if e.a == e.b {
        return Err(InstanceError::SelfLoop(e.a));
    }
    if e.lower > e.upper {
        return Err(InstanceError::InvertedInterval {
            a: e.a,
            b: e.b,
            lower: e.lower,
            upper: e.upper,
        });
    }
    Ok(())
}

/// A set of edge ids, kept sorted and deduplicated.
///
/// Whether the set actually is a Steiner tree of some instance is checked
/// by [`validate_tree`]; the type itself only fixes the representation.
/// The derived ordering is the lexicographic order of the sorted id lists
/// and is the tie-break used throughout the crate.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SteinerTree(Vec<EdgeId>);

impl SteinerTree {
    pub fn new(edges: impl IntoIterator<Item = EdgeId>) -> Self {
        let mut ids: Vec<EdgeId> = edges.into_iter().collect();
        ids.sort_unstable();
        ids.dedup();
        SteinerTree(ids)
    }

    pub fn empty() -> Self {
        SteinerTree(Vec::new())
    }

    /// Tree from the bits of an edge mask (bit `i` = edge `i`).
    pub fn from_mask(mask: u64) -> Self {
        SteinerTree((0..64).filter(|i| mask >> i & 1 == 1).collect())
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, id: EdgeId) -> bool {
        self.0.binary_search(&id).is_ok()
    }

    /// Edge-incidence vector of length `edge_count`.
    pub fn indicator(&self, edge_count: usize) -> Vec<bool> {
        let mut x = vec![false; edge_count];
        for &e in &self.0 {
            x[e] = true;
        }
        x
    }

    /// Edge endpoints, for printing certificates.
    pub fn endpoints(&self, inst: &Instance) -> Vec<(NodeId, NodeId)> {
        self.0
            .iter()
            .map(|&e| (inst.edge(e).a, inst.edge(e).b))
            .collect()
    }
}

impl FromIterator<EdgeId> for SteinerTree {
    fn from_iter<I: IntoIterator<Item = EdgeId>>(iter: I) -> Self {
        SteinerTree::new(iter)
    }
}

/// Reason an edge set is not a Steiner tree.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeDefect {
    #[error("edge id {0} out of range")]
    EdgeOutOfRange(EdgeId),
    #[error("cycle")]
    Cycle,
    #[error("disconnected")]
    Disconnected,
    #[error("terminal {0} uncovered")]
    UncoveredTerminal(NodeId),
}

/// Checks that `tree` is a tree of `inst` touching every terminal.
///
/// The empty set is accepted only when the root is the sole terminal.
/// Non-terminal leaves are allowed.
pub fn validate_tree(inst: &Instance, tree: &SteinerTree) -> Result<(), TreeDefect> {
    if let Some(&bad) = tree.edges().iter().find(|&&e| e >= inst.edge_count()) {
        return Err(TreeDefect::EdgeOutOfRange(bad));
    }
    let mut dsu = DisjointSets::new(inst.node_count());
    let mut touched = vec![false; inst.node_count()];
    for &id in tree.edges() {
        let e = inst.edge(id);
        if !dsu.union(e.a - 1, e.b - 1) {
            return Err(TreeDefect::Cycle);
        }
        touched[e.a - 1] = true;
        touched[e.b - 1] = true;
    }
    // acyclic: components among touched nodes = touched - edges
    let touched_count = touched.iter().filter(|&&t| t).count();
    if !tree.is_empty() && touched_count != tree.len() + 1 {
        return Err(TreeDefect::Disconnected);
    }
    if tree.is_empty() {
        match inst.terminals().iter().find(|&&t| t != inst.root()) {
            Some(&t) => Err(TreeDefect::UncoveredTerminal(t)),
            None => Ok(()),
        }
    } else {
        match inst.terminals().iter().find(|&&t| !touched[t - 1]) {
            Some(&t) => Err(TreeDefect::UncoveredTerminal(t)),
            None => Ok(()),
        }
    }
}

/// `F(x, S)`: cost of `tree` under `scenario`, in the scenario's scale.
pub fn tree_cost(inst: &Instance, tree: &SteinerTree, scenario: &Scenario) -> Result<u64, SolveError> {
    scenario.check_dimension(inst)?;
    Ok(tree.edges().iter().map(|&e| scenario.cost(e)).sum())
}

/// The bi-directed counterpart of an instance: edge `e = {a, b}` becomes
/// arcs `2e = (a, b)` and `2e + 1 = (b, a)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedModel {
    pub arcs: Vec<(NodeId, NodeId)>,
    pub arc_to_edge: Vec<EdgeId>,
}

impl DirectedModel {
    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    /// Both arcs of an edge.
    pub fn arcs_of(&self, edge: EdgeId) -> [usize; 2] {
        [2 * edge, 2 * edge + 1]
    }
}

pub fn bidirect(inst: &Instance) -> DirectedModel {
    let mut arcs = Vec::with_capacity(2 * inst.edge_count());
    let mut arc_to_edge = Vec::with_capacity(2 * inst.edge_count());
    for (id, e) in inst.edges().iter().enumerate() {
        arcs.push((e.a, e.b));
        arcs.push((e.b, e.a));
        arc_to_edge.extend([id, id]);
    }
    DirectedModel { arcs, arc_to_edge }
}

pub(crate) struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    pub(crate) fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when `a` and `b` were already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

impl fmt::Display for SteinerTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

/// Reduces an edge set to a Steiner tree of no larger cost: keeps a spanning
/// tree of the root's component (by increasing edge id) and then strips
/// non-terminal leaves. Returns `None` if some terminal is not connected to
/// the root through `edges`.
pub(crate) fn extract_tree(inst: &Instance, edges: impl IntoIterator<Item = EdgeId>) -> Option<SteinerTree> {
    let mut ids: Vec<EdgeId> = edges.into_iter().collect();
    ids.sort_unstable();
    ids.dedup();
    let mut dsu = DisjointSets::new(inst.node_count());
    let mut forest: Vec<EdgeId> = ids
        .into_iter()
        .filter(|&id| {
            let e = inst.edge(id);
            dsu.union(e.a - 1, e.b - 1)
        })
        .collect();
    let root_set = dsu.find(inst.root() - 1);
    if inst
        .terminals()
        .iter()
        .any(|&t| dsu.find(t - 1) != root_set)
    {
        return None;
    }
    forest.retain(|&id| dsu.find(inst.edge(id).a - 1) == root_set);

    let mut degree = vec![0usize; inst.node_count()];
    for &id in &forest {
        degree[inst.edge(id).a - 1] += 1;
        degree[inst.edge(id).b - 1] += 1;
    }
    let mut alive = vec![true; forest.len()];
    loop {
        let mut changed = false;
        for (i, &id) in forest.iter().enumerate() {
            if !alive[i] {
                continue;
            }
            let e = inst.edge(id);
            let has_leaf = [e.a, e.b]
                .into_iter()
                .any(|v| degree[v - 1] == 1 && !inst.is_terminal(v));
            if has_leaf {
                alive[i] = false;
                degree[e.a - 1] -= 1;
                degree[e.b - 1] -= 1;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    Some(
        forest
            .into_iter()
            .zip(alive)
            .filter_map(|(id, keep)| keep.then_some(id))
            .collect(),
    )
}
