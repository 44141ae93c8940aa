//! Edge-cost scenarios drawn from the interval box.
//!
//! Costs are stored as integers together with a divisor (`scale`) so that the
//! midpoint scenario `(l + u) / 2` stays exact: it is stored as `l + u` with
//! scale 2. Every other constructor produces scale 1.

use serde::{Deserialize, Serialize};

use crate::error::SolveError;
use crate::graph::{validate_tree, EdgeId, Instance, SteinerTree};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Scenario {
    costs: Vec<u64>,
    scale: u64,
}

impl Scenario {
    /// `c_e = l_e` for every edge.
    pub fn lower(inst: &Instance) -> Self {
        Scenario {
            costs: inst.edges().iter().map(|e| e.lower).collect(),
            scale: 1,
        }
    }

    /// `c_e = u_e` for every edge.
    pub fn upper(inst: &Instance) -> Self {
        Scenario {
            costs: inst.edges().iter().map(|e| e.upper).collect(),
            scale: 1,
        }
    }

    /// `c_e = (l_e + u_e) / 2`, stored doubled.
    pub fn midpoint(inst: &Instance) -> Self {
        Scenario {
            costs: inst.edges().iter().map(|e| e.lower + e.upper).collect(),
            scale: 2,
        }
    }

    /// The regret-maximising scenario of `tree`: upper cost on its edges,
    /// lower cost everywhere else.
    pub fn worst_case(inst: &Instance, tree: &SteinerTree) -> Result<Self, SolveError> {
        validate_tree(inst, tree)?;
        Ok(Self::worst_case_unchecked(inst, tree))
    }

    /// [`Scenario::worst_case`] without validating `tree`; any edge set is
    /// accepted. Edge ids must be in range.
    pub fn worst_case_unchecked(inst: &Instance, tree: &SteinerTree) -> Self {
        let mut costs: Vec<u64> = inst.edges().iter().map(|e| e.lower).collect();
        for &e in tree.edges() {
            costs[e] = inst.edge(e).upper;
        }
        Scenario { costs, scale: 1 }
    }

    /// Extreme scenario picking the upper cost where `at_upper` is set.
    pub fn extreme(inst: &Instance, at_upper: &[bool]) -> Self {
        assert_eq!(at_upper.len(), inst.edge_count());
        Scenario {
            costs: inst
                .edges()
                .iter()
                .zip(at_upper)
                .map(|(e, &up)| if up { e.upper } else { e.lower })
                .collect(),
            scale: 1,
        }
    }

    /// Arbitrary scale-1 scenario. Returns `None` if a cost leaves its
    /// interval or the length is wrong.
    pub fn from_costs(inst: &Instance, costs: Vec<u64>) -> Option<Self> {
        let s = Scenario { costs, scale: 1 };
        (s.costs.len() == inst.edge_count() && s.within_bounds(inst)).then_some(s)
    }

    pub fn costs(&self) -> &[u64] {
        &self.costs
    }

    pub fn cost(&self, e: EdgeId) -> u64 {
        self.costs[e]
    }

    pub fn scale(&self) -> u64 {
        self.scale
    }

    /// Cost of edge `e` as a real number.
    pub fn true_cost(&self, e: EdgeId) -> f64 {
        self.costs[e] as f64 / self.scale as f64
    }

    /// Cost of edge `e` over the common denominator 2, for comparing
    /// scenarios of different scales.
    pub fn halves(&self, e: EdgeId) -> u64 {
        self.costs[e] * (2 / self.scale)
    }

    pub fn len(&self) -> usize {
        self.costs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.costs.is_empty()
    }

    /// `l_e * scale <= c_e <= u_e * scale` for every edge.
    pub fn within_bounds(&self, inst: &Instance) -> bool {
        self.costs.len() == inst.edge_count()
            && inst
                .edges()
                .iter()
                .zip(&self.costs)
                .all(|(e, &c)| e.lower * self.scale <= c && c <= e.upper * self.scale)
    }

    pub(crate) fn check_dimension(&self, inst: &Instance) -> Result<(), SolveError> {
        if self.costs.len() != inst.edge_count() {
            return Err(SolveError::DimensionMismatch {
                expected: inst.edge_count(),
                found: self.costs.len(),
            });
        }
        Ok(())
    }
}
