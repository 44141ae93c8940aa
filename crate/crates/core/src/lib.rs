//! Min-max regret Steiner trees with interval edge costs.
//!
//! Each edge cost is only known to lie in `[l_e, u_e]`. The robust cost of a
//! Steiner tree is its maximum regret over all cost scenarios, and the goal
//! is a tree minimising it. The crate provides
//!
//! * the data model and a SteinLib reader/writer ([`graph`], [`steinlib`]),
//! * scenario constructions ([`scenario`]),
//! * exact and heuristic deterministic Steiner solvers ([`stp`]),
//! * regret evaluation and an exhaustive reference solver ([`regret`]),
//! * the midpoint / upper / combined heuristics ([`heuristics`]),
//! * an exact constraint-generation solver with an LP export path
//!   ([`benders`]),
//! * interval instance generators ([`instgen`], [`synth`]).
//!
//! ```
//! use mmr_stp::{fixtures, heuristics, stp::StpOracle};
//!
//! let inst = fixtures::tiny1();
//! let (tree, report) = heuristics::algorithm_mean_upper(&inst, &StpOracle::default()).unwrap();
//! assert_eq!(report.robust_cost, 2);
//! assert_eq!(tree.len(), 2);
//! ```

pub mod benders;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod heuristics;
pub mod instgen;
pub mod regret;
pub mod scenario;
pub mod steinlib;
pub mod stp;
pub mod synth;

pub use error::SolveError;
pub use graph::{validate_tree, tree_cost, bidirect, Edge, Instance, SteinerTree};
pub use regret::{robust_cost, RegretReport};
pub use scenario::Scenario;
