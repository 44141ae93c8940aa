//! Exact min-max regret by constraint generation.
//!
//! The master problem minimises `Σ u_e x_e − θ` over Steiner trees `x`,
//! subject to one cut `θ ≤ Σ_{e ∈ z} (l_e + (u_e − l_e) x_e)` per known
//! adversary tree `z`. Each round solves the master (a lower bound on the
//! optimum regret), evaluates the regret of the master's tree (an upper
//! bound), and adds the adversary of that tree as a new cut. The loop stops
//! when the bounds meet.

mod external;
mod lp;
mod master;

use std::time::{Duration, Instant};

use log::debug;
use serde::Serialize;

pub use external::{external_backend_run, BackendError, ExternalSolver, SolverOutput, MILP_CMD_ENV};
pub use lp::{export_lp, write_lp, LpModel};
pub use master::{master_objective, master_solve, MasterBackend, ENUMERATION_EDGE_CAP};

use crate::error::SolveError;
use crate::graph::{Instance, SteinerTree};
use crate::heuristics::algorithm_mean_upper_pair;
use crate::regret::{robust_cost, RegretReport};
use crate::stp::SteinerSolver;

/// One constraint of the master problem, generated by an adversary tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cut {
    pub tree: SteinerTree,
}

impl Cut {
    pub fn new(tree: SteinerTree) -> Self {
        Cut { tree }
    }

    /// Right-hand side of the cut at candidate `x`:
    /// `Σ_{e ∈ tree} l_e + (u_e − l_e)·[e ∈ x]`.
    pub fn value(&self, inst: &Instance, x: &SteinerTree) -> u64 {
        self.tree
            .edges()
            .iter()
            .map(|&e| {
                let edge = inst.edge(e);
                if x.contains(e) {
                    edge.upper
                } else {
                    edge.lower
                }
            })
            .sum()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct IterationLog {
    pub iteration: usize,
    pub lower_bound: i64,
    pub upper_bound: u64,
    pub cuts: usize,
    pub master_seconds: f64,
    pub subproblem_seconds: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BendersState {
    pub cut_pool: Vec<Cut>,
    pub incumbent: SteinerTree,
    pub incumbent_report: RegretReport,
    /// Best master objective so far; `i64::MIN` before the first round.
    pub lower_bound: i64,
    /// Number of master problems solved.
    pub iteration: usize,
    pub trace: Vec<IterationLog>,
    /// Bounds met before any cap expired.
    pub optimal: bool,
}

impl BendersState {
    pub fn upper_bound(&self) -> u64 {
        self.incumbent_report.robust_cost
    }

    /// `100 (UB − LB) / UB`, with negative lower bounds clamped to zero and
    /// zero when `UB = 0`.
    pub fn gap_pct(&self) -> f64 {
        relative_gap_pct(self.lower_bound, self.upper_bound())
    }
}

pub fn relative_gap_pct(lower_bound: i64, upper_bound: u64) -> f64 {
    if upper_bound == 0 {
        return 0.0;
    }
    let lb = lower_bound.max(0) as f64;
    (100.0 * (upper_bound as f64 - lb) / upper_bound as f64).max(0.0)
}

#[derive(Debug, Clone)]
pub struct BendersOptions {
    pub backend: MasterBackend,
    pub max_iterations: usize,
    pub time_limit: Duration,
}

impl Default for BendersOptions {
    fn default() -> Self {
        BendersOptions {
            backend: MasterBackend::default(),
            max_iterations: 1000,
            time_limit: Duration::from_secs(600),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BendersResult {
    pub tree: SteinerTree,
    pub report: RegretReport,
    pub state: BendersState,
}

/// Runs constraint generation to optimality or until a cap expires.
///
/// The cut pool starts from the Algorithm Mean and Algorithm Upper trees
/// (deduplicated); the better of the two seeds the incumbent. `oracle`
/// solves every regret subproblem and must be exact for the result to be
/// optimal.
pub fn benders_solve(
    inst: &Instance,
    opts: &BendersOptions,
    oracle: &impl SteinerSolver,
) -> Result<BendersResult, SolveError> {
    let start = Instant::now();
    let deadline = start + opts.time_limit;
    let seeds = algorithm_mean_upper_pair(inst, oracle)?;
    let (mut incumbent, mut incumbent_report) = seeds.best().clone();
    let mut cut_pool = vec![Cut::new(seeds.mean.0.clone())];
    if seeds.upper.0 != seeds.mean.0 {
        cut_pool.push(Cut::new(seeds.upper.0.clone()));
    }

    let mut lower_bound = i64::MIN;
    let mut trace = Vec::new();
    let mut optimal = false;
    let mut iteration = 0;
    while iteration < opts.max_iterations && Instant::now() < deadline {
        let t0 = Instant::now();
        let (x, z) = match master_solve(inst, &cut_pool, &opts.backend, Some(deadline)) {
            Ok(found) => found,
            Err(SolveError::Timeout) => break,
            Err(e) => return Err(e),
        };
        let master_seconds = t0.elapsed().as_secs_f64();
        iteration += 1;
        debug_assert!(z >= lower_bound, "master objective decreased");
        lower_bound = lower_bound.max(z);

        let t1 = Instant::now();
        let report = robust_cost(inst, &x, oracle)?;
        let subproblem_seconds = t1.elapsed().as_secs_f64();
        if report.robust_cost < incumbent_report.robust_cost {
            incumbent = x.clone();
            incumbent_report = report.clone();
        }
        let ub = incumbent_report.robust_cost;
        debug!("iteration {iteration}: lb {lower_bound} ub {ub} cuts {}", cut_pool.len());
        trace.push(IterationLog {
            iteration,
            lower_bound,
            upper_bound: ub,
            cuts: cut_pool.len(),
            master_seconds,
            subproblem_seconds,
        });
        if lower_bound >= ub as i64 {
            optimal = true;
            break;
        }
        let cut = Cut::new(report.adversary_tree);
        // A repeated cut would mean z >= Z(x) >= UB, handled above.
        debug_assert!(!cut_pool.contains(&cut));
        cut_pool.push(cut);
    }

    Ok(BendersResult {
        tree: incumbent.clone(),
        report: incumbent_report.clone(),
        state: BendersState {
            cut_pool,
            incumbent,
            incumbent_report,
            lower_bound,
            iteration,
            trace,
            optimal,
        },
    })
}
