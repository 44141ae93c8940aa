use std::time::{Duration, Instant};

use clap::ValueEnum;
use mmr_stp::benders::{benders_solve, BendersOptions, MasterBackend};
use mmr_stp::heuristics::{algorithm_mean, algorithm_mean_upper, algorithm_upper};
use mmr_stp::regret::minmax_regret_bruteforce;
use mmr_stp::stp::StpOracle;
use mmr_stp::{Instance, RegretReport, SolveError, SteinerTree};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Am,
    Au,
    Amu,
    Benders,
    Brute,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Am => "am",
            Method::Au => "au",
            Method::Amu => "amu",
            Method::Benders => "benders",
            Method::Brute => "brute",
        }
    }

    pub fn is_heuristic(self) -> bool {
        matches!(self, Method::Am | Method::Au | Method::Amu)
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub oracle: StpOracle,
    pub backend: MasterBackend,
    pub time_limit: Duration,
    pub max_iterations: usize,
}

/// Result of running one method on one instance.
#[derive(Debug, Clone)]
pub struct Run {
    pub tree: SteinerTree,
    pub report: RegretReport,
    pub lower_bound: Option<i64>,
    pub gap_pct: Option<f64>,
    pub iterations: Option<usize>,
    pub optimal: bool,
    pub seconds: f64,
}

pub fn run(inst: &Instance, method: Method, cfg: &RunConfig) -> Result<Run, SolveError> {
    let start = Instant::now();
    let heuristic = |(tree, report): (SteinerTree, RegretReport)| Run {
        tree,
        report,
        lower_bound: None,
        gap_pct: None,
        iterations: None,
        optimal: false,
        seconds: 0.0,
    };
    let mut run = match method {
        Method::Am => heuristic(algorithm_mean(inst, &cfg.oracle)?),
        Method::Au => heuristic(algorithm_upper(inst, &cfg.oracle)?),
        Method::Amu => heuristic(algorithm_mean_upper(inst, &cfg.oracle)?),
        Method::Brute => {
            let (tree, report) = minmax_regret_bruteforce(inst)?;
            let z = report.robust_cost as i64;
            Run {
                tree,
                report,
                lower_bound: Some(z),
                gap_pct: Some(0.0),
                iterations: None,
                optimal: true,
                seconds: 0.0,
            }
        }
        Method::Benders => {
            let opts = BendersOptions {
                backend: cfg.backend.clone(),
                max_iterations: cfg.max_iterations,
                time_limit: cfg.time_limit,
            };
            let res = benders_solve(inst, &opts, &cfg.oracle)?;
            let state = &res.state;
            Run {
                lower_bound: (state.iteration > 0).then_some(state.lower_bound),
                gap_pct: Some(state.gap_pct()),
                iterations: Some(state.iteration),
                optimal: state.optimal && cfg.oracle_is_exact(),
                tree: res.tree,
                report: res.report,
                seconds: 0.0,
            }
        }
    };
    run.seconds = start.elapsed().as_secs_f64();
    Ok(run)
}

impl RunConfig {
    fn oracle_is_exact(&self) -> bool {
        !matches!(self.oracle, StpOracle::ShortestPath)
    }
}

/// `100 (Z − reference) / reference`; zero when both are zero, undefined
/// when only the reference is.
pub fn deviation_pct(z: u64, reference: u64) -> Option<f64> {
    match (z, reference) {
        (0, 0) => Some(0.0),
        (_, 0) => None,
        _ => Some(100.0 * (z as f64 - reference as f64) / reference as f64),
    }
}

/// `a-b` pairs joined by commas.
pub fn format_tree(inst: &Instance, tree: &SteinerTree) -> String {
    tree.endpoints(inst)
        .iter()
        .map(|(a, b)| format!("{a}-{b}"))
        .collect::<Vec<_>>()
        .join(",")
}

pub fn parse_tree(inst: &Instance, text: &str) -> Result<SteinerTree, String> {
    let mut edges = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (a, b) = part
            .split_once('-')
            .ok_or_else(|| format!("edge `{part}` is not of the form a-b"))?;
        let parse = |s: &str| s.trim().parse::<usize>().map_err(|_| format!("bad node id in `{part}`"));
        let (a, b) = (parse(a)?, parse(b)?);
        edges.push(inst.find_edge(a, b).ok_or_else(|| format!("no edge {a}-{b} in the instance"))?);
    }
    Ok(SteinerTree::new(edges))
}
