//! Acceptance gate. Prints one line per criterion and exits nonzero if any
//! criterion fails. Skipped criteria do not fail the run.

use std::env;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use mmr_stp::benders::{benders_solve, master_solve, BendersOptions, BendersResult, ExternalSolver, MasterBackend, MILP_CMD_ENV};
use mmr_stp::heuristics::{algorithm_mean, algorithm_mean_upper, algorithm_mean_upper_pair, algorithm_upper};
use mmr_stp::instgen::{generate, Beta, GeneratorConfig, Recipe, Stream};
use mmr_stp::regret::minmax_regret_bruteforce;
use mmr_stp::steinlib::parse_steinlib;
use mmr_stp::stp::{steiner_trees_by_growth, SteinerSolver, StpOracle};
use mmr_stp::synth::{random_instance, SynthParams};
use mmr_stp::{fixtures, robust_cost, tree_cost, validate_tree, Instance, Scenario, SteinerTree};

const BUDGET: Duration = Duration::from_secs(120);
const STEINLIB_ENV: &str = "MMR_STP_STEINLIB_DIR";

type Check<'a> = Box<dyn Fn() -> Outcome + 'a>;

enum Outcome {
    Pass(String),
    Fail(String),
    Skip(String),
}

/// Instances for criteria 1, 3, 4, 6 and 10: `|V| <= 8`, `|E| <= 12`,
/// `|Q| <= 4`, costs in `0..=20`.
fn suite(count: u64) -> Vec<Instance> {
    (0..count)
        .map(|seed| {
            let mut s = Stream::new(1_000_000 + seed);
            let nodes = s.uniform(3, 8) as usize;
            let max_edges = 12.min(nodes * (nodes - 1) / 2) as u64;
            let edges = s.uniform(nodes as u64 - 1, max_edges) as usize;
            let terminals = s.uniform(2, 4.min(nodes as u64)) as usize;
            random_instance(
                seed,
                &SynthParams {
                    nodes,
                    edges,
                    terminals,
                    max_cost: 20,
                    degenerate: false,
                },
            )
        })
        .collect()
}

fn oracle() -> StpOracle {
    StpOracle::default()
}

struct Solved {
    inst: Instance,
    benders: BendersResult,
    optimum: u64,
}

fn solve_suite(insts: &[Instance]) -> Vec<Solved> {
    insts
        .iter()
        .map(|inst| Solved {
            inst: inst.clone(),
            benders: benders_solve(inst, &BendersOptions::default(), &oracle()).expect("benders"),
            optimum: minmax_regret_bruteforce(inst).expect("brute force").1.robust_cost,
        })
        .collect()
}

fn exactness(solved: &[Solved], elapsed: Duration) -> Outcome {
    let mut bad = Vec::new();
    for (i, s) in solved.iter().enumerate() {
        let recheck = robust_cost(&s.inst, &s.benders.tree, &oracle()).unwrap().robust_cost;
        if !s.benders.state.optimal || s.benders.report.robust_cost != s.optimum || recheck != s.optimum {
            bad.push(i);
        }
    }
    if !bad.is_empty() {
        return Outcome::Fail(format!("{} mismatches, first at instance {}", bad.len(), bad[0]));
    }
    if elapsed >= BUDGET {
        return Outcome::Fail(format!("took {:.1}s", elapsed.as_secs_f64()));
    }
    Outcome::Pass(format!("{} instances, {:.2}s", solved.len(), elapsed.as_secs_f64()))
}

/// Maximum regret of `tree` over every extreme scenario, with the optimum
/// of each scenario taken over an explicit list of Steiner trees.
fn extreme_scenario_regret(inst: &Instance, tree: &SteinerTree, trees: &[u64]) -> u64 {
    let m = inst.edge_count();
    let lower: Vec<u64> = inst.edges().iter().map(|e| e.lower).collect();
    let upper: Vec<u64> = inst.edges().iter().map(|e| e.upper).collect();
    let own_mask = tree.edges().iter().fold(0u64, |a, &e| a | 1 << e);
    let cost = |t: u64, hi: u64| -> u64 {
        (0..m)
            .filter(|&e| t >> e & 1 == 1)
            .map(|e| if hi >> e & 1 == 1 { upper[e] } else { lower[e] })
            .sum()
    };
    (0..1u64 << m)
        .map(|hi| {
            let best = trees.iter().map(|&t| cost(t, hi)).min().unwrap();
            cost(own_mask, hi) - best
        })
        .max()
        .unwrap()
}

fn worst_case_check() -> Outcome {
    let start = Instant::now();
    let mut pairs = 0;
    let mut seed = 0u64;
    while pairs < 120 {
        let mut s = Stream::new(2_000_000 + seed);
        let nodes = s.uniform(3, 7) as usize;
        let edges = s.uniform(nodes as u64 - 1, 12.min(nodes * (nodes - 1) / 2) as u64) as usize;
        let terminals = s.uniform(1, 4.min(nodes as u64)) as usize;
        let inst = random_instance(
            seed,
            &SynthParams {
                nodes,
                edges,
                terminals,
                max_cost: 20,
                degenerate: false,
            },
        );
        seed += 1;
        let trees = steiner_trees_by_growth(&inst).unwrap();
        let masks: Vec<u64> = trees.iter().map(|t| t.edges().iter().fold(0, |a, &e| a | 1 << e)).collect();
        for _ in 0..2 {
            let tree = &trees[s.uniform(0, trees.len() as u64 - 1) as usize];
            let expected = extreme_scenario_regret(&inst, tree, &masks);
            let got = robust_cost(&inst, tree, &oracle()).unwrap().robust_cost;
            if got != expected {
                return Outcome::Fail(format!("seed {}: robust_cost {got}, enumeration {expected}", seed - 1));
            }
            pairs += 1;
        }
    }
    let elapsed = start.elapsed();
    if elapsed >= BUDGET {
        return Outcome::Fail(format!("took {:.1}s", elapsed.as_secs_f64()));
    }
    Outcome::Pass(format!("{pairs} pairs, {:.2}s", elapsed.as_secs_f64()))
}

fn factor_two(solved: &[Solved]) -> Outcome {
    let mut violations = 0;
    for s in solved {
        let am = algorithm_mean(&s.inst, &oracle()).unwrap().1.robust_cost;
        let amu = algorithm_mean_upper(&s.inst, &oracle()).unwrap().1.robust_cost;
        if am > 2 * s.optimum || amu > 2 * s.optimum {
            violations += 1;
        }
    }
    if violations > 0 {
        Outcome::Fail(format!("{violations} violations"))
    } else {
        Outcome::Pass(format!("{} instances, 0 violations", solved.len()))
    }
}

fn dominance(insts: &[Instance]) -> Outcome {
    for (i, inst) in insts.iter().enumerate() {
        let am = algorithm_mean(inst, &oracle()).unwrap().1.robust_cost;
        let au = algorithm_upper(inst, &oracle()).unwrap().1.robust_cost;
        let amu = algorithm_mean_upper(inst, &oracle()).unwrap().1.robust_cost;
        let pair = algorithm_mean_upper_pair(inst, &oracle()).unwrap();
        if amu != am.min(au) || pair.best().1.robust_cost != amu {
            return Outcome::Fail(format!("instance {i}: AM {am} AU {au} AMU {amu}"));
        }
    }
    Outcome::Pass(format!("{} instances", insts.len()))
}

fn stp_equivalence() -> Outcome {
    let mut pairs = 0;
    for seed in 0..100u64 {
        let mut s = Stream::new(3_000_000 + seed);
        let nodes = s.uniform(4, 9) as usize;
        let edges = s.uniform(nodes as u64 - 1, 14.min(nodes * (nodes - 1) / 2) as u64) as usize;
        let terminals = s.uniform(1, 6.min(nodes as u64)) as usize;
        let inst = random_instance(
            seed,
            &SynthParams {
                nodes,
                edges,
                terminals,
                max_cost: 20,
                degenerate: false,
            },
        );
        for _ in 0..3 {
            let at_upper: Vec<bool> = (0..inst.edge_count()).map(|_| s.uniform(0, 1) == 1).collect();
            let scenario = Scenario::extreme(&inst, &at_upper);
            let dw = oracle().solve(&inst, &scenario).unwrap();
            let bf = StpOracle::BruteForce.solve(&inst, &scenario).unwrap();
            if dw.cost != bf.cost || tree_cost(&inst, &dw.tree, &scenario).unwrap() != dw.cost {
                return Outcome::Fail(format!("seed {seed}: DW {} brute force {}", dw.cost, bf.cost));
            }
            pairs += 1;
        }
    }
    Outcome::Pass(format!("{pairs} pairs"))
}

fn trace_invariants(solved: &[Solved]) -> Outcome {
    for (i, s) in solved.iter().enumerate() {
        let trace = &s.benders.state.trace;
        let monotone = trace
            .windows(2)
            .all(|w| w[0].lower_bound <= w[1].lower_bound && w[0].upper_bound >= w[1].upper_bound);
        let closed = trace
            .last()
            .is_some_and(|l| l.lower_bound == l.upper_bound as i64 && l.upper_bound == s.benders.report.robust_cost);
        if !monotone || !closed || !s.benders.state.optimal {
            return Outcome::Fail(format!("instance {i}: monotone {monotone}, closed {closed}"));
        }
    }
    let tiny = benders_solve(&fixtures::tiny1(), &BendersOptions::default(), &oracle()).unwrap();
    if tiny.state.iteration != 2 || tiny.report.robust_cost != 2 || !tiny.state.optimal {
        return Outcome::Fail(format!(
            "TINY1: {} iterations, Z = {}",
            tiny.state.iteration, tiny.report.robust_cost
        ));
    }
    Outcome::Pass(format!("{} runs; TINY1 2 iterations, Z* = 2", solved.len()))
}

fn degenerate_collapse() -> Outcome {
    let mut count = 0;
    for seed in 0..60u64 {
        let mut s = Stream::new(4_000_000 + seed);
        let nodes = s.uniform(2, 8) as usize;
        let edges = s.uniform(nodes as u64 - 1, 12.min(nodes * (nodes - 1) / 2) as u64) as usize;
        let terminals = s.uniform(1, 4.min(nodes as u64)) as usize;
        let inst = random_instance(
            seed,
            &SynthParams {
                nodes,
                edges,
                terminals,
                max_cost: 20,
                degenerate: true,
            },
        );
        let scenario = Scenario::lower(&inst);
        let opt = oracle().solve(&inst, &scenario).unwrap().cost;
        let results = [
            ("am", algorithm_mean(&inst, &oracle()).unwrap()),
            ("au", algorithm_upper(&inst, &oracle()).unwrap()),
            ("amu", algorithm_mean_upper(&inst, &oracle()).unwrap()),
            ("benders", {
                let r = benders_solve(&inst, &BendersOptions::default(), &oracle()).unwrap();
                (r.tree, r.report)
            }),
            ("brute", minmax_regret_bruteforce(&inst).unwrap()),
        ];
        for (method, (tree, report)) in results {
            let cost = tree_cost(&inst, &tree, &scenario).unwrap();
            if report.robust_cost != 0 || cost != opt || validate_tree(&inst, &tree).is_err() {
                return Outcome::Fail(format!("seed {seed} {method}: Z {} cost {cost} optimum {opt}", report.robust_cost));
            }
        }
        count += 1;
    }
    Outcome::Pass(format!("{count} instances x 5 methods"))
}

fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn check_counts(path: &Path, counts: (usize, usize, usize)) -> Result<(), String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let inst = parse_steinlib(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    let got = (inst.node_count(), inst.edge_count(), inst.terminals().len());
    if got != counts {
        return Err(format!("{}: got {got:?}, want {counts:?}", path.display()));
    }
    Ok(())
}

fn parser_fidelity() -> Outcome {
    let wanted = [("wrp3-11", (128, 227, 11)), ("wrp3-15", (138, 257, 15))];
    let goldens = [
        ("golden_128_227_11.stp", (128, 227, 11)),
        ("golden_138_257_15.stp", (138, 257, 15)),
    ];
    for (file, counts) in goldens {
        if let Err(e) = check_counts(&fixture_dir().join(file), counts) {
            return Outcome::Fail(e);
        }
    }
    let dir = env::var_os(STEINLIB_ENV).map(PathBuf::from);
    let found: Vec<(PathBuf, (usize, usize, usize))> = dir
        .iter()
        .flat_map(|d| {
            wanted.iter().filter_map(move |(name, counts)| {
                [".stp", ".STP"]
                    .iter()
                    .map(|ext| d.join(format!("{name}{ext}")))
                    .find(|p| p.is_file())
                    .map(|p| (p, *counts))
            })
        })
        .collect();
    if found.len() < wanted.len() {
        return Outcome::Skip(format!(
            "synthetic goldens pass; WRP3 files not found: download wrp3-11.stp and wrp3-15.stp from the SteinLib WRP3 set and set {STEINLIB_ENV} to their directory"
        ));
    }
    for (path, counts) in found {
        if let Err(e) = check_counts(&path, counts) {
            return Outcome::Fail(e);
        }
    }
    Outcome::Pass("wrp3-11 and wrp3-15 header counts match; synthetic goldens pass".into())
}

fn generator_properties() -> Outcome {
    let base = random_instance(
        9,
        &SynthParams {
            nodes: 60,
            edges: 1200,
            terminals: 5,
            max_cost: 1000,
            degenerate: true,
        },
    );
    let betas = ["0.1", "0.3", "0.5"];
    let mut previous: Option<Instance> = None;
    for b in betas {
        let cfg = GeneratorConfig {
            recipe: Recipe::Be(b.parse::<Beta>().unwrap()),
            seed: 0,
        };
        let inst = generate(&base, &cfg).unwrap();
        if inst != generate(&base, &cfg).unwrap() {
            return Outcome::Fail(format!("BE {b} not deterministic"));
        }
        if let Some(prev) = &previous {
            if prev.edges().iter().zip(inst.edges()).any(|(p, q)| p.width() > q.width()) {
                return Outcome::Fail(format!("BE width decreased at beta {b}"));
            }
        }
        previous = Some(inst);
    }
    let mean_width = |inst: &Instance| inst.edges().iter().map(|e| e.width() as f64).sum::<f64>() / inst.edge_count() as f64;
    let mut summary = Vec::new();
    for recipe in [Recipe::Mo as fn(u64) -> Recipe, Recipe::Kz] {
        let mut last = f64::NEG_INFINITY;
        for m in [750, 1000, 1250] {
            let cfg = GeneratorConfig { recipe: recipe(m), seed: 17 };
            let inst = generate(&base, &cfg).unwrap();
            if inst != generate(&base, &cfg).unwrap() {
                return Outcome::Fail(format!("{} {m} not deterministic", cfg.recipe.code()));
            }
            let w = mean_width(&inst);
            if w < last {
                return Outcome::Fail(format!("{} mean width fell to {w:.1} at M = {m}", cfg.recipe.code()));
            }
            last = w;
            summary.push(format!("{}({m}) {w:.0}", cfg.recipe.code()));
        }
    }
    Outcome::Pass(format!("{} edges; mean widths {}", base.edge_count(), summary.join(", ")))
}

fn backend_cross_check(solved: &[Solved]) -> Outcome {
    let Ok(cmd) = env::var(MILP_CMD_ENV) else {
        return Outcome::Skip(format!("{MILP_CMD_ENV} not set"));
    };
    let external = MasterBackend::ExternalLp(ExternalSolver::new(cmd));
    let enumerate = MasterBackend::default();
    let mut solves = 0;
    for (i, s) in solved.iter().enumerate() {
        let pool = &s.benders.state.cut_pool;
        for k in 1..=pool.len() {
            let cuts = &pool[..k];
            let a = master_solve(&s.inst, cuts, &enumerate, None).unwrap().1;
            let b = match master_solve(&s.inst, cuts, &external, None) {
                Ok((_, z)) => z,
                Err(e) => return Outcome::Fail(format!("instance {i}, {k} cuts: {e}")),
            };
            if a != b {
                return Outcome::Fail(format!("instance {i}, {k} cuts: enumerate {a}, external {b}"));
            }
            solves += 1;
        }
    }
    Outcome::Pass(format!("{solves} master problems agree"))
}

fn main() -> ExitCode {
    let insts = suite(220);
    let start = Instant::now();
    let solved = solve_suite(&insts);
    let suite_time = start.elapsed();

    let checks: [(&str, Check); 10] = [
        ("exactness vs brute force", Box::new(|| exactness(&solved, suite_time))),
        ("worst-case scenario regret", Box::new(worst_case_check)),
        ("factor-2 bound", Box::new(|| factor_two(&solved))),
        ("AMU dominance", Box::new(|| dominance(&insts))),
        ("STP oracle equivalence", Box::new(stp_equivalence)),
        ("Benders trace invariants", Box::new(|| trace_invariants(&solved))),
        ("degenerate collapse", Box::new(degenerate_collapse)),
        ("parser fidelity", Box::new(parser_fidelity)),
        ("generator determinism and monotonicity", Box::new(generator_properties)),
        ("backend cross-check", Box::new(|| backend_cross_check(&solved))),
    ];
    let mut failed = 0;
    for (i, (name, check)) in checks.iter().enumerate() {
        let (tag, detail) = match check() {
            Outcome::Pass(d) => ("PASS", d),
            Outcome::Fail(d) => {
                failed += 1;
                ("FAIL", d)
            }
            Outcome::Skip(d) => ("SKIP", d),
        };
        println!("criterion {:>2} {tag} {name}: {detail}", i + 1);
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
