mod bench;
mod methods;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use mmr_stp::benders::{write_lp, Cut, ExternalSolver, LpModel, MasterBackend, ENUMERATION_EDGE_CAP};
use mmr_stp::heuristics::algorithm_mean_upper_pair;
use mmr_stp::instgen::{generate, provenance, GeneratorConfig, Recipe};
use mmr_stp::steinlib::{parse_steinlib, write_interval};
use mmr_stp::stp::{SteinerSolver, StpOracle, DEFAULT_TERMINAL_CAP};
use mmr_stp::{robust_cost, Instance, Scenario, SolveError};
use serde::Serialize;

use crate::bench::{instance_label, record, run_suite, suite_files, write_certificates, write_csv};
use crate::methods::{format_tree, parse_tree, Method, RunConfig};

const EXIT_USAGE: u8 = 2;
const EXIT_PARSE: u8 = 3;
const EXIT_SOLVE: u8 = 4;
const EXIT_LIMIT: u8 = 5;

#[derive(Parser)]
#[command(name = "mmr-stp", version, about = "Min-max regret Steiner trees with interval costs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an interval instance from a deterministic one.
    Gen(GenArgs),
    /// Solve one instance and print a JSON record.
    Solve(SolveArgs),
    /// Print the regret report of a given tree.
    Eval(EvalArgs),
    /// Run methods over every .stp file in a directory and write CSV.
    Bench(BenchArgs),
    /// Write a deterministic or master model in LP format.
    ExportLp(ExportArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum GenMethod {
    Be,
    Mo,
    Kz,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    method: GenMethod,
    /// β for BE (decimal or fraction), M for MO and KZ.
    #[arg(long)]
    param: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Deterministic base instance.
    #[arg(long)]
    base: PathBuf,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleArg {
    Dw,
    Brute,
    Sp,
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Enumerate,
    ExternalLp,
}

#[derive(Args)]
struct SolverArgs {
    /// Deterministic Steiner oracle used for regret subproblems.
    #[arg(long, value_enum, default_value = "dw")]
    oracle: OracleArg,
    #[arg(long, default_value_t = DEFAULT_TERMINAL_CAP)]
    max_terminals: usize,
    /// Master problem backend for benders.
    #[arg(long, value_enum, default_value = "enumerate")]
    backend: BackendArg,
    /// MILP command template with {lp} and {sol}; falls back to MMR_STP_MILP_CMD.
    #[arg(long)]
    milp_cmd: Option<String>,
    /// Wall-clock limit for benders, in seconds.
    #[arg(long, default_value_t = 600.0)]
    time_limit: f64,
    #[arg(long, default_value_t = 1000)]
    max_iters: usize,
    /// Root terminal (default: lowest-id terminal).
    #[arg(long)]
    root: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SolveMethod {
    Am,
    Au,
    Amu,
    Benders,
    Brute,
    Eval,
    StpExact,
    StpBruteforce,
    StpHeur,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScenarioArg {
    Lower,
    Upper,
    Mid,
}

#[derive(Args)]
struct SolveArgs {
    instance: PathBuf,
    #[arg(long, value_enum, default_value = "benders")]
    method: SolveMethod,
    /// Tree for `--method eval`, as `a-b,c-d,...`.
    #[arg(long)]
    tree: Option<String>,
    /// Scenario for the stp-* methods.
    #[arg(long, value_enum, default_value = "mid")]
    scenario: ScenarioArg,
    /// Include the full regret report (worst scenario, adversary tree).
    #[arg(long)]
    report: bool,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Args)]
struct EvalArgs {
    instance: PathBuf,
    #[arg(long)]
    tree: String,
    #[arg(long, value_enum, default_value = "dw")]
    oracle: OracleArg,
    #[arg(long)]
    root: Option<usize>,
}

#[derive(Args)]
struct BenchArgs {
    suite: PathBuf,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "am,au,amu,benders")]
    methods: Vec<Method>,
    /// CSV destination (default: stdout).
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Sidecar CSV with the tree of every row.
    #[arg(long)]
    certificates: Option<PathBuf>,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Stp,
    Master,
}

#[derive(Args)]
struct ExportArgs {
    instance: PathBuf,
    #[arg(long, value_enum, default_value = "master")]
    model: ModelArg,
    #[arg(long, value_enum, default_value = "mid")]
    scenario: ScenarioArg,
    /// Cut trees separated by `;`, each as `a-b,...` (default: the AM and AU trees).
    #[arg(long)]
    cuts: Option<String>,
    #[arg(long)]
    root: Option<usize>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<SolveError> for Failure {
    fn from(e: SolveError) -> Self {
        let code = match e {
            SolveError::Timeout | SolveError::TerminalCap { .. } | SolveError::EdgeCap { .. } => EXIT_LIMIT,
            _ => EXIT_SOLVE,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::new(1, e.to_string())
    }
}

type CmdResult = Result<u8, Failure>;

fn load(path: &Path, root: Option<usize>) -> Result<Instance, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))?;
    let inst = parse_steinlib(&text).map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))?;
    match root {
        Some(r) => inst
            .rerooted(r)
            .map_err(|e| Failure::new(EXIT_USAGE, format!("--root {r}: {e}"))),
        None => Ok(inst),
    }
}

fn instance_name(inst: &Instance, path: &Path) -> String {
    inst.name().map(str::to_string).unwrap_or_else(|| instance_label(path))
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), Failure> {
    match output {
        Some(p) => fs::write(p, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn print_json(value: &impl Serialize) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::new(1, e.to_string()))?;
    println!("{text}");
    Ok(())
}

fn oracle(arg: OracleArg, max_terminals: usize) -> StpOracle {
    match arg {
        OracleArg::Dw => StpOracle::DreyfusWagner { max_terminals },
        OracleArg::Brute => StpOracle::BruteForce,
        OracleArg::Sp => StpOracle::ShortestPath,
    }
}

fn scenario(inst: &Instance, arg: ScenarioArg) -> Scenario {
    match arg {
        ScenarioArg::Lower => Scenario::lower(inst),
        ScenarioArg::Upper => Scenario::upper(inst),
        ScenarioArg::Mid => Scenario::midpoint(inst),
    }
}

impl SolverArgs {
    fn config(&self) -> Result<RunConfig, Failure> {
        let backend = match self.backend {
            BackendArg::Enumerate => MasterBackend::Enumerate {
                max_edges: ENUMERATION_EDGE_CAP,
            },
            BackendArg::ExternalLp => MasterBackend::ExternalLp(match &self.milp_cmd {
                Some(cmd) => ExternalSolver::new(cmd.clone()),
                None => ExternalSolver::from_env().map_err(|e| Failure::new(EXIT_USAGE, e.to_string()))?,
            }),
        };
        if !(self.time_limit >= 0.0 && self.time_limit.is_finite()) {
            return Err(Failure::new(EXIT_USAGE, "--time-limit must be a nonnegative number"));
        }
        Ok(RunConfig {
            oracle: oracle(self.oracle, self.max_terminals),
            backend,
            time_limit: Duration::from_secs_f64(self.time_limit),
            max_iterations: self.max_iters,
        })
    }
}

fn cmd_gen(args: &GenArgs) -> CmdResult {
    let base = load(&args.base, None)?;
    let bad = |e: &dyn std::fmt::Display| Failure::new(EXIT_USAGE, format!("--param {}: {e}", args.param));
    let recipe = match args.method {
        GenMethod::Be => Recipe::Be(args.param.parse().map_err(|e| bad(&e))?),
        GenMethod::Mo => Recipe::Mo(args.param.parse().map_err(|e| bad(&e))?),
        GenMethod::Kz => Recipe::Kz(args.param.parse().map_err(|e| bad(&e))?),
    };
    let cfg = GeneratorConfig { recipe, seed: args.seed };
    let inst = generate(&base, &cfg).map_err(|e| Failure::new(EXIT_SOLVE, e.to_string()))?;
    let base_name = instance_name(&base, &args.base);
    let inst = inst.with_name(format!("{base_name}-{}{}-s{}", recipe.code().to_lowercase(), recipe.param(), args.seed));
    emit(args.output.as_deref(), &write_interval(&inst, &provenance(&cfg, &base_name)))?;
    Ok(0)
}

#[derive(Serialize)]
struct StpRecord {
    instance: String,
    method: &'static str,
    cost: f64,
    optimal: bool,
    tree: String,
}

#[derive(Serialize)]
struct SolveOutput<'a> {
    #[serde(flatten)]
    record: &'a bench::BenchRecord,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<&'a mmr_stp::RegretReport>,
}

fn cmd_solve(args: &SolveArgs) -> CmdResult {
    let inst = load(&args.instance, args.solver.root)?;
    let name = instance_name(&inst, &args.instance);
    let cfg = args.solver.config()?;
    let method = match args.method {
        SolveMethod::Am => Method::Am,
        SolveMethod::Au => Method::Au,
        SolveMethod::Amu => Method::Amu,
        SolveMethod::Benders => Method::Benders,
        SolveMethod::Brute => Method::Brute,
        SolveMethod::Eval => {
            let tree = args
                .tree
                .as_deref()
                .ok_or_else(|| Failure::new(EXIT_USAGE, "--method eval needs --tree"))?;
            return eval(&inst, &name, tree, &cfg.oracle);
        }
        stp => {
            let solver = match stp {
                SolveMethod::StpExact => cfg.oracle_exact(),
                SolveMethod::StpBruteforce => StpOracle::BruteForce,
                _ => StpOracle::ShortestPath,
            };
            let s = scenario(&inst, args.scenario);
            let sol = solver.solve(&inst, &s)?;
            print_json(&StpRecord {
                instance: name,
                method: match stp {
                    SolveMethod::StpExact => "stp-exact",
                    SolveMethod::StpBruteforce => "stp-bruteforce",
                    _ => "stp-heur",
                },
                cost: sol.cost as f64 / s.scale() as f64,
                optimal: sol.optimal,
                tree: format_tree(&inst, &sol.tree),
            })?;
            return Ok(0);
        }
    };
    let rec = record(&name, &inst, method, &cfg).map_err(|m| Failure::new(EXIT_SOLVE, m))?;
    let full = if args.report {
        Some(robust_cost(&inst, &parse_tree(&inst, &rec.tree).expect("own certificate"), &cfg.oracle)?)
    } else {
        None
    };
    print_json(&SolveOutput {
        record: &rec,
        report: full.as_ref(),
    })?;
    // Bounds that never met mean a cap expired.
    let capped = method == Method::Benders && rec.gap_pct.is_some_and(|g| g > 0.0);
    Ok(if capped { EXIT_LIMIT } else { 0 })
}

impl RunConfig {
    fn oracle_exact(&self) -> StpOracle {
        match self.oracle {
            StpOracle::ShortestPath => StpOracle::default(),
            exact => exact,
        }
    }
}

#[derive(Serialize)]
struct EvalOutput<'a> {
    instance: &'a str,
    tree: String,
    #[serde(flatten)]
    report: mmr_stp::RegretReport,
}

fn eval(inst: &Instance, name: &str, tree: &str, oracle: &StpOracle) -> CmdResult {
    let tree = parse_tree(inst, tree).map_err(|m| Failure::new(EXIT_USAGE, format!("--tree: {m}")))?;
    let report = robust_cost(inst, &tree, oracle)?;
    print_json(&EvalOutput {
        instance: name,
        tree: format_tree(inst, &tree),
        report,
    })?;
    Ok(0)
}

fn cmd_eval(args: &EvalArgs) -> CmdResult {
    let inst = load(&args.instance, args.root)?;
    let name = instance_name(&inst, &args.instance);
    eval(&inst, &name, &args.tree, &oracle(args.oracle, DEFAULT_TERMINAL_CAP))
}

fn cmd_bench(args: &BenchArgs) -> CmdResult {
    let cfg = args.solver.config()?;
    let files = suite_files(&args.suite).map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", args.suite.display())))?;
    if files.is_empty() {
        eprintln!("warning: no .stp files in {}", args.suite.display());
    }
    let rows = run_suite(&files, &args.methods, &cfg);
    for row in &rows {
        if let Err(e) = &row.result {
            eprintln!("warning: {} / {}: {e}", row.instance, row.method.name());
        }
    }
    let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let mut csv = Vec::new();
    write_csv(&mut csv, &rows, &args.methods, timestamp)?;
    emit(args.output.as_deref(), &String::from_utf8_lossy(&csv))?;
    if let Some(path) = &args.certificates {
        write_certificates(fs::File::create(path)?, &rows)?;
    }
    Ok(0)
}

fn cmd_export(args: &ExportArgs) -> CmdResult {
    let inst = load(&args.instance, args.root)?;
    let text = match args.model {
        ModelArg::Stp => write_lp(&inst, &LpModel::Stp {
            scenario: &scenario(&inst, args.scenario),
        }),
        ModelArg::Master => {
            let cuts: Vec<Cut> = match &args.cuts {
                Some(list) => list
                    .split(';')
                    .map(|t| parse_tree(&inst, t).map(Cut::new))
                    .collect::<Result<_, _>>()
                    .map_err(|m| Failure::new(EXIT_USAGE, format!("--cuts: {m}")))?,
                None => {
                    let pair = algorithm_mean_upper_pair(&inst, &StpOracle::default())?;
                    let mut cuts = vec![Cut::new(pair.mean.0)];
                    if pair.upper.0 != cuts[0].tree {
                        cuts.push(Cut::new(pair.upper.0));
                    }
                    cuts
                }
            };
            write_lp(&inst, &LpModel::Master { cuts: &cuts })
        }
    };
    emit(args.output.as_deref(), &text)?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Eval(a) => cmd_eval(a),
        Command::Bench(a) => cmd_bench(a),
        Command::ExportLp(a) => cmd_export(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
