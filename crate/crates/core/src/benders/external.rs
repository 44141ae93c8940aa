//! Shelling out to an external MILP solver.
//!
//! The solver is described by a command template such as
//! `highs-lp {lp} {sol}`; `{lp}` and `{sol}` are replaced by the model and
//! solution paths. The solution file lists `name value` pairs, one per line.
//! Optional `status <word>` and `objective <value>` lines are recognised;
//! `#` starts a comment.

use std::collections::BTreeMap;
use std::io;
use std::path::Path;
use std::process::Command;

use thiserror::Error;

use crate::graph::{EdgeId, Instance};

/// Environment variable holding the default command template.
pub const MILP_CMD_ENV: &str = "MMR_STP_MILP_CMD";

const INTEGRALITY_TOL: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum BackendError {
    #[error("no MILP command configured (set {MILP_CMD_ENV} or pass --milp-cmd)")]
    NotConfigured,
    #[error("MILP command template `{0}` is missing {{lp}} or {{sol}}")]
    BadTemplate(String),
    #[error("MILP executable `{0}` not found")]
    NotFound(String),
    #[error("MILP solver exited with {status}: {stderr}")]
    Failed { status: String, stderr: String },
    #[error("MILP solver reports the model infeasible")]
    Infeasible,
    #[error("MILP solver finished with status `{0}`")]
    BadStatus(String),
    #[error("solution file line {line}: {reason}")]
    MalformedSolution { line: usize, reason: String },
    #[error("variable {name} = {value} is not binary")]
    NonIntegral { name: String, value: f64 },
    #[error("solver's x does not connect the terminals")]
    NonTree,
    #[error("io: {0}")]
    Io(#[from] io::Error),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExternalSolver {
    pub command: String,
}

impl ExternalSolver {
    pub fn new(command: impl Into<String>) -> Self {
        ExternalSolver {
            command: command.into(),
        }
    }

    /// Solver configured through [`MILP_CMD_ENV`].
    pub fn from_env() -> Result<Self, BackendError> {
        match std::env::var(MILP_CMD_ENV) {
            Ok(cmd) if !cmd.trim().is_empty() => Ok(ExternalSolver::new(cmd)),
            _ => Err(BackendError::NotConfigured),
        }
    }

    pub fn run(&self, lp_path: &Path, sol_path: &Path) -> Result<SolverOutput, BackendError> {
        external_backend_run(lp_path, sol_path, &self.command)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SolverOutput {
    pub status: Option<String>,
    pub objective: Option<f64>,
    pub values: BTreeMap<String, f64>,
}

impl SolverOutput {
    /// Edges with at least one orientation `x_i_j` set.
    pub fn selected_edges(&self, inst: &Instance) -> Result<Vec<EdgeId>, BackendError> {
        let mut edges = Vec::new();
        for (name, &value) in &self.values {
            let Some(rest) = name.strip_prefix("x_") else {
                continue;
            };
            let bit = binary(name, value)?;
            let mut parts = rest.split('_').map(str::parse::<usize>);
            let (Some(Ok(a)), Some(Ok(b)), None) = (parts.next(), parts.next(), parts.next()) else {
                continue;
            };
            if bit {
                if let Some(e) = inst.find_edge(a, b) {
                    edges.push(e);
                }
            }
        }
        edges.sort_unstable();
        edges.dedup();
        Ok(edges)
    }
}

fn binary(name: &str, value: f64) -> Result<bool, BackendError> {
    if value.abs() <= INTEGRALITY_TOL {
        Ok(false)
    } else if (value - 1.0).abs() <= INTEGRALITY_TOL {
        Ok(true)
    } else {
        Err(BackendError::NonIntegral {
            name: name.to_string(),
            value,
        })
    }
}

/// Runs the solver template on `lp_path` and reads back `sol_path`.
pub fn external_backend_run(lp_path: &Path, sol_path: &Path, template: &str) -> Result<SolverOutput, BackendError> {
    if !template.contains("{lp}") || !template.contains("{sol}") {
        return Err(BackendError::BadTemplate(template.to_string()));
    }
    let mut words = template.split_whitespace().map(|w| {
        w.replace("{lp}", &lp_path.to_string_lossy())
            .replace("{sol}", &sol_path.to_string_lossy())
    });
    let program = words.next().ok_or(BackendError::NotConfigured)?;
    let output = Command::new(&program).args(words).output().map_err(|e| match e.kind() {
        io::ErrorKind::NotFound => BackendError::NotFound(program.clone()),
        _ => BackendError::Io(e),
    })?;
    if !output.status.success() {
        return Err(BackendError::Failed {
            status: output.status.to_string(),
            stderr: String::from_utf8_lossy(&output.stderr).trim().to_string(),
        });
    }
    let text = std::fs::read_to_string(sol_path)?;
    let sol = parse_solution(&text)?;
    match sol.status.as_deref().map(str::to_ascii_lowercase) {
        None => Ok(sol),
        Some(s) if s.contains("infeasible") => Err(BackendError::Infeasible),
        Some(s) if s.starts_with("optimal") => Ok(sol),
        Some(s) => Err(BackendError::BadStatus(s)),
    }
}

pub(crate) fn parse_solution(text: &str) -> Result<SolverOutput, BackendError> {
    let mut out = SolverOutput::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or_default().trim();
        if line.is_empty() {
            continue;
        }
        let malformed = |reason: &str| BackendError::MalformedSolution {
            line: idx + 1,
            reason: reason.to_string(),
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [name, value] = fields[..] else {
            return Err(malformed("expected `name value`"));
        };
        match name.to_ascii_lowercase().as_str() {
            "status" => out.status = Some(value.to_string()),
            "objective" => out.objective = Some(value.parse().map_err(|_| malformed("bad objective"))?),
            _ => {
                let v: f64 = value.parse().map_err(|_| malformed("bad value"))?;
                out.values.insert(name.to_string(), v);
            }
        }
    }
    Ok(out)
}
