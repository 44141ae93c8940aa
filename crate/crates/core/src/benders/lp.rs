//! CPLEX-style LP files for the directed multi-commodity flow model.
//!
//! Every edge `{i, j}` becomes arcs `x_i_j` and `x_j_i`. One commodity per
//! non-root terminal `k` ships a unit from the root to `k` on arcs `y_i_j_k`,
//! and `y_i_j_k <= x_i_j` ties the flows to the design. At most one
//! orientation of each edge is chosen.

use std::fmt::Write as _;
use std::path::Path;

use super::Cut;
use crate::graph::{bidirect, DirectedModel, Instance, NodeId};
use crate::scenario::Scenario;

#[derive(Debug, Clone, Copy)]
pub enum LpModel<'a> {
    /// Minimum Steiner tree under a fixed scenario. Coefficients are the
    /// scenario's stored integers, i.e. doubled for midpoint scenarios.
    Stp { scenario: &'a Scenario },
    /// Min-max regret master restricted to `cuts`.
    Master { cuts: &'a [Cut] },
}

fn x_name(arc: (NodeId, NodeId)) -> String {
    format!("x_{}_{}", arc.0, arc.1)
}

fn y_name(arc: (NodeId, NodeId), k: NodeId) -> String {
    format!("y_{}_{}_{}", arc.0, arc.1, k)
}

/// Appends `terms` as a linear expression, wrapping long rows.
fn push_expr(out: &mut String, terms: &[(i64, String)]) {
    for (i, (coef, var)) in terms.iter().enumerate() {
        if i > 0 && i % 8 == 0 {
            out.push_str("\n   ");
        }
        let sign = if *coef < 0 { "-" } else { "+" };
        if i == 0 && *coef >= 0 {
            write!(out, " {} {var}", coef.abs()).unwrap();
        } else {
            write!(out, " {sign} {} {var}", coef.abs()).unwrap();
        }
    }
}

pub fn write_lp(inst: &Instance, model: &LpModel<'_>) -> String {
    let dm: DirectedModel = bidirect(inst);
    let commodities: Vec<NodeId> = inst
        .terminals()
        .iter()
        .copied()
        .filter(|&t| t != inst.root())
        .collect();
    let mut out = String::new();
    match model {
        LpModel::Stp { scenario } => {
            writeln!(out, "\\ mmr-stp: Steiner tree, scenario scale {}", scenario.scale()).unwrap()
        }
        LpModel::Master { cuts } => {
            writeln!(out, "\\ mmr-stp: min-max regret master, {} cuts", cuts.len()).unwrap()
        }
    }

    let mut objective: Vec<(i64, String)> = dm
        .arcs
        .iter()
        .zip(&dm.arc_to_edge)
        .map(|(&arc, &e)| {
            let coef = match model {
                LpModel::Stp { scenario } => scenario.cost(e),
                LpModel::Master { .. } => inst.edge(e).upper,
            };
            (coef as i64, x_name(arc))
        })
        .collect();
    if let LpModel::Master { .. } = model {
        objective.push((-1, "theta".into()));
    }
    out.push_str("Minimize\n obj:");
    push_expr(&mut out, &objective);
    out.push_str("\nSubject To\n");

    for &k in &commodities {
        for j in 1..=inst.node_count() {
            let mut terms = Vec::new();
            for (a, &(tail, head)) in dm.arcs.iter().enumerate() {
                if tail == j {
                    terms.push((1, y_name(dm.arcs[a], k)));
                } else if head == j {
                    terms.push((-1, y_name(dm.arcs[a], k)));
                }
            }
            if terms.is_empty() {
                continue;
            }
            let rhs = if j == inst.root() {
                1
            } else if j == k {
                -1
            } else {
                0
            };
            write!(out, " flow_{k}_{j}:").unwrap();
            push_expr(&mut out, &terms);
            writeln!(out, " = {rhs}").unwrap();
        }
    }
    for &k in &commodities {
        for &arc in &dm.arcs {
            writeln!(out, " link_{}_{}_{k}: {} - {} <= 0", arc.0, arc.1, y_name(arc, k), x_name(arc)).unwrap();
        }
    }
    for e in 0..inst.edge_count() {
        let [a, b] = dm.arcs_of(e);
        writeln!(out, " orient_{e}: {} + {} <= 1", x_name(dm.arcs[a]), x_name(dm.arcs[b])).unwrap();
    }
    if let LpModel::Master { cuts } = model {
        for (c, cut) in cuts.iter().enumerate() {
            let mut terms = vec![(1, "theta".to_string())];
            let mut rhs = 0u64;
            for &e in cut.tree.edges() {
                let edge = inst.edge(e);
                rhs += edge.lower;
                if edge.width() > 0 {
                    for arc in dm.arcs_of(e) {
                        terms.push((-(edge.width() as i64), x_name(dm.arcs[arc])));
                    }
                }
            }
            write!(out, " cut_{c}:").unwrap();
            push_expr(&mut out, &terms);
            writeln!(out, " <= {rhs}").unwrap();
        }
    }

    if let LpModel::Master { .. } = model {
        out.push_str("Bounds\n -inf <= theta <= +inf\n");
    }
    out.push_str("Binary\n");
    let mut binaries: Vec<String> = dm.arcs.iter().map(|&a| x_name(a)).collect();
    for &k in &commodities {
        binaries.extend(dm.arcs.iter().map(|&a| y_name(a, k)));
    }
    for chunk in binaries.chunks(8) {
        writeln!(out, " {}", chunk.join(" ")).unwrap();
    }
    out.push_str("End\n");
    out
}

pub fn export_lp(inst: &Instance, model: &LpModel<'_>, path: &Path) -> std::io::Result<()> {
    std::fs::write(path, write_lp(inst, model))
}
