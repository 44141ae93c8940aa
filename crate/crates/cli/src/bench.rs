//! Suite runs and the CSV report.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use mmr_stp::steinlib::parse_steinlib;
use mmr_stp::Instance;
use serde::Serialize;

use crate::methods::{deviation_pct, format_tree, run, Method, RunConfig};

pub const COLUMNS: [&str; 9] = ["instance", "method", "Z", "LB", "gap_pct", "dev_pct", "time_s", "iters", "optimal"];

/// One (instance, method) cell.
#[derive(Debug, Clone, Serialize)]
pub struct BenchRecord {
    pub instance: String,
    pub method: Method,
    pub robust_cost: u64,
    pub lower_bound: Option<i64>,
    pub gap_pct: Option<f64>,
    pub dev_pct: Option<f64>,
    pub wall_time_seconds: f64,
    pub iterations: Option<usize>,
    pub optimal: bool,
    /// Tree certificate as `a-b` pairs.
    pub tree: String,
}

pub struct Row {
    pub instance: String,
    pub method: Method,
    pub result: Result<BenchRecord, String>,
}

/// `.stp` files directly inside `dir`, sorted by file name.
pub fn suite_files(dir: &Path) -> io::Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x.eq_ignore_ascii_case("stp")))
        .collect();
    files.sort();
    Ok(files)
}

pub fn instance_label(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

pub fn record(instance: &str, inst: &Instance, method: Method, cfg: &RunConfig) -> Result<BenchRecord, String> {
    let r = run(inst, method, cfg).map_err(|e| e.to_string())?;
    Ok(BenchRecord {
        instance: instance.to_string(),
        method,
        robust_cost: r.report.robust_cost,
        lower_bound: r.lower_bound,
        gap_pct: r.gap_pct,
        dev_pct: None,
        wall_time_seconds: r.seconds,
        iterations: r.iterations,
        optimal: r.optimal,
        tree: format_tree(inst, &r.tree),
    })
}

/// Runs every method on every file. Failures are kept as rows.
pub fn run_suite(files: &[PathBuf], methods: &[Method], cfg: &RunConfig) -> Vec<Row> {
    let mut rows = Vec::new();
    for path in files {
        let label = instance_label(path);
        let parsed = fs::read_to_string(path)
            .map_err(|e| e.to_string())
            .and_then(|text| parse_steinlib(&text).map_err(|e| format!("parse error, {e}")));
        let mut cells: Vec<Row> = methods
            .iter()
            .map(|&method| Row {
                instance: label.clone(),
                method,
                result: parsed.as_ref().map_err(Clone::clone).and_then(|inst| record(&label, inst, method, cfg)),
            })
            .collect();
        let reference = [Method::Benders, Method::Brute].into_iter().find_map(|m| {
            cells
                .iter()
                .find(|c| c.method == m)
                .and_then(|c| c.result.as_ref().ok())
                .map(|r| r.robust_cost)
        });
        for cell in &mut cells {
            if let (Ok(rec), Some(reference)) = (&mut cell.result, reference) {
                if rec.method.is_heuristic() {
                    rec.dev_pct = deviation_pct(rec.robust_cost, reference);
                }
            }
        }
        rows.extend(cells);
    }
    rows
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn pct(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.2}")).unwrap_or_default()
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    (n > 0).then(|| sum / n as f64)
}

/// Writes the report: a timestamp comment, the header, one row per cell
/// in suite order, then one `AVG` row per method.
pub fn write_csv<W: Write>(mut out: W, rows: &[Row], methods: &[Method], timestamp: u64) -> io::Result<()> {
    writeln!(out, "# mmr-stp bench, unix time {timestamp}")?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(COLUMNS)?;
    for row in rows {
        let fields = match &row.result {
            Ok(r) => vec![
                r.instance.clone(),
                r.method.name().to_string(),
                r.robust_cost.to_string(),
                opt(r.lower_bound),
                pct(r.gap_pct),
                pct(r.dev_pct),
                format!("{:.3}", r.wall_time_seconds),
                opt(r.iterations),
                r.optimal.to_string(),
            ],
            Err(_) => {
                let mut v = vec![row.instance.clone(), row.method.name().to_string()];
                v.extend(std::iter::repeat_n(String::new(), 6));
                v.push("error".into());
                v
            }
        };
        w.write_record(&fields)?;
    }
    for &method in methods {
        let ok: Vec<&BenchRecord> = rows
            .iter()
            .filter(|r| r.method == method)
            .filter_map(|r| r.result.as_ref().ok())
            .collect();
        if ok.is_empty() {
            continue;
        }
        let optimal = ok.iter().filter(|r| r.optimal).count();
        w.write_record([
            "AVG".to_string(),
            method.name().to_string(),
            pct(mean(ok.iter().map(|r| r.robust_cost as f64))),
            pct(mean(ok.iter().filter_map(|r| r.lower_bound).map(|v| v as f64))),
            pct(mean(ok.iter().filter_map(|r| r.gap_pct))),
            pct(mean(ok.iter().filter_map(|r| r.dev_pct))),
            format!("{:.3}", mean(ok.iter().map(|r| r.wall_time_seconds)).unwrap_or(0.0)),
            pct(mean(ok.iter().filter_map(|r| r.iterations).map(|v| v as f64))),
            format!("{optimal}/{}", ok.len()),
        ])?;
    }
    w.flush()
}

/// `instance,method,tree` lines for every successful cell.
pub fn write_certificates<W: Write>(out: W, rows: &[Row]) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["instance", "method", "tree"])?;
    for r in rows.iter().filter_map(|r| r.result.as_ref().ok()) {
        w.write_record([r.instance.as_str(), r.method.name(), r.tree.as_str()])?;
    }
    w.flush()
}
