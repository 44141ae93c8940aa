//! SteinLib STP reader and the interval variant writer.
//!
//! The reader accepts classic files (`E i j c`) and interval files
//! (`E i j l u`). Keywords are case-insensitive. Sections other than
//! `Comment`, `Graph` and `Terminals` (coordinates, presolve data, ...) are
//! skipped. Lines starting with `#` are comments.

use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{check_edge, Edge, Instance, InstanceError, NodeId};

/// First line of every file written by [`write_interval`].
pub const INTERVAL_HEADER: &str = "# mmr-stp interval format v1";

const STP_MAGIC: &str = "33D32945 STP File, STP Format Version 1.0";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("malformed line `{0}`")]
    Malformed(String),
    #[error("{keyword} declared {declared} but {found} were listed")]
    CountMismatch {
        keyword: &'static str,
        declared: usize,
        found: usize,
    },
    #[error("missing `Nodes` declaration")]
    MissingNodes,
    #[error("unterminated section `{0}`")]
    UnterminatedSection(String),
    #[error(transparent)]
    Invalid(#[from] InstanceError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Section {
    None,
    Comment,
    Graph,
    Terminals,
    Other,
}

/// Parses a SteinLib STP file into a validated [`Instance`].
///
/// The root is the lowest-id terminal unless the `Terminals` section carries
/// a `Root r` line.
pub fn parse_steinlib(text: &str) -> Result<Instance, ParseError> {
    let mut section = Section::None;
    let mut section_name = String::new();
    let mut section_line = 0;
    let mut name = None;
    let mut nodes: Option<(usize, usize)> = None;
    let mut declared_edges: Option<(usize, usize)> = None;
    let mut declared_terminals: Option<(usize, usize)> = None;
    let mut edges: Vec<(usize, Edge)> = Vec::new();
    let mut terminals: Vec<(usize, NodeId)> = Vec::new();
    let mut root: Option<(usize, NodeId)> = None;
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let malformed = || ParseError {
            line: line_no,
            kind: ParseErrorKind::Malformed(line.to_string()),
        };
        let mut words = line.split_whitespace();
        let keyword = words.next().unwrap_or_default().to_ascii_lowercase();
        let args: Vec<&str> = words.collect();

        if section == Section::None {
            match keyword.as_str() {
                "section" => {
                    let which = args.first().ok_or_else(malformed)?;
                    section_name = which.to_string();
                    section_line = line_no;
                    section = match which.to_ascii_lowercase().as_str() {
                        "comment" => Section::Comment,
                        "graph" => Section::Graph,
                        "terminals" => Section::Terminals,
                        _ => Section::Other,
                    };
                }
                "eof" => break,
                // magic header line
                _ if line.to_ascii_lowercase().contains("stp file") => {}
                _ => return Err(malformed()),
            }
            continue;
        }
        if keyword == "end" {
            section = Section::None;
            continue;
        }
        match section {
            Section::Other => {}
            Section::Comment => {
                if keyword == "name" {
                    let rest = line[4..].trim().trim_matches('"');
                    name = Some(rest.to_string());
                }
            }
            Section::Graph => match (keyword.as_str(), args.as_slice()) {
                ("nodes", [n]) => nodes = Some((parse_num(n).ok_or_else(malformed)?, line_no)),
                ("edges", [m]) => {
                    declared_edges = Some((parse_num(m).ok_or_else(malformed)?, line_no))
                }
                ("e", [a, b, c]) => {
                    match (parse_num(a), parse_num(b), parse_cost(c)) {
                        (Some(a), Some(b), Some(c)) => edges.push((line_no, Edge::fixed(a, b, c))),
                        _ => return Err(malformed()),
                    }
                }
                ("e", [a, b, l, u]) => {
                    match (parse_num(a), parse_num(b), parse_cost(l), parse_cost(u)) {
                        (Some(a), Some(b), Some(l), Some(u)) => {
                            edges.push((line_no, Edge::new(a, b, l, u)))
                        }
                        _ => return Err(malformed()),
                    }
                }
                _ => return Err(malformed()),
            },
            Section::Terminals => match (keyword.as_str(), args.as_slice()) {
                ("terminals", [k]) => {
                    declared_terminals = Some((parse_num(k).ok_or_else(malformed)?, line_no))
                }
                ("t", [t]) => terminals.push((line_no, parse_num(t).ok_or_else(malformed)?)),
                ("root", [r]) => root = Some((line_no, parse_num(r).ok_or_else(malformed)?)),
                _ => return Err(malformed()),
            },
            Section::None => unreachable!(),
        }
    }
    if section != Section::None {
        return Err(ParseError {
            line: section_line,
            kind: ParseErrorKind::UnterminatedSection(section_name),
        });
    }

    let (node_count, nodes_line) = nodes.ok_or(ParseError {
        line: last_line,
        kind: ParseErrorKind::MissingNodes,
    })?;
    if let Some((declared, line)) = declared_edges {
        if declared != edges.len() {
            return Err(ParseError {
                line,
                kind: ParseErrorKind::CountMismatch {
                    keyword: "Edges",
                    declared,
                    found: edges.len(),
                },
            });
        }
    }
    if let Some((declared, line)) = declared_terminals {
        if declared != terminals.len() {
            return Err(ParseError {
                line,
                kind: ParseErrorKind::CountMismatch {
                    keyword: "Terminals",
                    declared,
                    found: terminals.len(),
                },
            });
        }
    }

    // Check per-line faults first so diagnostics point at the offending line.
    let mut seen = std::collections::HashSet::new();
    for &(line, e) in &edges {
        if let Err(err) = check_edge(&e, node_count) {
            return Err(ParseError {
                line,
                kind: err.into(),
            });
        }
        if !seen.insert((e.a.min(e.b), e.a.max(e.b))) {
            return Err(ParseError {
                line,
                kind: InstanceError::DuplicateEdge(e.a.min(e.b), e.a.max(e.b)).into(),
            });
        }
    }
    for &(line, t) in terminals.iter().chain(root.iter()) {
        if t == 0 || t > node_count {
            return Err(ParseError {
                line,
                kind: InstanceError::DanglingNode {
                    node: t,
                    node_count,
                }
                .into(),
            });
        }
    }

    let edges: Vec<Edge> = edges.into_iter().map(|(_, e)| e).collect();
    let terminal_ids = terminals.iter().map(|&(_, t)| t);
    let built = match root {
        Some((_, r)) => Instance::with_root(node_count, edges, terminal_ids, r),
        None => Instance::new(node_count, edges, terminal_ids),
    };
    let inst = built.map_err(|err| {
        let line = match &err {
            InstanceError::EmptyTerminals => declared_terminals.map_or(last_line, |(_, l)| l),
            InstanceError::RootNotTerminal(_) => root.map_or(last_line, |(l, _)| l),
            _ => nodes_line,
        };
        ParseError {
            line,
            kind: err.into(),
        }
    })?;
    Ok(match name {
        Some(n) => inst.with_name(n),
        None => inst,
    })
}

fn parse_num(s: &str) -> Option<usize> {
    s.parse().ok()
}

fn parse_cost(s: &str) -> Option<u64> {
    s.parse().ok()
}

/// Writes `inst` in the interval format. Extra comment lines (generator
/// provenance and the like) go right after the format header.
pub fn write_interval(inst: &Instance, comments: &[String]) -> String {
    let mut out = String::new();
    writeln!(out, "{INTERVAL_HEADER}").unwrap();
    for c in comments {
        writeln!(out, "# {c}").unwrap();
    }
    writeln!(out, "{STP_MAGIC}").unwrap();
    if let Some(name) = inst.name() {
        writeln!(out, "\nSECTION Comment\nName \"{name}\"\nEND").unwrap();
    }
    writeln!(out, "\nSECTION Graph").unwrap();
    writeln!(out, "Nodes {}", inst.node_count()).unwrap();
    writeln!(out, "Edges {}", inst.edge_count()).unwrap();
    for e in inst.edges() {
        writeln!(out, "E {} {} {} {}", e.a, e.b, e.lower, e.upper).unwrap();
    }
    writeln!(out, "END\n\nSECTION Terminals").unwrap();
    writeln!(out, "Terminals {}", inst.terminals().len()).unwrap();
    for t in inst.terminals() {
        writeln!(out, "T {t}").unwrap();
    }
    writeln!(out, "Root {}", inst.root()).unwrap();
    writeln!(out, "END\n\nEOF").unwrap();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{tiny1, TINY1_STP};

    #[test]
    fn tiny1_fixture() {
        let inst = parse_steinlib(TINY1_STP).unwrap();
        assert_eq!(inst.node_count(), 3);
        assert_eq!(
            inst.edges(),
            &[Edge::new(1, 2, 4, 8), Edge::new(1, 3, 1, 3), Edge::new(2, 3, 1, 3)]
        );
        assert_eq!(inst.terminals(), &[1, 2]);
        assert_eq!(inst.root(), 1);
        assert_eq!(inst.name(), Some("TINY1"));
    }

    #[test]
    fn classic_single_cost_and_single_terminal() {
        let text = "33D32945 STP File, STP Format Version 1.0\n\
                    SECTION Graph\nNodes 2\nEdges 1\nE 1 2 5\nEND\n\
                    SECTION Terminals\nTerminals 1\nT 1\nEND\nEOF\n";
        let inst = parse_steinlib(text).unwrap();
        assert_eq!(inst.edges(), &[Edge::new(1, 2, 5, 5)]);
        assert_eq!(inst.terminals(), &[1]);
        assert_eq!(inst.root(), 1);
    }

    #[test]
    fn keywords_are_case_insensitive_and_unknown_sections_skipped() {
        let text = "section graph\nnodes 2\nedges 1\ne 1 2 3\nend\n\
                    SECTION Coordinates\nDD 1 0 0\nDD 2 1 1\nEND\n\
                    Section TERMINALS\nterminals 2\nt 2\nt 1\nend\neof\n";
        let inst = parse_steinlib(text).unwrap();
        assert_eq!(inst.terminals(), &[1, 2]);
        assert_eq!(inst.root(), 1);
    }

    #[test]
    fn root_line_overrides_default() {
        let text = write_interval(&tiny1().rerooted(2).unwrap(), &[]);
        assert_eq!(parse_steinlib(&text).unwrap().root(), 2);
    }

    fn graph(edge_lines: &str, terminals: &str) -> String {
        let m = edge_lines.lines().count();
        format!(
            "SECTION Graph\nNodes 3\nEdges {m}\n{edge_lines}\nEND\n\
             SECTION Terminals\n{terminals}END\nEOF\n"
        )
    }

    #[test]
    fn diagnostics_carry_line_numbers() {
        let err = parse_steinlib(&graph("E 1 2 4\nE 2 x 1", "T 1\n")).unwrap_err();
        assert_eq!(err.line, 5);
        assert!(matches!(err.kind, ParseErrorKind::Malformed(_)));

        let err = parse_steinlib(&graph("E 1 2 4\nE 2 9 1", "T 1\n")).unwrap_err();
        assert_eq!(err.line, 5);
        assert!(matches!(
            err.kind,
            ParseErrorKind::Invalid(InstanceError::DanglingNode { node: 9, .. })
        ));

        let err = parse_steinlib(&graph("E 1 2 4\nE 2 3 7 1", "T 1\n")).unwrap_err();
        assert_eq!(err.line, 5);
        assert!(matches!(
            err.kind,
            ParseErrorKind::Invalid(InstanceError::InvertedInterval { .. })
        ));

        let err = parse_steinlib(&graph("E 1 2 4", "T 1\n")).unwrap_err();
        assert!(matches!(
            err.kind,
            ParseErrorKind::Invalid(InstanceError::Disconnected { .. })
        ));

        let err = parse_steinlib(&graph("E 1 2 4\nE 2 3 1", "Terminals 0\n")).unwrap_err();
        assert_eq!(err.line, 8);
        assert_eq!(err.kind, ParseErrorKind::Invalid(InstanceError::EmptyTerminals));

        let err = parse_steinlib(&graph("E 1 2 4\nE 2 1 1", "T 1\n")).unwrap_err();
        assert_eq!(err.line, 5);
        assert_eq!(err.kind, ParseErrorKind::Invalid(InstanceError::DuplicateEdge(1, 2)));

        let err = parse_steinlib(&graph("E 1 2 4\nE 2 3 1", "Terminals 2\nT 1\n")).unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::CountMismatch { .. }));

        let err = parse_steinlib("SECTION Graph\nNodes 2\n").unwrap_err();
        assert_eq!(err.line, 1);
        assert!(matches!(err.kind, ParseErrorKind::UnterminatedSection(_)));
    }

    #[test]
    fn writer_emits_header() {
        let text = write_interval(&tiny1(), &["seed=1".into()]);
        assert!(text.starts_with(INTERVAL_HEADER));
        assert!(text.contains("# seed=1\n"));
        assert!(text.contains("E 1 2 4 8\n"));
        assert_eq!(parse_steinlib(&text).unwrap(), tiny1());
    }
}
