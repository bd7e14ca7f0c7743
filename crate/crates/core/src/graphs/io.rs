//! Edge-list text format: one `i j` pair of 1-based indices per line,
//! whitespace separated; `#` starts a comment line. An optional `nodes N`
//! line declares the node count so isolated trailing nodes survive a round
//! trip; otherwise the count is the largest index seen.

use super::{EngagementMap, ForceGraph, GraphError};
use std::fmt::Write as _;
use std::path::Path;

struct Parsed {
    declared: Option<usize>,
    edges: Vec<(usize, usize, usize)>,
}

fn parse_lines(text: &str) -> Result<Parsed, GraphError> {
    let mut declared = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = body.split_whitespace().collect();
        if fields[0] == "nodes" {
            let [_, n] = fields[..] else {
                return Err(GraphError::Parse {
                    line,
                    msg: "expected `nodes N`".into(),
                });
            };
            let n = n.parse::<usize>().map_err(|e| GraphError::Parse {
                line,
                msg: format!("bad node count {n:?}: {e}"),
            })?;
            declared = Some(n);
            continue;
        }
        let [a, b] = fields[..] else {
            return Err(GraphError::Parse {
                line,
                msg: format!("expected two node indices, found {} fields", fields.len()),
            });
        };
        let index = |s: &str| -> Result<usize, GraphError> {
            match s.parse::<usize>() {
                Ok(0) => Err(GraphError::Parse {
                    line,
                    msg: "node indices are 1-based".into(),
                }),
                Ok(v) => Ok(v),
                Err(e) => Err(GraphError::Parse {
                    line,
                    msg: format!("bad node index {s:?}: {e}"),
                }),
            }
        };
        edges.push((line, index(a)?, index(b)?));
    }
    Ok(Parsed { declared, edges })
}

/// Parses an intra-force edge list.
pub fn parse_edge_list(text: &str) -> Result<ForceGraph, GraphError> {
    let parsed = parse_lines(text)?;
    let max_index = parsed
        .edges
        .iter()
        .map(|&(_, a, b)| a.max(b))
        .max()
        .unwrap_or(0);
    let n = parsed.declared.unwrap_or(max_index);
    let mut g = ForceGraph::with_nodes(n);
    for (line, a, b) in parsed.edges {
        if a == b {
            return Err(GraphError::SelfLoop { line, node: a });
        }
        if a.max(b) > n {
            return Err(GraphError::Parse {
                line,
                msg: format!("node {} exceeds declared count {n}", a.max(b)),
            });
        }
        g.add_edge(a - 1, b - 1)?;
    }
    Ok(g)
}

fn read(path: &Path) -> Result<String, GraphError> {
    std::fs::read_to_string(path).map_err(|source| GraphError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn load_graph(path: impl AsRef<Path>) -> Result<ForceGraph, GraphError> {
    parse_edge_list(&read(path.as_ref())?)
}

/// Loads an engagement file: first column Blue, second column Red.
pub fn load_engagement(
    path: impl AsRef<Path>,
    n_blue: usize,
    n_red: usize,
) -> Result<EngagementMap, GraphError> {
    let parsed = parse_lines(&read(path.as_ref())?)?;
    let mut pairs = Vec::with_capacity(parsed.edges.len());
    for (line, b, r) in parsed.edges {
        if b > n_blue || r > n_red {
            return Err(GraphError::Parse {
                line,
                msg: format!("pair ({b}, {r}) outside forces of size {n_blue} and {n_red}"),
            });
        }
        pairs.push((b - 1, r - 1));
    }
    EngagementMap::new(n_blue, n_red, pairs)
}

/// Serialises in the same format, always with a `nodes` line.
pub fn write_edge_list(g: &ForceGraph) -> String {
    let mut out = format!("nodes {}\n", g.n());
    for (i, j) in g.edges() {
        let _ = writeln!(out, "{} {}", i + 1, j + 1);
    }
    out
}
