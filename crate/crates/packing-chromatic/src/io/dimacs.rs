//! DIMACS edge-format graphs: `c` comment lines, one `p edge <n> <m>`
//! problem line, then `m` lines `e <u> <v>` with 1-based endpoints.

use std::collections::HashSet;
use std::fs;
use std::path::Path;

use crate::graph::Graph;
use crate::{Error, Result};

fn parse_error(origin: &str, line: usize, message: impl Into<String>) -> Error {
    Error::Parse { path: origin.to_string(), line, message: message.into() }
}

/// Parses DIMACS text. `origin` only labels error messages. Self-loops,
/// duplicate edges, out-of-range endpoints, and a wrong edge count are all
/// rejected with the offending line number.
pub fn parse_dimacs(text: &str, origin: &str) -> Result<Graph> {
    let mut declared: Option<(usize, usize)> = None;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut seen: HashSet<(usize, usize)> = HashSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let mut tokens = raw.split_whitespace();
        match tokens.next() {
            None | Some("c") => continue,
            Some("p") => {
                if declared.is_some() {
                    return Err(parse_error(origin, line, "second problem line"));
                }
                let fields: Vec<&str> = tokens.collect();
                if fields.len() != 3 || fields[0] != "edge" {
                    return Err(parse_error(origin, line, "expected 'p edge <n> <m>'"));
                }
                let n = fields[1].parse::<usize>();
                let m = fields[2].parse::<usize>();
                match (n, m) {
                    (Ok(n), Ok(m)) => declared = Some((n, m)),
                    _ => return Err(parse_error(origin, line, "expected 'p edge <n> <m>'")),
                }
            }
            Some("e") => {
                let Some((n, _)) = declared else {
                    return Err(parse_error(origin, line, "edge before the problem line"));
                };
                let fields: Vec<&str> = tokens.collect();
                let endpoints: Option<(usize, usize)> = match fields.as_slice() {
                    [a, b] => a.parse().ok().zip(b.parse().ok()),
                    _ => None,
                };
                let Some((u, v)) = endpoints else {
                    return Err(parse_error(origin, line, "expected 'e <u> <v>'"));
                };
                if u < 1 || u > n || v < 1 || v > n {
                    return Err(parse_error(
                        origin,
                        line,
                        format!("edge ({u}, {v}) outside the vertex range 1..={n}"),
                    ));
                }
                if u == v {
                    return Err(parse_error(origin, line, format!("self-loop on vertex {u}")));
                }
                let key = (u.min(v) - 1, u.max(v) - 1);
                if !seen.insert(key) {
                    return Err(parse_error(origin, line, format!("duplicate edge ({u}, {v})")));
                }
                edges.push(key);
            }
            Some(other) => {
                return Err(parse_error(origin, line, format!("unknown line type '{other}'")));
            }
        }
    }
    let Some((n, m)) = declared else {
        return Err(parse_error(origin, 0, "missing problem line"));
    };
    if edges.len() != m {
        return Err(parse_error(
            origin,
            0,
            format!("problem line declares {m} edges, file has {}", edges.len()),
        ));
    }
    Graph::new(n, &edges)
}

/// Canonical DIMACS text: the problem line, then edges sorted with `u < v`.
/// Formatting a parsed graph reproduces the canonical bytes exactly.
pub fn format_dimacs(g: &Graph) -> String {
    let mut out = format!("p edge {} {}\n", g.n(), g.edge_count());
    for (u, v) in g.edges() {
        out.push_str(&format!("e {} {}\n", u + 1, v + 1));
    }
    out
}

pub fn read_dimacs(path: impl AsRef<Path>) -> Result<Graph> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    parse_dimacs(&text, &path.display().to_string())
}

pub fn write_dimacs(path: impl AsRef<Path>, g: &Graph) -> Result<()> {
    fs::write(path, format_dimacs(g))?;
    Ok(())
}
