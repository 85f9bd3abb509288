//! Edge-list text format: a header line `n m`, then `m` lines `u v` with
//! 0-based ids and `u < v`. Blank lines and `#` comments are ignored.

use std::fmt::Write as _;
use std::path::Path;

use super::Graph;
use crate::error::{Error, Result};

pub fn parse_edge_list(text: &str, name: &str) -> Result<Graph> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let nums: Vec<usize> = line
            .split_whitespace()
            .map(|t| t.parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Parse { line: line_no, msg: e.to_string() })?;
        if nums.len() != 2 {
            return Err(Error::Parse { line: line_no, msg: "expected two integers".into() });
        }
        match header {
            None => header = Some((nums[0], nums[1])),
            Some(_) => {
                let (u, v) = (nums[0], nums[1]);
                if u >= v {
                    return Err(Error::Parse { line: line_no, msg: format!("edge {u} {v} must have u < v") });
                }
                edges.push((u, v));
            }
        }
    }
    let (n, m) = header.ok_or(Error::Parse { line: 0, msg: "missing header".into() })?;
    if edges.len() != m {
        return Err(Error::Parse {
            line: 0,
            msg: format!("header declares {m} edges, found {}", edges.len()),
        });
    }
    Graph::from_edges(n, edges, name)
}

pub fn to_edge_list(g: &Graph) -> String {
    let mut out = format!("# {}\n{} {}\n", g.name(), g.n(), g.edge_count());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

pub fn read_edge_list(path: &Path) -> Result<Graph> {
    let text = std::fs::read_to_string(path)?;
    let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("graph");
    parse_edge_list(&text, name)
}

pub fn write_edge_list(g: &Graph, path: &Path) -> Result<()> {
    std::fs::write(path, to_edge_list(g))?;
    Ok(())
}
