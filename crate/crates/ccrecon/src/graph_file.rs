//! Plain-text edge lists: a header line `n m`, then `m` lines `u v` with
//! `1 <= u < v <= n`. Blank lines are ignored.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use ccrecon_core::graphs::MAX_NODES;
use ccrecon_core::LabeledGraph;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GraphFileError {
    #[error("reading {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("missing header line `n m`")]
    MissingHeader,
    #[error("line {line}: expected two integers, got `{text}`")]
    Syntax { line: usize, text: String },
    #[error("line {line}: n = {n} is outside 1..={max}", max = MAX_NODES)]
    Order { line: usize, n: usize },
    #[error("line {line}: edge {u} {v} needs 1 <= u < v <= {n}")]
    Endpoint { line: usize, u: usize, v: usize, n: usize },
    #[error("line {line}: duplicate edge {u} {v}")]
    Duplicate { line: usize, u: usize, v: usize },
    #[error("header announces {expected} edges, found {found}")]
    EdgeCount { expected: usize, found: usize },
}

fn pair(line: usize, text: &str) -> Result<(usize, usize), GraphFileError> {
    let bad = || GraphFileError::Syntax {
        line,
        text: text.to_string(),
    };
    let mut it = text.split_whitespace();
    let a = it.next().and_then(|s| s.parse().ok()).ok_or_else(bad)?;
    let b = it.next().and_then(|s| s.parse().ok()).ok_or_else(bad)?;
    if it.next().is_some() {
        return Err(bad());
    }
    Ok((a, b))
}

pub fn parse(text: &str) -> Result<LabeledGraph, GraphFileError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());

    let (hline, header) = lines.next().ok_or(GraphFileError::MissingHeader)?;
    let (n, m) = pair(hline, header)?;
    if n == 0 || n > MAX_NODES {
        return Err(GraphFileError::Order { line: hline, n });
    }

    let mut g = LabeledGraph::empty(n);
    let mut found = 0;
    for (line, text) in lines {
        let (u, v) = pair(line, text)?;
        if u < 1 || u >= v || v > n {
            return Err(GraphFileError::Endpoint { line, u, v, n });
        }
        if g.has_edge(u - 1, v - 1) {
            return Err(GraphFileError::Duplicate { line, u, v });
        }
        g.add_edge(u - 1, v - 1);
        found += 1;
    }
    if found != m {
        return Err(GraphFileError::EdgeCount { expected: m, found });
    }
    Ok(g)
}

pub fn read(path: &Path) -> Result<LabeledGraph, GraphFileError> {
    let text = fs::read_to_string(path).map_err(|source| GraphFileError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse(&text)
}

/// Edges in lexicographic order, so `parse(&format(g)) == g`.
pub fn format(g: &LabeledGraph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.edge_count());
    for (u, v) in g.edges() {
        writeln!(out, "{} {}", u + 1, v + 1).unwrap();
    }
    out
}
