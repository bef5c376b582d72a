//! Plain-text graph files.
//!
//! ```text
//! # optional comments
//! n m
//! u v
//! u v mult
//! ```
//!
//! The header gives the vertex count and the number of edge lines that
//! follow. Vertices are 0-indexed; a missing multiplicity means 1. Text after
//! `#` on any line is ignored.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use icegraph_core::Graph;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("expected {expected} edge lines, found {found}")]
    EdgeCount { expected: usize, found: usize },
    #[error("empty graph file")]
    Empty,
    #[error(transparent)]
    Graph(#[from] icegraph_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        message: message.into(),
    }
}

fn numbers(line_no: usize, text: &str) -> Result<Vec<usize>, ParseError> {
    text.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>()
                .map_err(|_| syntax(line_no, format!("expected a nonnegative integer, got {tok:?}")))
        })
        .collect()
}

/// Parses the graph file format.
pub fn from_edge_list(text: &str) -> Result<Graph, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (header_line, header) = lines.next().ok_or(ParseError::Empty)?;
    let header = numbers(header_line, header)?;
    let [n, m] = header[..] else {
        return Err(syntax(header_line, "header must be \"n m\""));
    };

    let mut edges = Vec::with_capacity(m);
    for (line_no, line) in lines {
        let fields = numbers(line_no, line)?;
        let (u, v, mult) = match fields[..] {
            [u, v] => (u, v, 1),
            [u, v, k] => (u, v, k),
            _ => return Err(syntax(line_no, "edge line must be \"u v\" or \"u v mult\"")),
        };
        if u == v {
            return Err(syntax(line_no, format!("loop at vertex {u}")));
        }
        if u >= n || v >= n {
            return Err(syntax(line_no, format!("vertex out of range 0..{n}")));
        }
        if mult == 0 {
            return Err(syntax(line_no, "multiplicity must be at least 1"));
        }
        let mult = u32::try_from(mult).map_err(|_| syntax(line_no, "multiplicity too large"))?;
        edges.push((u, v, mult));
    }
    if edges.len() != m {
        return Err(ParseError::EdgeCount {
            expected: m,
            found: edges.len(),
        });
    }
    Ok(Graph::new(n, edges)?)
}

/// Serialises a graph; [`from_edge_list`] reads it back unchanged.
pub fn to_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", g.n(), g.edges().len());
    for e in g.edges() {
        if e.mult == 1 {
            let _ = writeln!(out, "{} {}", e.u, e.v);
        } else {
            let _ = writeln!(out, "{} {} {}", e.u, e.v, e.mult);
        }
    }
    out
}

pub fn read_graph(path: &Path) -> Result<Graph, ParseError> {
    let text = fs::read_to_string(path).map_err(|source| ParseError::Io {
        path: path.display().to_string(),
        source,
    })?;
    from_edge_list(&text)
}
