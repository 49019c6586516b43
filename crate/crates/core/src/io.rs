//! Plain-text edge-list formats.
//!
//! ```text
//! n=4
//! # comment
//! 0 1 2
//! 0 1 3
//! ```
//!
//! Hypergraph files carry three integers per line, graph files two. Blank
//! lines and lines starting with `#` are skipped. Serialization emits the
//! header followed by edges in ascending canonical order with LF endings.

use std::fmt::Write as _;

use thiserror::Error;

use crate::hypergraph::{pair, Graph, Hypergraph3, Triple, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    fn at(line: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            message: message.into(),
        }
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_header(line_no: usize, line: &str) -> Result<usize, ParseError> {
    let value = line
        .strip_prefix("n=")
        .ok_or_else(|| ParseError::at(line_no, format!("expected header `n=<int>`, found `{line}`")))?;
    value
        .trim()
        .parse::<usize>()
        .map_err(|_| ParseError::at(line_no, format!("invalid vertex count `{value}`")))
}

fn parse_row<const K: usize>(line_no: usize, line: &str, n: usize) -> Result<[Vertex; K], ParseError> {
    let mut out = [0 as Vertex; K];
    let mut fields = line.split_whitespace();
    for slot in out.iter_mut() {
        let tok = fields
            .next()
            .ok_or_else(|| ParseError::at(line_no, format!("expected {K} vertices")))?;
        let v: Vertex = tok
            .parse()
            .map_err(|_| ParseError::at(line_no, format!("invalid vertex `{tok}`")))?;
        if v as usize >= n {
            return Err(ParseError::at(line_no, format!("vertex {v} out of range for n={n}")));
        }
        *slot = v;
    }
    if let Some(extra) = fields.next() {
        return Err(ParseError::at(line_no, format!("unexpected trailing field `{extra}`")));
    }
    Ok(out)
}

fn header_of(text: &str) -> Result<(usize, impl Iterator<Item = (usize, &str)>), ParseError> {
    let mut lines = content_lines(text);
    let (line_no, first) = lines
        .next()
        .ok_or_else(|| ParseError::at(1, "missing header `n=<int>`"))?;
    Ok((parse_header(line_no, first)?, lines))
}

/// Parses a hypergraph; duplicate triples collapse.
pub fn parse_hypergraph(text: &str) -> Result<Hypergraph3, ParseError> {
    let (n, lines) = header_of(text)?;
    let mut edges = Vec::new();
    for (line_no, line) in lines {
        let [a, b, c] = parse_row::<3>(line_no, line, n)?;
        let t = Triple::new(a, b, c).map_err(|e| ParseError::at(line_no, e.to_string()))?;
        edges.push(t);
    }
    Ok(Hypergraph3::new(n, edges).expect("vertices range-checked during parsing"))
}

pub fn serialize_hypergraph(h: &Hypergraph3) -> String {
    let mut out = String::with_capacity(8 + h.edge_count() * 12);
    let _ = writeln!(out, "n={}", h.n());
    for t in h.edges() {
        let [a, b, c] = t.vertices();
        let _ = writeln!(out, "{a} {b} {c}");
    }
    out
}

/// Parses a graph edge list. The vertex set is all of `0..n`.
pub fn parse_graph(text: &str) -> Result<Graph, ParseError> {
    let (n, lines) = header_of(text)?;
    let mut edges = Vec::new();
    for (line_no, line) in lines {
        let [a, b] = parse_row::<2>(line_no, line, n)?;
        if a == b {
            return Err(ParseError::at(line_no, format!("self-loop at vertex {a}")));
        }
        edges.push(pair(a, b));
    }
    Ok(Graph::new(n, 0..n as Vertex, edges).expect("vertices range-checked during parsing"))
}

pub fn serialize_graph(g: &Graph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "n={}", g.universe());
    for (a, b) in g.edges() {
        let _ = writeln!(out, "{a} {b}");
    }
    out
}
