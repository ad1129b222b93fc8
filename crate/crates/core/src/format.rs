//! Plain-text formats for hypergraphs and pinnings.
//!
//! Hypergraph file:
//!
//! ```text
//! # comment lines start with '#'
//! 3 2          <- "n m"
//! 0 1 2        <- one line per hyperedge, vertex indices
//! 1 2
//! ```
//!
//! An empty hyperedge is written as a single `-`. Blank lines are ignored.
//!
//! Pinning file: one `v 0` (unoccupied) or `v 1` (occupied) per line.

use std::fmt::Write as _;

use crate::error::ParseError;
use crate::hypergraph::{Hypergraph, Pinning, Spin};

/// Non-comment, non-blank lines with their 1-based line numbers.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub(crate) fn parse_usize(line: usize, tok: &str) -> Result<usize, ParseError> {
    tok.parse()
        .map_err(|_| ParseError::syntax(line, format!("expected a nonnegative integer, got {tok:?}")))
}

pub(crate) fn parse_header(
    lines: &mut dyn Iterator<Item = (usize, &str)>,
    what: &str,
) -> Result<(usize, usize), ParseError> {
    let (ln, header) = lines
        .next()
        .ok_or_else(|| ParseError::Truncated(format!("missing {what} header")))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 2 {
        return Err(ParseError::syntax(ln, "header must be \"n m\""));
    }
    Ok((parse_usize(ln, toks[0])?, parse_usize(ln, toks[1])?))
}

pub fn parse_hypergraph(text: &str) -> Result<Hypergraph, ParseError> {
    let mut lines = content_lines(text);
    let (n, m) = parse_header(&mut lines, "hypergraph")?;
    let mut edges = Vec::with_capacity(m);
    for idx in 0..m {
        let (ln, line) = lines
            .next()
            .ok_or_else(|| ParseError::Truncated(format!("expected {m} edges, found {idx}")))?;
        if line == "-" {
            edges.push(Vec::new());
            continue;
        }
        let edge = line
            .split_whitespace()
            .map(|t| parse_usize(ln, t))
            .collect::<Result<Vec<_>, _>>()?;
        edges.push(edge);
    }
    if let Some((ln, _)) = lines.next() {
        return Err(ParseError::syntax(ln, "trailing content after the last edge"));
    }
    Ok(Hypergraph::new(n, edges)?)
}

pub fn write_hypergraph(h: &Hypergraph) -> String {
    let mut out = String::new();
    writeln!(out, "{} {}", h.num_vertices(), h.num_edges()).unwrap();
    for edge in h.edges() {
        out.push_str(&edge_line(edge));
        out.push('\n');
    }
    out
}

pub(crate) fn edge_line(edge: &[usize]) -> String {
    if edge.is_empty() {
        "-".to_string()
    } else {
        edge.iter()
            .map(usize::to_string)
            .collect::<Vec<_>>()
            .join(" ")
    }
}

pub fn parse_pinning(text: &str) -> Result<Pinning, ParseError> {
    let mut pinning = Pinning::new();
    for (ln, line) in content_lines(text) {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(ParseError::syntax(ln, "expected \"v 0\" or \"v 1\""));
        }
        let v = parse_usize(ln, toks[0])?;
        let spin = match toks[1] {
            "0" => Spin::Unoccupied,
            "1" => Spin::Occupied,
            other => {
                return Err(ParseError::syntax(
                    ln,
                    format!("state must be 0 or 1, got {other:?}"),
                ))
            }
        };
        pinning.pin(v, spin);
    }
    Ok(pinning)
}

pub fn write_pinning(p: &Pinning) -> String {
    let mut out = String::new();
    for (v, s) in p.iter() {
        let bit = match s {
            Spin::Occupied => 1,
            Spin::Unoccupied => 0,
        };
        writeln!(out, "{v} {bit}").unwrap();
    }
    out
}
