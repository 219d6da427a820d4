//! Line-oriented graph text format.
//!
//! ```text
//! c any comment
//! p edp <n> <m>
//! s <source>
//! a <tail> <head> <cost>
//! ```
//!
//! Vertices are 1-based in the file and 0-based in memory. Edge ids follow
//! the order of the `a` lines. Costs are non-negative integers; with a
//! non-zero [`ParseOptions::cost_scale`] they may carry up to that many
//! decimal places and are stored multiplied by `10^cost_scale`.

use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{Cost, Digraph, GraphError, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("expected `p edp <n> <m>` header before any other line")]
    MissingHeader,
    #[error("duplicate `p` header")]
    DuplicateHeader,
    #[error("malformed line: {0}")]
    Malformed(String),
    #[error("unknown line type `{0}`")]
    UnknownLine(String),
    #[error("negative cost {0}")]
    NegativeCost(String),
    #[error("invalid cost `{0}`")]
    BadCost(String),
    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: u64, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(u64),
    #[error("duplicate `s` line")]
    DuplicateSource,
    #[error("missing `s` line")]
    MissingSource,
    #[error("header declares {declared} edges but {found} `a` lines were found")]
    EdgeCountMismatch { declared: usize, found: usize },
    #[error("costs overflow 64-bit arithmetic")]
    CostOverflow,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ParseOptions {
    /// Number of decimal places accepted in costs.
    pub cost_scale: u32,
}

pub fn parse_graph(text: &str) -> Result<(Digraph, VertexId), ParseError> {
    parse_graph_with(text, ParseOptions::default())
}

pub fn parse_graph_with(text: &str, opts: ParseOptions) -> Result<(Digraph, VertexId), ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut source: Option<VertexId> = None;
    let mut edges: Vec<(VertexId, VertexId, Cost)> = Vec::new();
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let err = |kind| ParseError { line, kind };
        let mut fields = raw.split_whitespace();
        let Some(tag) = fields.next() else { continue };
        if tag == "c" {
            continue;
        }
        let rest: Vec<&str> = fields.collect();
        match tag {
            "p" => {
                if header.is_some() {
                    return Err(err(ParseErrorKind::DuplicateHeader));
                }
                if rest.len() != 3 || rest[0] != "edp" {
                    return Err(err(ParseErrorKind::Malformed(raw.trim().to_string())));
                }
                let n = parse_count(rest[1]).ok_or_else(|| err(malformed(raw)))?;
                let m = parse_count(rest[2]).ok_or_else(|| err(malformed(raw)))?;
                header = Some((n, m));
                edges.reserve(m);
            }
            _ if header.is_none() => return Err(err(ParseErrorKind::MissingHeader)),
            "s" => {
                let (n, _) = header.unwrap();
                if source.is_some() {
                    return Err(err(ParseErrorKind::DuplicateSource));
                }
                if rest.len() != 1 {
                    return Err(err(malformed(raw)));
                }
                source = Some(parse_vertex(rest[0], n).map_err(err)?);
            }
            "a" => {
                let (n, _) = header.unwrap();
                if rest.len() != 3 {
                    return Err(err(malformed(raw)));
                }
                let tail = parse_vertex(rest[0], n).map_err(err)?;
                let head = parse_vertex(rest[1], n).map_err(err)?;
                if tail == head {
                    return Err(err(ParseErrorKind::SelfLoop(tail as u64 + 1)));
                }
                let cost = parse_cost(rest[2], opts.cost_scale).map_err(err)?;
                edges.push((tail, head, cost));
            }
            other => return Err(err(ParseErrorKind::UnknownLine(other.to_string()))),
        }
    }

    let line = last_line.max(1);
    let (n, m) = header.ok_or(ParseError {
        line,
        kind: ParseErrorKind::MissingHeader,
    })?;
    let source = source.ok_or(ParseError {
        line,
        kind: ParseErrorKind::MissingSource,
    })?;
    if edges.len() != m {
        return Err(ParseError {
            line,
            kind: ParseErrorKind::EdgeCountMismatch {
                declared: m,
                found: edges.len(),
            },
        });
    }
    let g = Digraph::new(n, edges).map_err(|e| ParseError {
        line,
        kind: match e {
            GraphError::CostOverflow => ParseErrorKind::CostOverflow,
            other => ParseErrorKind::Malformed(other.to_string()),
        },
    })?;
    Ok((g, source))
}

/// Serializes `g` with integer costs. `parse_graph(write_graph(g, s))`
/// reproduces `g` and `s` exactly.
pub fn write_graph(g: &Digraph, source: VertexId) -> String {
    let mut out = String::with_capacity(16 * (g.edge_count() + 2));
    writeln!(out, "p edp {} {}", g.vertex_count(), g.edge_count()).unwrap();
    writeln!(out, "s {}", source + 1).unwrap();
    for e in g.edges() {
        writeln!(out, "a {} {} {}", e.tail + 1, e.head + 1, e.cost).unwrap();
    }
    out
}

fn malformed(raw: &str) -> ParseErrorKind {
    ParseErrorKind::Malformed(raw.trim().to_string())
}

fn parse_count(s: &str) -> Option<usize> {
    s.parse().ok()
}

fn parse_vertex(s: &str, n: usize) -> Result<VertexId, ParseErrorKind> {
    let v: u64 = s
        .parse()
        .map_err(|_| ParseErrorKind::Malformed(format!("bad vertex `{s}`")))?;
    if v == 0 || v > n as u64 {
        return Err(ParseErrorKind::VertexOutOfRange { vertex: v, n });
    }
    Ok((v - 1) as VertexId)
}

fn parse_cost(s: &str, scale: u32) -> Result<Cost, ParseErrorKind> {
    if s.starts_with('-') {
        return Err(ParseErrorKind::NegativeCost(s.to_string()));
    }
    let bad = || ParseErrorKind::BadCost(s.to_string());
    let (int_part, frac_part) = match s.split_once('.') {
        Some((i, f)) => (i, f),
        None => (s, ""),
    };
    let digits_only = |p: &str| p.bytes().all(|b| b.is_ascii_digit());
    if int_part.is_empty() || !digits_only(int_part) || !digits_only(frac_part) {
        return Err(bad());
    }
    if s.contains('.') && frac_part.is_empty() {
        return Err(bad());
    }
    if frac_part.len() > scale as usize {
        return Err(bad());
    }
    let overflow = || ParseErrorKind::CostOverflow;
    let mut value: Cost = int_part.parse().map_err(|_| overflow())?;
    let factor = 10i64.checked_pow(scale).ok_or_else(overflow)?;
    value = value.checked_mul(factor).ok_or_else(overflow)?;
    if !frac_part.is_empty() {
        let frac: Cost = frac_part.parse().map_err(|_| overflow())?;
        let frac_factor = 10i64.pow(scale - frac_part.len() as u32);
        value = value.checked_add(frac * frac_factor).ok_or_else(overflow)?;
    }
    Ok(value)
}
