//! The `.shg` text format.
//!
//! ```text
//! s 3 n 4
//! # comment
//! 1 2 3
//! 3 4 1
//! ```
//!
//! Vertices are `1..=n`, or `0..n` when every label fits that range. Other
//! label sets are given by a `#! vertices ...` line, which ordinary readers
//! treat as a comment.

use std::fmt::Write as _;
use std::path::Path;

use super::{Hypergraph, Vertex};
use crate::{Error, Result};

const PRAGMA: &str = "#! vertices";

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::Format {
        line,
        msg: msg.into(),
    }
}

pub fn parse(text: &str) -> Result<Hypergraph> {
    let mut header: Option<(usize, usize)> = None;
    let mut listed: Option<Vec<Vertex>> = None;
    let mut edges: Vec<(usize, Vec<Vertex>)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if let Some(rest) = trimmed.strip_prefix(PRAGMA) {
            let vs = rest
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| err(line, format!("bad vertex label {t:?}"))))
                .collect::<Result<Vec<Vertex>>>()?;
            listed = Some(vs);
            continue;
        }
        let body = trimmed.split('#').next().unwrap().trim();
        if body.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = body.split_whitespace().collect();
        if header.is_none() {
            match tokens.as_slice() {
                ["s", s, "n", n] => {
                    let s = s.parse().map_err(|_| err(line, "bad arity"))?;
                    let n = n.parse().map_err(|_| err(line, "bad vertex count"))?;
                    header = Some((s, n));
                }
                _ => return Err(err(line, "expected header `s <arity> n <count>`")),
            }
            continue;
        }
        let edge = tokens
            .iter()
            .map(|t| t.parse().map_err(|_| err(line, format!("bad vertex label {t:?}"))))
            .collect::<Result<Vec<Vertex>>>()?;
        edges.push((line, edge));
    }
    let (s, n) = header.ok_or_else(|| err(0, "missing header"))?;
    let vertices: Vec<Vertex> = match listed {
        Some(vs) => vs,
        None => {
            let labels = || edges.iter().flat_map(|(_, e)| e.iter().copied());
            if labels().all(|v| (1..=n as Vertex).contains(&v)) {
                (1..=n as Vertex).collect()
            } else if labels().all(|v| (0..n as Vertex).contains(&v)) {
                (0..n as Vertex).collect()
            } else {
                return Err(err(0, "edge labels outside 1..=n; add a `#! vertices` line"));
            }
        }
    };
    let mut g = Hypergraph::with_vertices(s, vertices.iter().copied())?;
    if g.v() != n || vertices.len() != n {
        return Err(err(0, format!("header says {n} vertices, found {}", vertices.len())));
    }
    for (line, e) in edges {
        if let Some(v) = e.iter().find(|v| !g.contains_vertex(**v)) {
            return Err(err(line, format!("vertex {v} not declared")));
        }
        match g.add_edge(&e) {
            Ok(true) => {}
            Ok(false) => return Err(err(line, "duplicate edge")),
            Err(e) => return Err(err(line, e.to_string())),
        }
    }
    Ok(g)
}

pub fn to_string(g: &Hypergraph) -> String {
    let mut out = format!("s {} n {}\n", g.arity(), g.v());
    let contiguous = g.vertices().eq(1..=g.v() as Vertex);
    if !contiguous {
        out.push_str(PRAGMA);
        for v in g.vertices() {
            write!(out, " {v}").unwrap();
        }
        out.push('\n');
    }
    for e in g.edges() {
        let row: Vec<String> = e.iter().map(|v| v.to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn read(path: impl AsRef<Path>) -> Result<Hypergraph> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Domain(format!("cannot read {}: {e}", path.display())))?;
    parse(&text)
}

pub fn write(path: impl AsRef<Path>, g: &Hypergraph) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, to_string(g))
        .map_err(|e| Error::Domain(format!("cannot write {}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_basic() {
        let g = parse("s 3 n 4\n# H1\n1 2 3\n3 4 1 # closing edge\n").unwrap();
        assert_eq!((g.arity(), g.v(), g.e()), (3, 4, 2));
        assert!(g.has_edge(&[1, 3, 4]));
        let zero = parse("s 3 n 3\n0 1 2\n").unwrap();
        assert_eq!(zero.vertices().collect::<Vec<_>>(), vec![0, 1, 2]);
        let isolated = parse("s 3 n 5\n1 2 3\n").unwrap();
        assert_eq!(isolated.isolated_vertices(), vec![4, 5]);
    }

    #[test]
    fn round_trip() {
        let g = Hypergraph::from_edges(3, [[10, 20, 30], [30, 40, -5]], [99]).unwrap();
        assert_eq!(parse(&to_string(&g)).unwrap(), g);
        let h = Hypergraph::from_edges(4, [[1, 2, 3, 4]], [5]).unwrap();
        let text = to_string(&h);
        assert!(!text.contains(PRAGMA));
        assert_eq!(parse(&text).unwrap(), h);
        let empty = Hypergraph::new(3).unwrap();
        assert_eq!(parse(&to_string(&empty)).unwrap(), empty);
    }

    #[test]
    fn errors() {
        assert!(matches!(parse("1 2 3\n"), Err(Error::Format { line: 1, .. })));
        assert!(matches!(parse("s 3 n 3\n1 2\n"), Err(Error::Format { line: 2, .. })));
        assert!(matches!(parse("s 3 n 3\n1 2 3\n3 2 1\n"), Err(Error::Format { line: 3, .. })));
        assert!(parse("s 3 n 3\n1 2 7\n").is_err());
        assert!(parse("").is_err());
    }
}
