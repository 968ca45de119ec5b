//! Edge-list text format.
//!
//! ```text
//! # comment
//! n m
//! u v
//! ...
//! ```
//!
//! Vertex ids are 0-based. Blank lines and `#` comments are ignored anywhere.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::{Error, Graph, Result};

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

fn parse_pair(line_no: usize, line: &str) -> Result<(usize, usize)> {
    let mut parts = line.split_whitespace();
    let mut next = |what: &str| -> Result<usize> {
        let tok = parts.next().ok_or_else(|| Error::Parse {
            line: line_no,
            message: format!("missing {what}"),
        })?;
        tok.parse().map_err(|_| Error::Parse {
            line: line_no,
            message: format!("{what} {tok:?} is not a non-negative integer"),
        })
    };
    let a = next("first field")?;
    let b = next("second field")?;
    if parts.next().is_some() {
        return Err(Error::Parse {
            line: line_no,
            message: "expected exactly two fields".into(),
        });
    }
    Ok((a, b))
}

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut lines = content_lines(text);
    let (header_line, header) = lines.next().ok_or(Error::Parse {
        line: 0,
        message: "empty edge list (expected header `n m`)".into(),
    })?;
    let (n, m) = parse_pair(header_line, header)?;
    let mut edges = Vec::with_capacity(m);
    let mut last_line = header_line;
    for (line_no, line) in lines {
        let (u, v) = parse_pair(line_no, line)?;
        if u >= n || v >= n {
            return Err(Error::Parse {
                line: line_no,
                message: format!("edge ({u}, {v}) has an endpoint outside 0..{n}"),
            });
        }
        if u == v {
            return Err(Error::Parse {
                line: line_no,
                message: format!("self-loop on vertex {u}"),
            });
        }
        edges.push((u, v));
        last_line = line_no;
    }
    if edges.len() != m {
        return Err(Error::Parse {
            line: last_line,
            message: format!("header declares {m} edges but {} were found", edges.len()),
        });
    }
    Graph::from_edges(n, edges)
}

pub fn write_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    writeln!(out, "{} {}", g.n(), g.edge_count()).unwrap();
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

pub fn read_edge_list(path: impl AsRef<Path>) -> Result<Graph> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::from(e).in_file(path))?;
    parse_edge_list(&text).map_err(|e| e.in_file(path))
}

pub fn save_edge_list(g: &Graph, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, write_edge_list(g))?;
    Ok(())
}

/// Headerless `a b` lines with arbitrary tokens as vertex labels.
///
/// Labels are remapped to dense ids in order of first appearance; the returned
/// vector maps each id back to its label. Self-loops are dropped, since real-world
/// edge dumps often contain them and they do not affect domination.
pub fn parse_labeled_edge_list(text: &str) -> Result<(Graph, Vec<String>)> {
    let mut ids: HashMap<&str, usize> = HashMap::new();
    let mut labels = Vec::new();
    let mut edges = Vec::new();
    for (line_no, line) in content_lines(text) {
        let mut parts = line.split_whitespace();
        let (Some(a), Some(b), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(Error::Parse {
                line: line_no,
                message: "expected exactly two fields".into(),
            });
        };
        let mut id = |tok| {
            *ids.entry(tok).or_insert_with(|| {
                labels.push(String::from(tok));
                labels.len() - 1
            })
        };
        let (u, v) = (id(a), id(b));
        if u != v {
            edges.push((u, v));
        }
    }
    let g = Graph::from_edges(labels.len(), edges)?;
    Ok((g, labels))
}
