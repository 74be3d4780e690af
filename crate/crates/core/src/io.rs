//! Graph text format and DOT export.
//!
//! ```text
//! # comment
//! 4            number of active vertices
//! 0 1          one edge per line, 0-based ids
//! 1 2
//! L 0 1 1      optional label: id row col (1-based row/col)
//! V 7          optional: explicit vertex id
//! ```
//!
//! Without `V` lines the vertices are `0..n`. When a graph's ids are not
//! exactly `0..n` (after deletions, for instance) the writer emits one `V`
//! line per vertex so ids survive a round trip.

use std::collections::HashSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{check_labels_unique, Graph, Label, VertexId};

pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut n: Option<usize> = None;
    let mut explicit: Vec<VertexId> = Vec::new();
    let mut edges: Vec<(usize, VertexId, VertexId)> = Vec::new();
    let mut labels: Vec<(usize, VertexId, Label)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: &str| Error::Parse {
            line: lineno,
            msg: msg.to_string(),
        };
        let toks: Vec<&str> = line.split_whitespace().collect();
        let num = |s: &str| s.parse::<u32>().map_err(|_| err(&format!("bad integer `{s}`")));
        if n.is_none() {
            if toks.len() != 1 {
                return Err(err("expected the vertex count"));
            }
            n = Some(num(toks[0])? as usize);
            continue;
        }
        match toks[0] {
            "L" => {
                if toks.len() != 4 {
                    return Err(err("label lines are `L id row col`"));
                }
                labels.push((
                    lineno,
                    VertexId(num(toks[1])?),
                    Label::new(num(toks[2])?, num(toks[3])?),
                ));
            }
            "V" => {
                if toks.len() != 2 {
                    return Err(err("vertex lines are `V id`"));
                }
                explicit.push(VertexId(num(toks[1])?));
            }
            _ => {
                if toks.len() != 2 {
                    return Err(err("edge lines are `u v`"));
                }
                edges.push((lineno, VertexId(num(toks[0])?), VertexId(num(toks[1])?)));
            }
        }
    }

    let n = n.ok_or(Error::Parse {
        line: 0,
        msg: "missing vertex count".into(),
    })?;
    let mut g = if explicit.is_empty() {
        Graph::new(n)
    } else {
        let distinct: HashSet<_> = explicit.iter().collect();
        if distinct.len() != explicit.len() || explicit.len() != n {
            return Err(Error::Parse {
                line: 0,
                msg: format!("{} distinct V lines for {n} vertices", distinct.len()),
            });
        }
        Graph::with_vertices(explicit)
    };
    for (line, u, v) in edges {
        g.add_edge(u, v).map_err(|e| Error::Parse {
            line,
            msg: e.to_string(),
        })?;
    }
    for (line, v, l) in labels {
        if !g.contains(v) {
            return Err(Error::Parse {
                line,
                msg: format!("label for unknown vertex {v}"),
            });
        }
        g.set_label_unchecked(v, l);
    }
    check_labels_unique(&g)?;
    Ok(g)
}

pub fn write_graph(g: &Graph) -> String {
    let mut out = String::new();
    writeln!(out, "{}", g.order()).unwrap();
    let contiguous = g.vertices().enumerate().all(|(i, v)| v.index() == i);
    if !contiguous {
        for v in g.vertices() {
            writeln!(out, "V {v}").unwrap();
        }
    }
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    for (v, l) in g.labels() {
        writeln!(out, "L {v} {} {}", l.row, l.col).unwrap();
    }
    out
}

pub fn to_dot(g: &Graph) -> String {
    let mut out = String::from("graph G {\n");
    for v in g.vertices() {
        match g.label(v) {
            Some(l) => writeln!(out, "  {v} [label=\"{v} ({},{})\"];", l.row, l.col).unwrap(),
            None => writeln!(out, "  {v};").unwrap(),
        }
    }
    for (u, v) in g.edges() {
        writeln!(out, "  {u} -- {v};").unwrap();
    }
    out.push_str("}\n");
    out
}
