//! Plain-text instance files.
//!
//! ```text
//! 3 2          # n m
//! 0 1          # m edge lines, 0-based endpoints
//! 1 2
//! T: 1         # transversal set, may be empty
//! U: 0 1       # optional partition blocks (edge ids)
//! names: u x v # optional vertex labels, one per vertex id
//! ```
//!
//! `#` starts a comment. Blank lines are ignored.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::graph::{EdgePartition, MultiGraph, Transversal, VertexId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub graph: MultiGraph,
    pub transversal: Transversal,
    pub partition: EdgePartition,
    pub names: Option<Vec<String>>,
}

impl Instance {
    pub fn new(graph: MultiGraph) -> Self {
        let partition = EdgePartition::singletons(&graph);
        Instance {
            graph,
            transversal: Transversal::empty(),
            partition,
            names: None,
        }
    }

    pub fn with_transversal(mut self, t: Transversal) -> Self {
        self.transversal = t;
        self
    }

    pub fn with_names(mut self, names: &[&str]) -> Self {
        self.names = Some(names.iter().map(|s| s.to_string()).collect());
        self
    }

    /// Resolves a vertex label or a plain integer id.
    pub fn resolve(&self, label: &str) -> Result<VertexId> {
        if let Some(names) = &self.names {
            if let Some(i) = names.iter().position(|n| n == label) {
                return Ok(i);
            }
        }
        let id: VertexId = label.parse().map_err(|_| Error::UnknownName {
            name: label.to_string(),
            known: self
                .names
                .as_ref()
                .map(|n| n.join(", "))
                .unwrap_or_else(|| "integer ids".into()),
        })?;
        self.graph.check_vertex(id)?;
        Ok(id)
    }

    pub fn label(&self, v: VertexId) -> String {
        match &self.names {
            Some(names) => names[v].clone(),
            None => v.to_string(),
        }
    }

    /// Canonical text rendering; `parse(render(i)) == i`.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let g = &self.graph;
        let _ = writeln!(out, "{} {}", g.vertex_count(), g.edge_count());
        for &(a, b) in g.edges() {
            let _ = writeln!(out, "{a} {b}");
        }
        let t: Vec<String> = self.transversal.members().iter().map(|v| v.to_string()).collect();
        if t.is_empty() {
            out.push_str("T:\n");
        } else {
            let _ = writeln!(out, "T: {}", t.join(" "));
        }
        if !self.partition.is_all_singletons() {
            for block in self.partition.blocks() {
                let ids: Vec<String> = block.iter().map(|e| e.to_string()).collect();
                let _ = writeln!(out, "U: {}", ids.join(" "));
            }
        }
        if let Some(names) = &self.names {
            let _ = writeln!(out, "names: {}", names.join(" "));
        }
        out
    }

    /// SHA-256 of the canonical rendering, hex encoded.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.render().as_bytes()))
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_ids(line: usize, text: &str, what: &str) -> Result<Vec<usize>> {
    text.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>()
                .map_err(|_| parse_err(line, format!("bad {what} `{tok}`")))
        })
        .collect()
}

pub fn parse(text: &str) -> Result<Instance> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (header_line, header) = lines.next().ok_or_else(|| parse_err(1, "missing `n m` header"))?;
    let header = parse_ids(header_line, header, "count")?;
    let [n, m] = header[..] else {
        return Err(parse_err(header_line, "header must be `n m`"));
    };

    let mut edges = Vec::with_capacity(m);
    for k in 0..m {
        let (line, body) = lines
            .next()
            .ok_or_else(|| parse_err(header_line, format!("expected {m} edges, found {k}")))?;
        let ids = parse_ids(line, body, "endpoint")?;
        let [a, b] = ids[..] else {
            return Err(parse_err(line, "edge line must be `a b`"));
        };
        if a >= n || b >= n {
            return Err(parse_err(line, format!("endpoint out of range 0..{n}")));
        }
        if a == b {
            return Err(parse_err(line, format!("loop at vertex {a}")));
        }
        edges.push((a, b));
    }
    let graph = MultiGraph::new(n, edges)?;

    let mut transversal = None;
    let mut blocks: Vec<(usize, Vec<usize>)> = Vec::new();
    let mut names = None;
    for (line, body) in lines {
        if let Some(rest) = body.strip_prefix("T:") {
            if transversal.is_some() {
                return Err(parse_err(line, "duplicate `T:` line"));
            }
            let ids = parse_ids(line, rest, "vertex")?;
            if let Some(&bad) = ids.iter().find(|&&v| v >= n) {
                return Err(parse_err(line, format!("transversal vertex {bad} out of range")));
            }
            transversal = Some(Transversal::new(ids));
        } else if let Some(rest) = body.strip_prefix("U:") {
            let ids = parse_ids(line, rest, "edge id")?;
            if ids.is_empty() {
                return Err(parse_err(line, "empty `U:` block"));
            }
            if let Some(&bad) = ids.iter().find(|&&e| e >= m) {
                return Err(parse_err(line, format!("edge id {bad} out of range")));
            }
            blocks.push((line, ids));
        } else if let Some(rest) = body.strip_prefix("names:") {
            let list: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
            if list.len() != n {
                return Err(parse_err(line, format!("expected {n} names, found {}", list.len())));
            }
            let distinct: BTreeSet<&String> = list.iter().collect();
            if distinct.len() != n {
                return Err(parse_err(line, "vertex names must be distinct"));
            }
            names = Some(list);
        } else {
            return Err(parse_err(line, format!("unrecognised line `{body}`")));
        }
    }
    let transversal = transversal.ok_or_else(|| parse_err(header_line, "missing `T:` line"))?;

    let partition = if blocks.is_empty() {
        EdgePartition::singletons(&graph)
    } else {
        let last = blocks.last().map(|(l, _)| *l).unwrap_or(header_line);
        let mut seen = BTreeSet::new();
        for (line, ids) in &blocks {
            for &e in ids {
                if !seen.insert(e) {
                    return Err(parse_err(*line, format!("edge {e} appears in two blocks")));
                }
            }
        }
        if seen.len() != m {
            return Err(parse_err(last, "`U:` blocks do not cover every edge"));
        }
        EdgePartition::new(&graph, blocks.into_iter().map(|(_, b)| b).collect())
            .map_err(|e| parse_err(last, e.to_string()))?
    };

    Ok(Instance {
        graph,
        transversal,
        partition,
        names,
    })
}
