//! Exhaustive instance generation and conjecture scans.

mod figure2;
mod scan;

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::canon::{canonical_form, CanonicalForm};
use crate::error::{Error, Result};
use crate::graph::MultiGraph;
use crate::minor::is_outerplanar;

pub use figure2::{find_figure2, Figure2Match, Figure2Report};
pub use scan::{scan_conjecture, InstanceRecord, ScanOptions, ScanReport, ScanVariant};

pub const MAX_ENUMERATED_VERTICES: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InstanceFilter {
    pub min_vertices: usize,
    pub max_vertices: usize,
    pub max_edges: Option<usize>,
    pub connected_only: bool,
    pub outerplanar_only: bool,
    /// Allow parallel edges, up to `max_multiplicity` copies.
    pub multigraph: bool,
    pub max_multiplicity: u8,
}

impl InstanceFilter {
    /// Connected simple graphs on `1..=max_vertices` vertices.
    pub fn connected(max_vertices: usize) -> Self {
        InstanceFilter {
            min_vertices: 1,
            max_vertices,
            max_edges: None,
            connected_only: true,
            outerplanar_only: false,
            multigraph: false,
            max_multiplicity: 1,
        }
    }

    pub fn with_min_vertices(mut self, n: usize) -> Self {
        self.min_vertices = n;
        self
    }

    pub fn with_max_edges(mut self, m: usize) -> Self {
        self.max_edges = Some(m);
        self
    }

    pub fn outerplanar(mut self) -> Self {
        self.outerplanar_only = true;
        self
    }

    pub fn multigraphs(mut self, max_multiplicity: u8) -> Self {
        self.multigraph = true;
        self.max_multiplicity = max_multiplicity.max(1);
        self
    }

    fn validate(&self) -> Result<()> {
        if self.max_vertices > MAX_ENUMERATED_VERTICES {
            return Err(Error::guard(
                "enumerated vertices",
                MAX_ENUMERATED_VERTICES as u64,
                self.max_vertices as u64,
            ));
        }
        if self.max_vertices == 0 || self.min_vertices == 0 || self.min_vertices > self.max_vertices {
            return Err(Error::Precondition("vertex bounds must satisfy 1 <= min <= max".into()));
        }
        if self.multigraph && self.max_edges.is_none() {
            return Err(Error::Precondition("multigraph enumeration needs an edge bound".into()));
        }
        Ok(())
    }

    fn multiplicity(&self) -> u8 {
        if self.multigraph {
            self.max_multiplicity
        } else {
            1
        }
    }
}

/// Every neighbourhood multiplicity vector of a new vertex joined to `n`
/// old vertices, with each entry at most `cap` and total at most `budget`.
fn attachments(n: usize, cap: u8, budget: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::new();
        for prefix in out {
            let used: usize = prefix.iter().map(|&k| k as usize).sum();
            for k in 0..=cap {
                if used + k as usize <= budget {
                    let mut v = prefix.clone();
                    v.push(k);
                    next.push(v);
                }
            }
        }
        out = next;
    }
    out
}

fn extend(base: &MultiGraph, attach: &[u8]) -> MultiGraph {
    let n = base.vertex_count();
    let mut edges = base.edges().to_vec();
    for (w, &k) in attach.iter().enumerate() {
        for _ in 0..k {
            edges.push((w, n));
        }
    }
    MultiGraph::new(n + 1, edges).expect("extension is well formed")
}

/// All graphs passing `filter`, one per isomorphism class, ordered by
/// vertex count, then edge count, then canonical code.
pub fn enumerate_graphs(filter: &InstanceFilter) -> Result<Vec<MultiGraph>> {
    filter.validate()?;
    let budget = filter.max_edges.unwrap_or(usize::MAX);
    let cap = filter.multiplicity();
    // all classes on n vertices (connected or not); every graph on n + 1
    // vertices is one of these plus a vertex
    let mut level: BTreeSet<CanonicalForm> = [canonical_form(&MultiGraph::empty(1))?].into();
    let mut out = Vec::new();
    for n in 1..=filter.max_vertices {
        if n > 1 {
            let candidates: Vec<(MultiGraph, Vec<u8>)> = level
                .iter()
                .flat_map(|form| {
                    let base = form.to_graph();
                    let room = budget.saturating_sub(base.edge_count());
                    attachments(n - 1, cap, room)
                        .into_iter()
                        .map(move |a| (base.clone(), a))
                })
                .collect();
            level = candidates
                .par_iter()
                .map(|(base, a)| canonical_form(&extend(base, a)))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .collect();
        }
        if n < filter.min_vertices {
            continue;
        }
        let mut chosen: Vec<(usize, &CanonicalForm)> = Vec::new();
        for form in &level {
            chosen.push((form.edge_count(), form));
        }
        chosen.sort();
        let graphs: Vec<MultiGraph> = chosen.into_iter().map(|(_, f)| f.to_graph()).collect();
        let kept: Vec<Option<MultiGraph>> = graphs
            .into_par_iter()
            .map(|g| {
                if filter.connected_only && !g.is_connected() {
                    return Ok(None);
                }
                if filter.outerplanar_only && !is_outerplanar(&g)? {
                    return Ok(None);
                }
                Ok(Some(g))
            })
            .collect::<Result<_>>()?;
        out.extend(kept.into_iter().flatten());
    }
    Ok(out)
}
