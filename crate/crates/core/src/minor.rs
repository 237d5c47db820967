//! Exhaustive minor testing for desk-scale graphs.
//!
//! `H` is a minor of `G` iff `H` is a (not necessarily induced or spanning)
//! subgraph of some graph obtained from `G` by contracting edges. The
//! search walks all contraction sequences of the simple underlying graph,
//! memoised on the labelled quotient, and tries a backtracking subgraph
//! embedding at every state.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::graph::MultiGraph;

pub const MAX_MINOR_VERTICES: usize = 12;

type Adjacency = Vec<u16>;

fn simple_adjacency(g: &MultiGraph) -> Adjacency {
    let mut adj = vec![0u16; g.vertex_count()];
    for &(a, b) in g.edges() {
        adj[a] |= 1 << b;
        adj[b] |= 1 << a;
    }
    adj
}

fn edge_total(adj: &Adjacency) -> u32 {
    adj.iter().map(|m| m.count_ones()).sum::<u32>() / 2
}

/// Merges `b` into `a` (`a < b`) and removes `b`, shifting higher ids down.
fn contract(adj: &Adjacency, a: usize, b: usize) -> Adjacency {
    let low: u16 = (1u16 << b) - 1;
    (0..adj.len())
        .filter(|&v| v != b)
        .map(|v| {
            let mut row = adj[v];
            if v == a {
                row |= adj[b];
            }
            if row >> b & 1 == 1 {
                row |= 1 << a;
            }
            if v == a {
                row &= !(1 << a);
            }
            row &= !(1 << b);
            (row & low) | ((row >> 1) & !low)
        })
        .collect()
}

struct Pattern {
    adj: Adjacency,
    order: Vec<usize>,
    edges: u32,
}

impl Pattern {
    fn new(h: &MultiGraph) -> Self {
        let adj = simple_adjacency(h);
        let mut order: Vec<usize> = (0..adj.len()).collect();
        order.sort_by_key(|&v| std::cmp::Reverse(adj[v].count_ones()));
        let edges = edge_total(&adj);
        Pattern { adj, order, edges }
    }

    fn embeds_in(&self, host: &Adjacency) -> bool {
        let mut image = vec![usize::MAX; self.adj.len()];
        self.extend(host, 0, &mut image, 0)
    }

    fn extend(&self, host: &Adjacency, depth: usize, image: &mut [usize], used: u16) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let hv = self.order[depth];
        let need = self.adj[hv].count_ones();
        for gv in 0..host.len() {
            if used >> gv & 1 == 1 || host[gv].count_ones() < need {
                continue;
            }
            let consistent = self.order[..depth].iter().all(|&prev| {
                self.adj[hv] >> prev & 1 == 0 || host[gv] >> image[prev] & 1 == 1
            });
            if consistent {
                image[hv] = gv;
                if self.extend(host, depth + 1, image, used | 1 << gv) {
                    return true;
                }
            }
        }
        false
    }
}

/// Whether `h` is a minor of `g`. Parallel edges are ignored on both sides.
pub fn minor_contains(g: &MultiGraph, h: &MultiGraph) -> Result<bool> {
    let n = g.vertex_count();
    if n > MAX_MINOR_VERTICES {
        return Err(Error::guard("minor test vertices", MAX_MINOR_VERTICES as u64, n as u64));
    }
    let pattern = Pattern::new(h);
    let start = simple_adjacency(g);
    if pattern.adj.len() > n || pattern.edges > edge_total(&start) {
        return Ok(false);
    }
    let mut seen = HashSet::new();
    let mut stack = vec![start];
    while let Some(adj) = stack.pop() {
        if !seen.insert(adj.clone()) {
            continue;
        }
        if pattern.embeds_in(&adj) {
            return Ok(true);
        }
        if adj.len() <= pattern.adj.len() {
            continue;
        }
        for a in 0..adj.len() {
            for b in a + 1..adj.len() {
                if adj[a] >> b & 1 == 1 {
                    let next = contract(&adj, a, b);
                    if edge_total(&next) >= pattern.edges && !seen.contains(&next) {
                        stack.push(next);
                    }
                }
            }
        }
    }
    Ok(false)
}

/// Outerplanar iff neither `K_4` nor `K_{2,3}` is a minor.
pub fn is_outerplanar(g: &MultiGraph) -> Result<bool> {
    Ok(!minor_contains(g, &MultiGraph::complete(4))?
        && !minor_contains(g, &MultiGraph::complete_bipartite(2, 3))?)
}
