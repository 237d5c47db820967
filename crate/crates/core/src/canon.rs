//! Canonical labelling of small multigraphs.
//!
//! Vertices are first split into cells by iterated colour refinement
//! (degree, then multiset of neighbour colours), which is invariant under
//! isomorphism. Every ordering that respects the cell order is then tried
//! and the lexicographically largest upper-triangular multiplicity code
//! wins.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::MultiGraph;

/// Cap on the number of cell-respecting orderings tried per graph.
pub const MAX_ORDERINGS: u64 = 3_628_800;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CanonicalForm {
    pub vertex_count: usize,
    /// Edge multiplicities of the upper triangle, row-major, in canonical order.
    pub code: Vec<u8>,
}

impl CanonicalForm {
    pub fn edge_count(&self) -> usize {
        self.code.iter().map(|&c| c as usize).sum()
    }

    /// The canonical representative, edges listed in row-major order.
    pub fn to_graph(&self) -> MultiGraph {
        let n = self.vertex_count;
        let mut edges = Vec::new();
        let mut k = 0;
        for a in 0..n {
            for b in a + 1..n {
                for _ in 0..self.code[k] {
                    edges.push((a, b));
                }
                k += 1;
            }
        }
        MultiGraph::new(n, edges).expect("canonical code is well formed")
    }
}

fn multiplicities(g: &MultiGraph) -> Vec<Vec<u8>> {
    let n = g.vertex_count();
    let mut mult = vec![vec![0u8; n]; n];
    for &(a, b) in g.edges() {
        mult[a][b] += 1;
        mult[b][a] += 1;
    }
    mult
}

/// Colour refinement; returns the colour class of each vertex, classes
/// numbered in an isomorphism-invariant order.
fn refine(mult: &[Vec<u8>]) -> Vec<usize> {
    let n = mult.len();
    let mut colour = vec![0usize; n];
    let mut classes = 1;
    loop {
        let signatures: Vec<(usize, Vec<(usize, u8)>)> = (0..n)
            .map(|v| {
                let mut sig: Vec<(usize, u8)> = (0..n)
                    .filter(|&w| mult[v][w] > 0)
                    .map(|w| (colour[w], mult[v][w]))
                    .collect();
                sig.sort_unstable();
                (colour[v], sig)
            })
            .collect();
        let ranks: BTreeMap<&(usize, Vec<(usize, u8)>), usize> = {
            let mut distinct: Vec<&(usize, Vec<(usize, u8)>)> = signatures.iter().collect();
            distinct.sort();
            distinct.dedup();
            distinct.into_iter().enumerate().map(|(i, s)| (s, i)).collect()
        };
        let next: Vec<usize> = signatures.iter().map(|s| ranks[s]).collect();
        let next_classes = ranks.len();
        colour = next;
        if next_classes == classes {
            return colour;
        }
        classes = next_classes;
    }
}

fn factorial(k: usize) -> u64 {
    (1..=k as u64).product()
}

pub fn canonical_form(g: &MultiGraph) -> Result<CanonicalForm> {
    Ok(canonical_labelling(g)?.0)
}

/// Returns the canonical form and the labelling `position -> original vertex`.
pub fn canonical_labelling(g: &MultiGraph) -> Result<(CanonicalForm, Vec<usize>)> {
    let n = g.vertex_count();
    let mult = multiplicities(g);
    let colour = refine(&mult);
    let class_count = colour.iter().max().map_or(0, |&c| c + 1);
    let mut cells: Vec<Vec<usize>> = vec![Vec::new(); class_count];
    for v in 0..n {
        cells[colour[v]].push(v);
    }
    let orderings = cells
        .iter()
        .map(|c| factorial(c.len()))
        .try_fold(1u64, |acc, f| acc.checked_mul(f))
        .unwrap_or(u64::MAX);
    if orderings > MAX_ORDERINGS {
        return Err(Error::guard("canonical labelling orderings", MAX_ORDERINGS, orderings));
    }

    let mut search = Search {
        mult: &mult,
        cells: &cells,
        order: Vec::with_capacity(n),
        used: vec![false; n],
        best: None,
    };
    search.run(0);
    let (code, order) = search.best.unwrap_or_default();
    Ok((
        CanonicalForm {
            vertex_count: n,
            code,
        },
        order,
    ))
}

struct Search<'a> {
    mult: &'a [Vec<u8>],
    cells: &'a [Vec<usize>],
    order: Vec<usize>,
    used: Vec<bool>,
    best: Option<(Vec<u8>, Vec<usize>)>,
}

impl Search<'_> {
    fn code(&self) -> Vec<u8> {
        let n = self.order.len();
        let mut code = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                code.push(self.mult[self.order[i]][self.order[j]]);
            }
        }
        code
    }

    fn run(&mut self, cell: usize) {
        if cell == self.cells.len() {
            let code = self.code();
            if self.best.as_ref().is_none_or(|(b, _)| code > *b) {
                self.best = Some((code, self.order.clone()));
            }
            return;
        }
        let members = &self.cells[cell];
        let placed = members.iter().filter(|&&v| self.used[v]).count();
        if placed == members.len() {
            self.run(cell + 1);
            return;
        }
        for &v in members {
            if self.used[v] {
                continue;
            }
            self.used[v] = true;
            self.order.push(v);
            self.run(cell);
            self.order.pop();
            self.used[v] = false;
        }
    }
}

pub fn is_isomorphic(g: &MultiGraph, h: &MultiGraph) -> Result<bool> {
    if g.vertex_count() != h.vertex_count() || g.edge_count() != h.edge_count() {
        return Ok(false);
    }
    Ok(canonical_form(g)? == canonical_form(h)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_isomorphic(g: &MultiGraph, h: &MultiGraph) -> bool {
        fn perms(n: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in perms(n - 1) {
                for i in 0..n {
                    let mut q = p.clone();
                    q.insert(i, n - 1);
                    out.push(q);
                }
            }
            out
        }
        if g.vertex_count() != h.vertex_count() || g.edge_count() != h.edge_count() {
            return false;
        }
        let (mg, mh) = (multiplicities(g), multiplicities(h));
        let n = g.vertex_count();
        perms(n).into_iter().any(|p| {
            (0..n).all(|i| (0..n).all(|j| mg[i][j] == mh[p[i]][p[j]]))
        })
    }

    #[test]
    fn relabelled_graphs_agree() {
        let g = MultiGraph::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap();
        let h = MultiGraph::new(4, vec![(2, 3), (3, 0), (0, 1), (1, 2), (3, 1)]).unwrap();
        assert!(is_isomorphic(&g, &h).unwrap());
        assert!(!is_isomorphic(&g, &MultiGraph::complete(4)).unwrap());
    }

    #[test]
    fn multiplicity_matters() {
        let a = MultiGraph::new(3, vec![(0, 1), (0, 1), (1, 2)]).unwrap();
        let b = MultiGraph::new(3, vec![(0, 1), (1, 2), (1, 2)]).unwrap();
        let c = MultiGraph::new(3, vec![(0, 1), (0, 2), (0, 2)]).unwrap();
        assert!(is_isomorphic(&a, &b).unwrap());
        assert!(is_isomorphic(&a, &c).unwrap());
        assert!(!is_isomorphic(&a, &MultiGraph::cycle(3)).unwrap());
    }

    #[test]
    fn canonical_graph_round_trips() {
        let g = MultiGraph::complete_bipartite(2, 3);
        let form = canonical_form(&g).unwrap();
        let back = form.to_graph();
        assert!(brute_isomorphic(&g, &back));
        assert_eq!(canonical_form(&back).unwrap(), form);
    }

    #[test]
    fn agrees_with_brute_force_on_all_four_vertex_graphs() {
        let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        let graphs: Vec<MultiGraph> = (0u32..64)
            .map(|mask| {
                let edges = pairs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &p)| p)
                    .collect();
                MultiGraph::new(4, edges).unwrap()
            })
            .collect();
        for g in &graphs {
            for h in &graphs {
                assert_eq!(is_isomorphic(g, h).unwrap(), brute_isomorphic(g, h), "{g} vs {h}");
            }
        }
    }
}
