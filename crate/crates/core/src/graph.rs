//! Finite undirected multigraphs with dense edge ids, the bunkbed product,
//! and the minor operations used by the reductions.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

pub type VertexId = usize;
pub type EdgeId = usize;

/// Undirected multigraph on vertices `0..n`. Edge `i` is `edges[i]`.
/// Parallel edges are allowed, loops are not.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct MultiGraph {
    vertex_count: usize,
    edges: Vec<(VertexId, VertexId)>,
}

impl MultiGraph {
    pub fn new(vertex_count: usize, edges: Vec<(VertexId, VertexId)>) -> Result<Self> {
        for (i, &(a, b)) in edges.iter().enumerate() {
            if a >= vertex_count || b >= vertex_count {
                return Err(Error::MalformedGraph(format!(
                    "edge {i} = ({a},{b}) has an endpoint outside 0..{vertex_count}"
                )));
            }
            if a == b {
                return Err(Error::MalformedGraph(format!("edge {i} is a loop at {a}")));
            }
        }
        Ok(MultiGraph {
            vertex_count,
            edges,
        })
    }

    pub fn empty(vertex_count: usize) -> Self {
        MultiGraph {
            vertex_count,
            edges: Vec::new(),
        }
    }

    pub fn path(edge_count: usize) -> Self {
        let edges = (0..edge_count).map(|i| (i, i + 1)).collect();
        MultiGraph {
            vertex_count: edge_count + 1,
            edges,
        }
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycles need at least three vertices");
        let edges = (0..n).map(|i| (i, (i + 1) % n)).collect();
        MultiGraph {
            vertex_count: n,
            edges,
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                edges.push((a, b));
            }
        }
        MultiGraph {
            vertex_count: n,
            edges,
        }
    }

    pub fn complete_bipartite(left: usize, right: usize) -> Self {
        let mut edges = Vec::new();
        for a in 0..left {
            for b in 0..right {
                edges.push((a, left + b));
            }
        }
        MultiGraph {
            vertex_count: left + right,
            edges,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn endpoints(&self, e: EdgeId) -> Result<(VertexId, VertexId)> {
        self.edges.get(e).copied().ok_or(Error::UnknownEdge(e))
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v < self.vertex_count {
            Ok(())
        } else {
            Err(Error::UnknownVertex(v))
        }
    }

    /// Edge ids incident to `v`, in id order.
    pub fn incident(&self, v: VertexId) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges
            .iter()
            .enumerate()
            .filter(move |(_, &(a, b))| a == v || b == v)
            .map(|(i, _)| i)
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.incident(v).count()
    }

    pub fn other_end(&self, e: EdgeId, v: VertexId) -> VertexId {
        let (a, b) = self.edges[e];
        if a == v {
            b
        } else {
            a
        }
    }

    /// All edge ids joining `x` and `y` (either orientation).
    pub fn edges_between(&self, x: VertexId, y: VertexId) -> Vec<EdgeId> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, &(a, b))| (a, b) == (x, y) || (a, b) == (y, x))
            .map(|(i, _)| i)
            .collect()
    }

    pub fn has_edge(&self, x: VertexId, y: VertexId) -> bool {
        self.edges
            .iter()
            .any(|&(a, b)| (a, b) == (x, y) || (a, b) == (y, x))
    }

    pub fn neighbors(&self, v: VertexId) -> BTreeSet<VertexId> {
        self.incident(v).map(|e| self.other_end(e, v)).collect()
    }

    pub fn is_simple(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.edges
            .iter()
            .all(|&(a, b)| seen.insert((a.min(b), a.max(b))))
    }

    /// The underlying simple graph: one edge per adjacent pair, sorted.
    pub fn simplified(&self) -> MultiGraph {
        let pairs: BTreeSet<(usize, usize)> = self
            .edges
            .iter()
            .map(|&(a, b)| (a.min(b), a.max(b)))
            .collect();
        MultiGraph {
            vertex_count: self.vertex_count,
            edges: pairs.into_iter().collect(),
        }
    }

    pub fn adjacency_masks(&self) -> Vec<u64> {
        assert!(self.vertex_count <= 64);
        let mut adj = vec![0u64; self.vertex_count];
        for &(a, b) in &self.edges {
            adj[a] |= 1 << b;
            adj[b] |= 1 << a;
        }
        adj
    }

    /// Contracts edge `e`. The merged vertex takes the smaller endpoint id;
    /// edges parallel to `e` become loops and are dropped.
    pub fn contract(&self, e: EdgeId) -> Result<Minor> {
        let (a, b) = self.endpoints(e)?;
        let (keep, drop) = (a.min(b), a.max(b));
        let vertex_map: Vec<VertexId> = (0..self.vertex_count)
            .map(|v| match v.cmp(&drop) {
                std::cmp::Ordering::Less => v,
                std::cmp::Ordering::Equal => keep,
                std::cmp::Ordering::Greater => v - 1,
            })
            .collect();
        let mut edges = Vec::new();
        let mut edge_map = Vec::with_capacity(self.edges.len());
        for &(x, y) in &self.edges {
            let (nx, ny) = (vertex_map[x], vertex_map[y]);
            if nx == ny {
                edge_map.push(None);
            } else {
                edge_map.push(Some(edges.len()));
                edges.push((nx, ny));
            }
        }
        Ok(Minor {
            graph: MultiGraph {
                vertex_count: self.vertex_count - 1,
                edges,
            },
            vertex_map: vertex_map.into_iter().map(Some).collect(),
            edge_map,
        })
    }

    pub fn delete_edge(&self, e: EdgeId) -> Result<Minor> {
        self.delete_edges(&[e])
    }

    pub fn delete_edges(&self, doomed: &[EdgeId]) -> Result<Minor> {
        for &e in doomed {
            self.endpoints(e)?;
        }
        let mut edges = Vec::new();
        let mut edge_map = Vec::with_capacity(self.edges.len());
        for (i, &pair) in self.edges.iter().enumerate() {
            if doomed.contains(&i) {
                edge_map.push(None);
            } else {
                edge_map.push(Some(edges.len()));
                edges.push(pair);
            }
        }
        Ok(Minor {
            graph: MultiGraph {
                vertex_count: self.vertex_count,
                edges,
            },
            vertex_map: (0..self.vertex_count).map(Some).collect(),
            edge_map,
        })
    }

    /// Removes `x` and its incident edges; later vertices shift down by one.
    pub fn delete_vertex(&self, x: VertexId) -> Result<Minor> {
        self.check_vertex(x)?;
        let vertex_map: Vec<Option<VertexId>> = (0..self.vertex_count)
            .map(|v| match v.cmp(&x) {
                std::cmp::Ordering::Less => Some(v),
                std::cmp::Ordering::Equal => None,
                std::cmp::Ordering::Greater => Some(v - 1),
            })
            .collect();
        let mut edges = Vec::new();
        let mut edge_map = Vec::with_capacity(self.edges.len());
        for &(a, b) in &self.edges {
            match (vertex_map[a], vertex_map[b]) {
                (Some(na), Some(nb)) => {
                    edge_map.push(Some(edges.len()));
                    edges.push((na, nb));
                }
                _ => edge_map.push(None),
            }
        }
        Ok(Minor {
            graph: MultiGraph {
                vertex_count: self.vertex_count - 1,
                edges,
            },
            vertex_map,
            edge_map,
        })
    }

    /// Subgraph induced by `keep`, relabelled in increasing id order.
    pub fn induced(&self, keep: &BTreeSet<VertexId>) -> Minor {
        let mut vertex_map = vec![None; self.vertex_count];
        for (new, &old) in keep.iter().enumerate() {
            vertex_map[old] = Some(new);
        }
        let mut edges = Vec::new();
        let mut edge_map = Vec::with_capacity(self.edges.len());
        for &(a, b) in &self.edges {
            match (vertex_map[a], vertex_map[b]) {
                (Some(na), Some(nb)) => {
                    edge_map.push(Some(edges.len()));
                    edges.push((na, nb));
                }
                _ => edge_map.push(None),
            }
        }
        Minor {
            graph: MultiGraph {
                vertex_count: keep.len(),
                edges,
            },
            vertex_map,
            edge_map,
        }
    }

    /// Components of the graph with `removed` deleted, each sorted, listed
    /// by smallest member.
    pub fn components_after_removal(&self, removed: &BTreeSet<VertexId>) -> Vec<Vec<VertexId>> {
        let mut uf = UnionFind::new(self.vertex_count);
        for &(a, b) in &self.edges {
            if !removed.contains(&a) && !removed.contains(&b) {
                uf.union(a, b);
            }
        }
        let mut groups: std::collections::BTreeMap<usize, Vec<VertexId>> = Default::default();
        for v in (0..self.vertex_count).filter(|v| !removed.contains(v)) {
            groups.entry(uf.find(v)).or_default().push(v);
        }
        let mut comps: Vec<Vec<VertexId>> = groups.into_values().collect();
        comps.sort_by_key(|c| c[0]);
        comps
    }

    pub fn components(&self) -> Vec<Vec<VertexId>> {
        self.components_after_removal(&BTreeSet::new())
    }

    /// The empty graph counts as connected.
    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    pub fn cut_vertices(&self) -> BTreeSet<VertexId> {
        let base = self.components().len();
        (0..self.vertex_count)
            .filter(|&x| {
                let removed = BTreeSet::from([x]);
                // removing an isolated vertex drops a component without cutting anything
                let isolated = self.degree(x) == 0;
                !isolated && self.components_after_removal(&removed).len() > base
            })
            .collect()
    }

    /// Whether `separator` separates `u` from `v` (neither may belong to it).
    pub fn separates(&self, separator: &BTreeSet<VertexId>, u: VertexId, v: VertexId) -> bool {
        if separator.contains(&u) || separator.contains(&v) {
            return false;
        }
        !self
            .components_after_removal(separator)
            .iter()
            .any(|c| c.contains(&u) && c.contains(&v))
    }
}

impl fmt::Display for MultiGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} [", self.vertex_count)?;
        for (i, (a, b)) in self.edges.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{a}-{b}")?;
        }
        write!(f, "]")
    }
}

/// Result of a minor operation with provenance maps from old ids to new ids.
#[derive(Clone, Debug)]
pub struct Minor {
    pub graph: MultiGraph,
    pub vertex_map: Vec<Option<VertexId>>,
    pub edge_map: Vec<Option<EdgeId>>,
}

impl Minor {
    pub fn vertex(&self, v: VertexId) -> Option<VertexId> {
        self.vertex_map.get(v).copied().flatten()
    }

    /// Composes `self` followed by `next`.
    pub fn then(self, next: Minor) -> Minor {
        let vertex_map = self
            .vertex_map
            .iter()
            .map(|v| v.and_then(|v| next.vertex_map[v]))
            .collect();
        let edge_map = self
            .edge_map
            .iter()
            .map(|e| e.and_then(|e| next.edge_map[e]))
            .collect();
        Minor {
            graph: next.graph,
            vertex_map,
            edge_map,
        }
    }
}

/// Set of transversal vertices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Transversal(BTreeSet<VertexId>);

impl Transversal {
    pub fn new(members: impl IntoIterator<Item = VertexId>) -> Self {
        Transversal(members.into_iter().collect())
    }

    pub fn empty() -> Self {
        Transversal(BTreeSet::new())
    }

    pub fn all(g: &MultiGraph) -> Self {
        Transversal((0..g.vertex_count()).collect())
    }

    /// Bit `i` of `mask` selects vertex `i`.
    pub fn from_mask(mask: u64, n: usize) -> Self {
        Transversal((0..n).filter(|&i| mask >> i & 1 == 1).collect())
    }

    pub fn validate(&self, g: &MultiGraph) -> Result<()> {
        match self.0.iter().find(|&&v| v >= g.vertex_count()) {
            Some(&v) => Err(Error::UnknownVertex(v)),
            None => Ok(()),
        }
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0.contains(&v)
    }

    pub fn members(&self) -> &BTreeSet<VertexId> {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Dense membership table for kernels.
    pub fn indicator(&self, n: usize) -> Vec<bool> {
        let mut out = vec![false; n];
        for &v in &self.0 {
            if v < n {
                out[v] = true;
            }
        }
        out
    }

    /// Image under a minor: a merged vertex is transversal iff one of its
    /// preimages was.
    pub fn through(&self, minor: &Minor) -> Transversal {
        Transversal(self.0.iter().filter_map(|&v| minor.vertex(v)).collect())
    }
}

/// Partition of the edge set into blocks that must share a colour.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct EdgePartition {
    blocks: Vec<Vec<EdgeId>>,
    #[serde(skip)]
    block_of: Vec<usize>,
}

impl EdgePartition {
    /// Validates disjointness, coverage, non-emptiness and connectivity of
    /// every block. Blocks are normalised (sorted, ordered by first edge).
    pub fn new(g: &MultiGraph, blocks: Vec<Vec<EdgeId>>) -> Result<Self> {
        let m = g.edge_count();
        let mut block_of = vec![usize::MAX; m];
        let mut blocks: Vec<Vec<EdgeId>> = blocks
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b
            })
            .collect();
        if blocks.iter().any(|b| b.is_empty()) {
            return Err(Error::InvalidPartition("empty block".into()));
        }
        blocks.sort();
        for (i, block) in blocks.iter().enumerate() {
            for &e in block {
                if e >= m {
                    return Err(Error::InvalidPartition(format!("edge {e} out of range")));
                }
                if block_of[e] != usize::MAX {
                    return Err(Error::InvalidPartition(format!("edge {e} in two blocks")));
                }
                block_of[e] = i;
            }
            if !block_is_connected(g, block) {
                return Err(Error::InvalidPartition(format!(
                    "block {block:?} is not connected"
                )));
            }
        }
        if let Some(e) = block_of.iter().position(|&b| b == usize::MAX) {
            return Err(Error::InvalidPartition(format!("edge {e} not covered")));
        }
        Ok(EdgePartition { blocks, block_of })
    }

    pub fn singletons(g: &MultiGraph) -> Self {
        EdgePartition {
            blocks: (0..g.edge_count()).map(|e| vec![e]).collect(),
            block_of: (0..g.edge_count()).collect(),
        }
    }

    pub fn blocks(&self) -> &[Vec<EdgeId>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Number of edges covered.
    pub fn edge_count(&self) -> usize {
        self.block_of.len()
    }

    pub fn block_of(&self, e: EdgeId) -> usize {
        self.block_of[e]
    }

    pub fn is_singleton(&self, e: EdgeId) -> bool {
        self.blocks[self.block_of[e]].len() == 1
    }

    pub fn is_all_singletons(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == 1)
    }

    /// Carries the partition through a minor; vanished edges drop out and
    /// emptied blocks disappear. The result is re-validated.
    pub fn through(&self, minor: &Minor) -> Result<EdgePartition> {
        let blocks = self
            .blocks
            .iter()
            .map(|b| b.iter().filter_map(|&e| minor.edge_map[e]).collect::<Vec<_>>())
            .filter(|b| !b.is_empty())
            .collect();
        EdgePartition::new(&minor.graph, blocks)
    }

    /// Merges the blocks containing the given edges into one.
    pub fn merged(&self, g: &MultiGraph, edges: &[EdgeId]) -> Result<EdgePartition> {
        let targets: BTreeSet<usize> = edges.iter().map(|&e| self.block_of[e]).collect();
        let mut merged = Vec::new();
        let mut rest = Vec::new();
        for (i, b) in self.blocks.iter().enumerate() {
            if targets.contains(&i) {
                merged.extend_from_slice(b);
            } else {
                rest.push(b.clone());
            }
        }
        rest.push(merged);
        EdgePartition::new(g, rest)
    }
}

fn block_is_connected(g: &MultiGraph, block: &[EdgeId]) -> bool {
    let mut uf = UnionFind::new(g.vertex_count());
    for &e in block {
        let (a, b) = g.edges()[e];
        uf.union(a, b);
    }
    let (a0, _) = g.edges()[block[0]];
    let root = uf.find(a0);
    block.iter().all(|&e| uf.find(g.edges()[e].0) == root)
}

/// Disjoint-set forest with path halving and union by size.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }

    pub fn same(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }
}

/// Free-function form of contraction carrying the transversal along.
pub fn contract_edge(
    g: &MultiGraph,
    t: &Transversal,
    e: EdgeId,
) -> Result<(MultiGraph, Transversal, Vec<VertexId>)> {
    let minor = g.contract(e)?;
    let t2 = t.through(&minor);
    let map = minor.vertex_map.iter().map(|v| v.expect("contraction keeps every vertex")).collect();
    Ok((minor.graph, t2, map))
}

pub fn delete_edge(g: &MultiGraph, e: EdgeId) -> Result<(MultiGraph, Vec<Option<EdgeId>>)> {
    let minor = g.delete_edge(e)?;
    Ok((minor.graph, minor.edge_map))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeKind {
    Horizontal0,
    Horizontal1,
    Vertical,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct EdgeTag {
    pub kind: EdgeKind,
    /// Base edge id for horizontal edges, base vertex id for vertical ones.
    pub origin: usize,
}

/// `G × K_2`. Vertex `(x, layer)` has id `x + layer * n`. Derived edge ids:
/// `e` for `e_0`, `m + e` for `e_1`, `2m + x` for the vertical slot at `x`.
#[derive(Clone, Debug)]
pub struct BunkbedGraph {
    base: MultiGraph,
    derived: MultiGraph,
    tags: Vec<EdgeTag>,
}

impl BunkbedGraph {
    pub fn new(base: &MultiGraph) -> Self {
        let n = base.vertex_count();
        let m = base.edge_count();
        let mut edges = Vec::with_capacity(2 * m + n);
        let mut tags = Vec::with_capacity(2 * m + n);
        for layer in 0..2 {
            for (e, &(a, b)) in base.edges().iter().enumerate() {
                edges.push((a + layer * n, b + layer * n));
                tags.push(EdgeTag {
                    kind: if layer == 0 {
                        EdgeKind::Horizontal0
                    } else {
                        EdgeKind::Horizontal1
                    },
                    origin: e,
                });
            }
        }
        for x in 0..n {
            edges.push((x, x + n));
            tags.push(EdgeTag {
                kind: EdgeKind::Vertical,
                origin: x,
            });
        }
        BunkbedGraph {
            base: base.clone(),
            derived: MultiGraph {
                vertex_count: 2 * n,
                edges,
            },
            tags,
        }
    }

    pub fn base(&self) -> &MultiGraph {
        &self.base
    }

    pub fn derived(&self) -> &MultiGraph {
        &self.derived
    }

    pub fn tags(&self) -> &[EdgeTag] {
        &self.tags
    }

    pub fn vertex(&self, x: VertexId, layer: u8) -> VertexId {
        x + layer as usize * self.base.vertex_count()
    }

    pub fn horizontal(&self, e: EdgeId, layer: u8) -> EdgeId {
        e + layer as usize * self.base.edge_count()
    }

    pub fn vertical(&self, x: VertexId) -> EdgeId {
        2 * self.base.edge_count() + x
    }

    pub fn horizontal_count(&self) -> usize {
        2 * self.base.edge_count()
    }

    pub fn vertical_count(&self) -> usize {
        self.base.vertex_count()
    }
}

pub fn build_bunkbed(g: &MultiGraph) -> BunkbedGraph {
    BunkbedGraph::new(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p2() -> MultiGraph {
        // u=0, x=1, v=2
        MultiGraph::path(2)
    }

    #[test]
    fn rejects_loops_and_out_of_range() {
        assert!(MultiGraph::new(2, vec![(0, 0)]).is_err());
        assert!(MultiGraph::new(2, vec![(0, 2)]).is_err());
        assert!(MultiGraph::new(2, vec![(0, 1), (1, 0)]).is_ok());
    }

    #[test]
    fn bunkbed_counts() {
        let k2 = BunkbedGraph::new(&MultiGraph::complete(2));
        assert_eq!(k2.derived().vertex_count(), 4);
        assert_eq!(k2.horizontal_count(), 2);
        assert_eq!(k2.vertical_count(), 2);
        assert!(k2.derived().is_connected());
        assert_eq!(k2.derived().cut_vertices().len(), 0);

        let c3 = BunkbedGraph::new(&MultiGraph::cycle(3));
        assert_eq!(c3.derived().vertex_count(), 6);
        assert_eq!(c3.horizontal_count(), 6);
        assert_eq!(c3.vertical_count(), 3);

        let k1 = BunkbedGraph::new(&MultiGraph::empty(1));
        assert_eq!(k1.derived().vertex_count(), 2);
        assert_eq!(k1.derived().edge_count(), 1);
    }

    #[test]
    fn bunkbed_tags_pair_up() {
        let g = MultiGraph::new(3, vec![(0, 1), (1, 2), (1, 2)]).unwrap();
        let bb = BunkbedGraph::new(&g);
        for (e, &(a, b)) in g.edges().iter().enumerate() {
            let e0 = bb.horizontal(e, 0);
            let e1 = bb.horizontal(e, 1);
            assert_eq!(bb.derived().edges()[e0], (bb.vertex(a, 0), bb.vertex(b, 0)));
            assert_eq!(bb.derived().edges()[e1], (bb.vertex(a, 1), bb.vertex(b, 1)));
            assert_eq!(bb.tags()[e0].origin, e);
            assert_eq!(bb.tags()[e1].origin, e);
        }
        for x in 0..3 {
            let tag = bb.tags()[bb.vertical(x)];
            assert_eq!(tag, EdgeTag { kind: EdgeKind::Vertical, origin: x });
        }
    }

    #[test]
    fn contract_path_inherits_transversal() {
        let (g, t, map) = contract_edge(&p2(), &Transversal::new([1]), 0).unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(map, vec![0, 0, 1]);
        assert!(t.contains(0));
    }

    #[test]
    fn contract_triangle_makes_parallel_pair() {
        let minor = MultiGraph::cycle(3).contract(0).unwrap();
        assert_eq!(minor.graph.vertex_count(), 2);
        assert_eq!(minor.graph.edge_count(), 2);
        assert_eq!(minor.graph.edges_between(0, 1).len(), 2);
    }

    #[test]
    fn contract_drops_parallel_loops() {
        let g = MultiGraph::new(2, vec![(0, 1), (0, 1)]).unwrap();
        let minor = g.contract(0).unwrap();
        assert_eq!(minor.graph.vertex_count(), 1);
        assert_eq!(minor.graph.edge_count(), 0);
        assert_eq!(minor.edge_map, vec![None, None]);
    }

    #[test]
    fn deletions() {
        let k2 = MultiGraph::complete(2);
        let (g, _) = delete_edge(&k2, 0).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (2, 0));

        let (g, map) = delete_edge(&MultiGraph::cycle(3), 2).unwrap();
        assert_eq!(g, MultiGraph::path(2));
        assert_eq!(map, vec![Some(0), Some(1), None]);

        let pair = MultiGraph::new(2, vec![(0, 1), (0, 1)]).unwrap();
        let (g, _) = delete_edge(&pair, 1).unwrap();
        assert_eq!(g.edge_count(), 1);

        assert_eq!(delete_edge(&k2, 5).unwrap_err(), Error::UnknownEdge(5));
    }

    #[test]
    fn connectivity_predicates() {
        let g = p2();
        assert!(g.is_connected());
        assert_eq!(g.cut_vertices(), BTreeSet::from([1]));
        assert!(MultiGraph::cycle(3).cut_vertices().is_empty());
        let comps = g.components_after_removal(&BTreeSet::from([1]));
        assert_eq!(comps, vec![vec![0], vec![2]]);
        assert!(g.separates(&BTreeSet::from([1]), 0, 2));
        assert!(!MultiGraph::empty(2).is_connected());
    }

    #[test]
    fn partition_validation() {
        let g = p2();
        assert!(EdgePartition::new(&g, vec![vec![0, 1]]).is_ok());
        assert!(EdgePartition::new(&g, vec![vec![0]]).is_err());
        assert!(EdgePartition::new(&g, vec![vec![0], vec![0, 1]]).is_err());
        let split = MultiGraph::new(4, vec![(0, 1), (2, 3)]).unwrap();
        assert!(EdgePartition::new(&split, vec![vec![0, 1]]).is_err());
    }

    #[test]
    fn partition_follows_contraction() {
        let g = MultiGraph::cycle(4);
        let part = EdgePartition::new(&g, vec![vec![0, 1], vec![2], vec![3]]).unwrap();
        let minor = g.contract(0).unwrap();
        let p2 = part.through(&minor).unwrap();
        assert_eq!(p2.block_count(), 3);
        assert!(p2.is_all_singletons());
    }
}
