//! Reachability kernels for every model.
//!
//! All reachability is walk reachability, computed as closure in a state
//! graph whose nodes are `(vertex, layer)` pairs. For the colour models the
//! layer is the colour of the last edge (0 = red/downstairs, 1 =
//! blue/upstairs); for the orientation models it is the travel mode (0 =
//! with the edge directions, 1 = against them). A transversal vertex joins
//! its two layers, so start and target closure are handled uniformly here.

use std::collections::{BTreeSet, HashSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{BunkbedGraph, EdgeId, MultiGraph, Transversal, VertexId};

pub const MAX_NONREVERSING_EDGES: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Endpoint {
    pub vertex: VertexId,
    pub layer: u8,
}

impl Endpoint {
    pub fn new(vertex: VertexId, layer: u8) -> Self {
        debug_assert!(layer < 2);
        Endpoint { vertex, layer }
    }

    pub fn flipped(self) -> Self {
        Endpoint::new(self.vertex, 1 - self.layer)
    }
}

/// Set of endpoints over a fixed vertex count.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ReachSet {
    n: usize,
    hit: Vec<bool>,
}

impl ReachSet {
    pub fn empty(n: usize) -> Self {
        ReachSet {
            n,
            hit: vec![false; 2 * n],
        }
    }

    fn index(&self, p: Endpoint) -> usize {
        p.vertex + p.layer as usize * self.n
    }

    pub fn insert(&mut self, p: Endpoint) -> bool {
        let i = self.index(p);
        !std::mem::replace(&mut self.hit[i], true)
    }

    pub fn contains(&self, p: Endpoint) -> bool {
        p.vertex < self.n && self.hit[self.index(p)]
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.contains(Endpoint::new(v, 0)) || self.contains(Endpoint::new(v, 1))
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn iter(&self) -> impl Iterator<Item = Endpoint> + '_ {
        (0..2 * self.n)
            .filter(|&i| self.hit[i])
            .map(|i| Endpoint::new(i % self.n, (i / self.n) as u8))
    }

    pub fn len(&self) -> usize {
        self.hit.iter().filter(|&&h| h).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_subset(&self, other: &ReachSet) -> bool {
        self.n == other.n && self.hit.iter().zip(&other.hit).all(|(&a, &b)| !a || b)
    }

    /// Same set with layers exchanged.
    pub fn mirrored(&self) -> ReachSet {
        let mut out = ReachSet::empty(self.n);
        for p in self.iter() {
            out.insert(p.flipped());
        }
        out
    }

    /// Whether both layers of every transversal vertex agree.
    pub fn is_closed_under(&self, t: &Transversal) -> bool {
        t.members().iter().all(|&x| {
            x >= self.n || self.contains(Endpoint::new(x, 0)) == self.contains(Endpoint::new(x, 1))
        })
    }

    pub fn to_set(&self) -> BTreeSet<Endpoint> {
        self.iter().collect()
    }
}

/// Per-edge colour; `true` means blue (upstairs).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Coloring(pub Vec<bool>);

impl Coloring {
    pub fn from_mask(mask: u64, m: usize) -> Self {
        Coloring((0..m).map(|i| mask >> i & 1 == 1).collect())
    }

    pub fn mask(&self) -> u64 {
        self.0
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &b)| acc | (b as u64) << i)
    }

    pub fn is_blue(&self, e: EdgeId) -> bool {
        self.0[e]
    }

    pub fn swapped(&self) -> Coloring {
        Coloring(self.0.iter().map(|&b| !b).collect())
    }
}

/// Per-edge direction; `true` means the edge points from its first stored
/// endpoint to its second.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Orientation(pub Vec<bool>);

impl Orientation {
    pub fn from_mask(mask: u64, m: usize) -> Self {
        Orientation((0..m).map(|i| mask >> i & 1 == 1).collect())
    }

    pub fn mask(&self) -> u64 {
        self.0
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &b)| acc | (b as u64) << i)
    }

    /// `(tail, head)` of edge `e`.
    pub fn arc(&self, g: &MultiGraph, e: EdgeId) -> (VertexId, VertexId) {
        let (a, b) = g.edges()[e];
        if self.0[e] {
            (a, b)
        } else {
            (b, a)
        }
    }

    pub fn reversed_outside(&self, keep: &BTreeSet<EdgeId>) -> Orientation {
        Orientation(
            self.0
                .iter()
                .enumerate()
                .map(|(e, &d)| if keep.contains(&e) { d } else { !d })
                .collect(),
        )
    }
}

fn check_start(g: &MultiGraph, start: Endpoint) -> Result<()> {
    g.check_vertex(start.vertex)?;
    if start.layer > 1 {
        return Err(Error::Precondition(format!("layer {} is not 0 or 1", start.layer)));
    }
    Ok(())
}

/// Precomputed incidence for repeated queries on one `(graph, T)` pair.
#[derive(Clone, Debug)]
pub struct Kernel {
    n: usize,
    m: usize,
    /// `(edge, other endpoint, this endpoint is the first stored one)`
    incidence: Vec<Vec<(EdgeId, VertexId, bool)>>,
    transversal: Vec<bool>,
}

impl Kernel {
    pub fn new(g: &MultiGraph, t: &Transversal) -> Self {
        let n = g.vertex_count();
        let mut incidence = vec![Vec::new(); n];
        for (e, &(a, b)) in g.edges().iter().enumerate() {
            incidence[a].push((e, b, true));
            incidence[b].push((e, a, false));
        }
        Kernel {
            n,
            m: g.edge_count(),
            incidence,
            transversal: t.indicator(n),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.m
    }

    pub fn in_transversal(&self, v: VertexId) -> bool {
        self.transversal[v]
    }

    fn seed(&self, start: Endpoint, set: &mut ReachSet, stack: &mut Vec<Endpoint>) {
        set.insert(start);
        stack.push(start);
        if self.transversal[start.vertex] && set.insert(start.flipped()) {
            stack.push(start.flipped());
        }
    }

    fn push(&self, p: Endpoint, set: &mut ReachSet, stack: &mut Vec<Endpoint>) {
        if set.insert(p) {
            stack.push(p);
        }
        if self.transversal[p.vertex] && set.insert(p.flipped()) {
            stack.push(p.flipped());
        }
    }

    /// Colour-switching walks; bit `e` of `blue` set means edge `e` is blue.
    pub fn colored(&self, blue: u64, start: Endpoint) -> ReachSet {
        let mut set = ReachSet::empty(self.n);
        let mut stack = Vec::new();
        self.seed(start, &mut set, &mut stack);
        while let Some(p) = stack.pop() {
            for &(e, w, _) in &self.incidence[p.vertex] {
                if (blue >> e & 1) as u8 == p.layer {
                    self.push(Endpoint::new(w, p.layer), &mut set, &mut stack);
                }
            }
        }
        set
    }

    /// Direction-switching walks; bit `e` of `forward` set means edge `e`
    /// points from its first stored endpoint to its second.
    pub fn mode(&self, forward: u64, start: Endpoint) -> ReachSet {
        let mut set = ReachSet::empty(self.n);
        let mut stack = Vec::new();
        self.seed(start, &mut set, &mut stack);
        while let Some(p) = stack.pop() {
            for &(e, w, first) in &self.incidence[p.vertex] {
                let leaves_tail = first == (forward >> e & 1 == 1);
                // with the direction we must leave from the tail, against it from the head
                if leaves_tail == (p.layer == 0) {
                    self.push(Endpoint::new(w, p.layer), &mut set, &mut stack);
                }
            }
        }
        set
    }

    /// Direction-switching walks that never traverse an edge both ways.
    pub fn nonreversing(&self, forward: u64, start: Endpoint) -> Result<ReachSet> {
        if self.m > MAX_NONREVERSING_EDGES {
            return Err(Error::guard(
                "non-reversing walk edges",
                MAX_NONREVERSING_EDGES as u64,
                self.m as u64,
            ));
        }
        // along/reverse record which physical directions each edge has been used in
        #[derive(Clone, Copy, PartialEq, Eq, Hash)]
        struct State {
            vertex: u8,
            mode: u8,
            along: u16,
            reverse: u16,
        }
        let mut set = ReachSet::empty(self.n);
        let mut seen = HashSet::new();
        let mut stack = Vec::new();
        let mut starts = vec![start];
        if self.transversal[start.vertex] {
            starts.push(start.flipped());
        }
        for s in starts {
            let st = State {
                vertex: s.vertex as u8,
                mode: s.layer,
                along: 0,
                reverse: 0,
            };
            if seen.insert(st) {
                stack.push(st);
            }
        }
        while let Some(st) = stack.pop() {
            let v = st.vertex as usize;
            set.insert(Endpoint::new(v, st.mode));
            let mut next = Vec::new();
            if self.transversal[v] {
                next.push(State {
                    mode: 1 - st.mode,
                    ..st
                });
            }
            for &(e, w, first) in &self.incidence[v] {
                let leaves_tail = first == (forward >> e & 1 == 1);
                if leaves_tail != (st.mode == 0) {
                    continue;
                }
                // physical direction relative to storage order: first -> second
                let bit = 1u16 << e;
                let (along, reverse) = if first {
                    if st.reverse & bit != 0 {
                        continue;
                    }
                    (st.along | bit, st.reverse)
                } else {
                    if st.along & bit != 0 {
                        continue;
                    }
                    (st.along, st.reverse | bit)
                };
                next.push(State {
                    vertex: w as u8,
                    mode: st.mode,
                    along,
                    reverse,
                });
            }
            for s in next {
                if seen.insert(s) {
                    stack.push(s);
                }
            }
        }
        Ok(set)
    }

    /// Plain connectivity of the edges in `present`.
    pub fn plain(&self, present: u64, start: VertexId) -> Vec<bool> {
        let mut seen = vec![false; self.n];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(x) = stack.pop() {
            for &(e, w, _) in &self.incidence[x] {
                if present >> e & 1 == 1 && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }

    /// Directed reachability; bit `e` of `forward` as in [`Kernel::mode`].
    pub fn directed(&self, forward: u64, start: VertexId) -> Vec<bool> {
        let mut seen = vec![false; self.n];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(x) = stack.pop() {
            for &(e, w, first) in &self.incidence[x] {
                if first == (forward >> e & 1 == 1) && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }
}

pub fn colored_reach(
    g: &MultiGraph,
    t: &Transversal,
    c: &Coloring,
    start: Endpoint,
) -> Result<ReachSet> {
    check_start(g, start)?;
    if c.0.len() != g.edge_count() {
        return Err(Error::Precondition("colouring must cover every edge".into()));
    }
    Ok(Kernel::new(g, t).colored(c.mask(), start))
}

/// Component of `start` in the bunkbed subgraph of present derived edges.
/// Endpoint `(x, l)` names derived vertex `x_l`.
pub fn subgraph_reach(bb: &BunkbedGraph, present: u64, start: Endpoint) -> Result<ReachSet> {
    check_start(bb.base(), start)?;
    let kernel = Kernel::new(bb.derived(), &Transversal::empty());
    let hit = kernel.plain(present, bb.vertex(start.vertex, start.layer));
    let n = bb.base().vertex_count();
    let mut set = ReachSet::empty(n);
    for (i, &h) in hit.iter().enumerate() {
        if h {
            set.insert(Endpoint::new(i % n, (i / n) as u8));
        }
    }
    Ok(set)
}

pub fn directed_reach(g: &MultiGraph, o: &Orientation, start: VertexId) -> Result<BTreeSet<VertexId>> {
    g.check_vertex(start)?;
    let hit = Kernel::new(g, &Transversal::empty()).directed(o.mask(), start);
    Ok((0..g.vertex_count()).filter(|&v| hit[v]).collect())
}

pub fn mode_reach(
    g: &MultiGraph,
    t: &Transversal,
    o: &Orientation,
    start: Endpoint,
) -> Result<ReachSet> {
    check_start(g, start)?;
    Ok(Kernel::new(g, t).mode(o.mask(), start))
}

pub fn nonreversing_reach(
    g: &MultiGraph,
    t: &Transversal,
    o: &Orientation,
    start: Endpoint,
) -> Result<ReachSet> {
    check_start(g, start)?;
    Kernel::new(g, t).nonreversing(o.mask(), start)
}

/// `X(O)`, `F(O)` and the partially reversed orientation `O^r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReversalCertificate {
    pub both_ways: BTreeSet<VertexId>,
    pub kept_edges: BTreeSet<EdgeId>,
    pub reversed: Orientation,
}

/// Vertices reachable from `u` (travelling with the directions) in both modes.
pub fn both_ways_set(g: &MultiGraph, t: &Transversal, o: &Orientation, u: VertexId) -> Result<BTreeSet<VertexId>> {
    let reach = mode_reach(g, t, o, Endpoint::new(u, 0))?;
    Ok((0..g.vertex_count())
        .filter(|&x| reach.contains(Endpoint::new(x, 0)) && reach.contains(Endpoint::new(x, 1)))
        .collect())
}

/// Whether some transversal vertex is reachable from `u` travelling with
/// the directions.
pub fn reaches_transversal(g: &MultiGraph, t: &Transversal, o: &Orientation, u: VertexId) -> Result<bool> {
    let reach = mode_reach(g, t, o, Endpoint::new(u, 0))?;
    Ok(t.members().iter().any(|&x| reach.contains_vertex(x)))
}

/// Keeps the edges inside `X(O)` and reverses every other edge.
pub fn reversal_involution(
    g: &MultiGraph,
    t: &Transversal,
    o: &Orientation,
    u: VertexId,
) -> Result<ReversalCertificate> {
    if o.0.len() != g.edge_count() {
        return Err(Error::Precondition("orientation must cover every edge".into()));
    }
    if !reaches_transversal(g, t, o, u)? {
        return Err(Error::Precondition(
            "no walk from the start vertex reaches a transversal vertex".into(),
        ));
    }
    let both_ways = both_ways_set(g, t, o, u)?;
    debug_assert!(!both_ways.is_empty());
    let kept_edges: BTreeSet<EdgeId> = g
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, (a, b))| both_ways.contains(a) && both_ways.contains(b))
        .map(|(e, _)| e)
        .collect();
    let reversed = o.reversed_outside(&kept_edges);
    Ok(ReversalCertificate {
        both_ways,
        kept_edges,
        reversed,
    })
}
