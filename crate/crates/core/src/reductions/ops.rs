use crate::error::{Error, Result};
use crate::graph::{EdgeId, EdgePartition, VertexId};
use crate::models::EdgeState;
use crate::rational::{int, ratio, Rational};

use super::{Child, Coupling, Reduction, ReductionStep, Site, Triple};

fn pre(message: impl Into<String>) -> Error {
    Error::Precondition(message.into())
}

fn partition_of(tr: &Triple) -> Result<&EdgePartition> {
    tr.partition()
        .ok_or_else(|| Error::ModelMismatch("this reduction acts on colour triples".into()))
}

fn step(op: &str, site: Site, parent: &Triple, children: Vec<(Triple, Rational)>, notes: Vec<String>) -> ReductionStep {
    ReductionStep {
        op: op.into(),
        site,
        parent: parent.clone(),
        children: children
            .into_iter()
            .filter(|(_, w)| *w != int(0))
            .map(|(triple, weight)| Child { triple, weight })
            .collect(),
        notes,
    }
}

/// Contract `c`, then delete the image of `d`.
fn contract_then_delete(tr: &Triple, c: EdgeId, d: EdgeId) -> Result<Triple> {
    let first = tr.graph.contract(c)?;
    let d = first.edge_map[d].ok_or_else(|| pre(format!("edge {d} vanished when contracting {c}")))?;
    let second = first.graph.delete_edge(d)?;
    tr.derive(first.then(second))
}

/// Delete `d`, then contract the image of `c`.
fn delete_then_contract(tr: &Triple, d: EdgeId, c: EdgeId) -> Result<Triple> {
    let first = tr.graph.delete_edge(d)?;
    let c = first.edge_map[c].expect("only d is deleted");
    let second = first.graph.contract(c)?;
    tr.derive(first.then(second))
}

fn contract(tr: &Triple, e: EdgeId) -> Result<Triple> {
    tr.derive(tr.graph.contract(e)?)
}

fn merged(tr: &Triple, edges: &[EdgeId]) -> Result<Triple> {
    let p = partition_of(tr)?.merged(&tr.graph, edges)?;
    tr.with_coupling(Coupling::Partition(p))
}

/// `(x, y, z)` when the edges are `xy`, `xz`, `yz` of a triangle.
fn triangle(tr: &Triple, xy: EdgeId, xz: EdgeId, yz: EdgeId) -> Result<(VertexId, VertexId, VertexId)> {
    let g = &tr.graph;
    let (a, b) = g.endpoints(xy)?;
    let (c, d) = g.endpoints(xz)?;
    let (e, f) = g.endpoints(yz)?;
    let not_triangle = || pre(format!("edges {xy}, {xz}, {yz} do not form a triangle xy, xz, yz"));
    let (x, y) = if a == c || a == d {
        (a, b)
    } else if b == c || b == d {
        (b, a)
    } else {
        return Err(not_triangle());
    };
    let z = if c == x { d } else { c };
    if z == y || !((e == y && f == z) || (e == z && f == y)) {
        return Err(not_triangle());
    }
    Ok((x, y, z))
}

fn singleton(tr: &Triple, e: EdgeId) -> Result<bool> {
    Ok(partition_of(tr)?.is_singleton(e))
}

/// Contract an edge whose endpoints are both transversal.
pub fn t_contract(tr: &Triple, e: EdgeId) -> Result<ReductionStep> {
    let (a, b) = tr.graph.endpoints(e)?;
    if !(tr.transversal.contains(a) && tr.transversal.contains(b)) {
        return Err(pre(format!("edge {e} = {a}{b} is not inside T")));
    }
    // a layered edge must be certain to have an image
    if let Some(states) = tr.states() {
        if matches!(&states[e], EdgeState::Free(p) if *p != int(1)) {
            return Err(pre(format!("edge {e} may have no image; condition on it first")));
        }
    }
    let child = contract(tr, e)?;
    Ok(step("t_contract", Site::Edge(e), tr, vec![(child, int(1))], vec![format!("contracted {a}{b}")]))
}

/// Remove a degree-2 vertex outside `T ∪ {u, v}`.
pub fn v2_reduce(tr: &Triple, x: VertexId) -> Result<ReductionStep> {
    tr.graph.check_vertex(x)?;
    if tr.transversal.contains(x) || x == tr.u || x == tr.v {
        return Err(pre(format!("vertex {x} is transversal or marked")));
    }
    let inc: Vec<EdgeId> = tr.graph.incident(x).collect();
    if inc.len() != 2 {
        return Err(pre(format!("vertex {x} has degree {}", inc.len())));
    }
    let (a, b) = (inc[0], inc[1]);
    let squeeze = if singleton(tr, a)? {
        a
    } else if singleton(tr, b)? {
        b
    } else {
        return Err(pre(format!("neither edge at {x} is a singleton block")));
    };
    let removed = tr.derive(tr.graph.delete_vertex(x)?)?;
    let joined = contract(tr, squeeze)?;
    Ok(step(
        "v2_reduce",
        Site::Vertex(x),
        tr,
        vec![(removed, ratio(1, 2)), (joined, ratio(1, 2))],
        vec![format!("different colours: delete {x}"), format!("same colour: contract edge {squeeze}")],
    ))
}

/// Triangle of three singleton blocks.
pub fn delta_reduce(tr: &Triple, xy: EdgeId, xz: EdgeId, yz: EdgeId) -> Result<ReductionStep> {
    triangle(tr, xy, xz, yz)?;
    for e in [xy, xz, yz] {
        if !singleton(tr, e)? {
            return Err(pre(format!("edge {e} is not a singleton block")));
        }
    }
    let q = ratio(1, 4);
    let children = vec![
        (contract_then_delete(tr, xy, yz)?, q.clone()),
        (contract_then_delete(tr, xz, yz)?, q.clone()),
        (contract_then_delete(tr, yz, xz)?, q.clone()),
        (merged(tr, &[xy, xz, yz])?, q),
    ];
    Ok(step(
        "delta_reduce",
        Site::Triangle(xy, xz, yz),
        tr,
        children,
        vec![
            format!("{xy} odd one out: contract {xy}, drop duplicate {yz}"),
            format!("{xz} odd one out: contract {xz}, drop duplicate {yz}"),
            format!("{yz} odd one out: contract {yz}, drop duplicate {xz}"),
            "monochromatic: merge the three blocks".into(),
        ],
    ))
}

/// Triangle whose edge `xy` lies in a block of at least two edges.
pub fn restricted_delta_reduce(tr: &Triple, xy: EdgeId, xz: EdgeId, yz: EdgeId) -> Result<ReductionStep> {
    triangle(tr, xy, xz, yz)?;
    let p = partition_of(tr)?;
    if p.blocks()[p.block_of(xy)].len() < 2 {
        return Err(pre(format!("edge {xy} is a singleton block; use delta_reduce")));
    }
    if p.block_of(xz) == p.block_of(xy) || !p.is_singleton(xz) || !p.is_singleton(yz) {
        return Err(pre(format!("edges {xz} and {yz} must be singleton blocks")));
    }
    let children = vec![
        (contract_then_delete(tr, xz, yz)?, ratio(1, 4)),
        (contract_then_delete(tr, yz, xz)?, ratio(1, 4)),
        (merged(tr, &[xz, yz])?, ratio(1, 2)),
    ];
    Ok(step(
        "restricted_delta_reduce",
        Site::Triangle(xy, xz, yz),
        tr,
        children,
        vec![
            format!("{xz} differs from {yz}: contract {xz}, drop {yz}"),
            format!("{yz} differs from {xz}: contract {yz}, drop {xz}"),
            format!("{xz} and {yz} equal: merge them"),
        ],
    ))
}

/// Degree-3 vertex outside `T ∪ {u, v}` with three singleton edges.
pub fn y_reduce(tr: &Triple, x: VertexId) -> Result<ReductionStep> {
    tr.graph.check_vertex(x)?;
    if tr.transversal.contains(x) || x == tr.u || x == tr.v {
        return Err(pre(format!("vertex {x} is transversal or marked")));
    }
    let inc: Vec<EdgeId> = tr.graph.incident(x).collect();
    if inc.len() != 3 {
        return Err(pre(format!("vertex {x} has degree {}", inc.len())));
    }
    for &e in &inc {
        if !singleton(tr, e)? {
            return Err(pre(format!("edge {e} is not a singleton block")));
        }
    }
    let q = ratio(1, 4);
    let mut children = Vec::new();
    let mut notes = Vec::new();
    for i in 0..3 {
        let (odd, keep) = (inc[i], inc[(i + 1) % 3]);
        children.push((delete_then_contract(tr, odd, keep)?, q.clone()));
        notes.push(format!("{odd} odd one out: delete it, contract {keep}"));
    }
    children.push((merged(tr, &inc)?, q));
    notes.push("monochromatic: merge the three blocks".into());
    Ok(step("y_reduce", Site::Vertex(x), tr, children, notes))
}

/// Two parallel edges that each sit in exactly one layer.
pub fn parallel_pair_reduce(tr: &Triple, e: EdgeId, f: EdgeId) -> Result<ReductionStep> {
    let (a, b) = tr.graph.endpoints(e)?;
    let (c, d) = tr.graph.endpoints(f)?;
    if e == f || !((a, b) == (c, d) || (a, b) == (d, c)) {
        return Err(pre(format!("edges {e} and {f} are not parallel")));
    }
    let eligible = match &tr.coupling {
        Coupling::Partition(p) => p.is_singleton(e) && p.is_singleton(f),
        Coupling::Hybrid(s) => s[e] == EdgeState::OneLayer && s[f] == EdgeState::OneLayer,
    };
    if !eligible {
        return Err(pre(format!("edges {e} and {f} must be independent one-layer edges")));
    }
    let same = tr.derive(tr.graph.delete_edge(f)?)?;
    let both = contract(tr, e)?;
    Ok(step(
        "parallel_pair_reduce",
        Site::Pair(e, f),
        tr,
        vec![(same, ratio(1, 2)), (both, ratio(1, 2))],
        vec![format!("same layer: delete {f}"), format!("different layers: contract {e}")],
    ))
}

/// Condition a free E2 edge on how many of its images are present.
pub fn e2_condition_edge(tr: &Triple, e: EdgeId) -> Result<ReductionStep> {
    tr.graph.endpoints(e)?;
    let states = tr
        .states()
        .ok_or_else(|| Error::ModelMismatch("edge conditioning acts on layered triples".into()))?;
    let p = match &states[e] {
        EdgeState::Free(p) => p.clone(),
        EdgeState::OneLayer => return Err(pre(format!("edge {e} is already one-layer"))),
    };
    let q = int(1) - &p;
    let mut one = states.to_vec();
    one[e] = EdgeState::OneLayer;
    let children = vec![
        (contract(tr, e)?, &p * &p),
        (tr.with_coupling(Coupling::Hybrid(one))?, int(2) * &p * &q),
        (tr.derive(tr.graph.delete_edge(e)?)?, &q * &q),
    ];
    Ok(step(
        "e2_condition_edge",
        Site::Edge(e),
        tr,
        children,
        vec![
            format!("both images of {e}: contract"),
            format!("exactly one image of {e}: one-layer edge"),
            format!("no image of {e}: delete"),
        ],
    ))
}

pub(super) struct TContract;
pub(super) struct V2;
pub(super) struct Delta;
pub(super) struct RestrictedDelta;
pub(super) struct Wye;
pub(super) struct ParallelPair;
pub(super) struct E2Condition;

fn expect_edge(site: Site) -> Result<EdgeId> {
    match site {
        Site::Edge(e) => Ok(e),
        other => Err(pre(format!("expected an edge site, got {other}"))),
    }
}

fn expect_vertex(site: Site) -> Result<VertexId> {
    match site {
        Site::Vertex(x) => Ok(x),
        other => Err(pre(format!("expected a vertex site, got {other}"))),
    }
}

/// Every triangle as `(xy, xz, yz)` with `xy < xz < yz`, in one fixed labelling.
fn triangles(tr: &Triple) -> Vec<(EdgeId, EdgeId, EdgeId)> {
    let m = tr.graph.edge_count();
    let mut out = Vec::new();
    for a in 0..m {
        for b in a + 1..m {
            for c in b + 1..m {
                if triangle(tr, a, b, c).is_ok() {
                    out.push((a, b, c));
                } else if triangle(tr, a, c, b).is_ok() {
                    out.push((a, c, b));
                } else if triangle(tr, b, c, a).is_ok() {
                    out.push((b, c, a));
                }
            }
        }
    }
    out
}

impl Reduction for TContract {
    fn name(&self) -> &'static str {
        "t_contract"
    }
    fn summary(&self) -> &'static str {
        "contract an edge between two transversal vertices"
    }
    fn sites(&self, tr: &Triple) -> Vec<Site> {
        (0..tr.graph.edge_count())
            .filter(|&e| t_contract(tr, e).is_ok())
            .map(Site::Edge)
            .collect()
    }
    fn apply(&self, tr: &Triple, site: Site) -> Result<ReductionStep> {
        t_contract(tr, expect_edge(site)?)
    }
}

impl Reduction for V2 {
    fn name(&self) -> &'static str {
        "v2_reduce"
    }
    fn summary(&self) -> &'static str {
        "split on the colours at an unmarked degree-2 vertex"
    }
    fn sites(&self, tr: &Triple) -> Vec<Site> {
        (0..tr.graph.vertex_count())
            .filter(|&x| v2_reduce(tr, x).is_ok())
            .map(Site::Vertex)
            .collect()
    }
    fn apply(&self, tr: &Triple, site: Site) -> Result<ReductionStep> {
        v2_reduce(tr, expect_vertex(site)?)
    }
}

impl Reduction for Delta {
    fn name(&self) -> &'static str {
        "delta_reduce"
    }
    fn summary(&self) -> &'static str {
        "split on the colouring of a triangle of singleton blocks"
    }
    fn sites(&self, tr: &Triple) -> Vec<Site> {
        let Some(p) = tr.partition() else {
            return Vec::new();
        };
        triangles(tr)
            .into_iter()
            .filter(|&(a, b, c)| p.is_singleton(a) && p.is_singleton(b) && p.is_singleton(c))
            .map(|(a, b, c)| Site::Triangle(a, b, c))
            .collect()
    }
    fn apply(&self, tr: &Triple, site: Site) -> Result<ReductionStep> {
        match site {
            Site::Triangle(a, b, c) => delta_reduce(tr, a, b, c),
            other => Err(pre(format!("expected a triangle site, got {other}"))),
        }
    }
}

impl Reduction for RestrictedDelta {
    fn name(&self) -> &'static str {
        "restricted_delta_reduce"
    }
    fn summary(&self) -> &'static str {
        "triangle with one edge in a larger block: split on the other two"
    }
    fn sites(&self, tr: &Triple) -> Vec<Site> {
        if tr.partition().is_none() {
            return Vec::new();
        }
        let mut out = Vec::new();
        for (a, b, c) in triangles(tr) {
            // each edge in turn plays xy; xz is the smaller remaining id
            for (xy, r1, r2) in [(a, b, c), (b, a, c), (c, a, b)] {
                let (xz, yz) = (r1.min(r2), r1.max(r2));
                let (xz, yz) = if triangle(tr, xy, xz, yz).is_ok() { (xz, yz) } else { (yz, xz) };
                if restricted_delta_reduce(tr, xy, xz, yz).is_ok() {
                    out.push(Site::Triangle(xy, xz, yz));
                }
            }
        }
        out
    }
    fn apply(&self, tr: &Triple, site: Site) -> Result<ReductionStep> {
        match site {
            Site::Triangle(a, b, c) => restricted_delta_reduce(tr, a, b, c),
            other => Err(pre(format!("expected a triangle site, got {other}"))),
        }
    }
}

impl Reduction for Wye {
    fn name(&self) -> &'static str {
        "y_reduce"
    }
    fn summary(&self) -> &'static str {
        "split on the colours at an unmarked non-transversal degree-3 vertex"
    }
    fn sites(&self, tr: &Triple) -> Vec<Site> {
        (0..tr.graph.vertex_count())
            .filter(|&x| y_reduce(tr, x).is_ok())
            .map(Site::Vertex)
            .collect()
    }
    fn apply(&self, tr: &Triple, site: Site) -> Result<ReductionStep> {
        y_reduce(tr, expect_vertex(site)?)
    }
}

impl Reduction for ParallelPair {
    fn name(&self) -> &'static str {
        "parallel_pair_reduce"
    }
    fn summary(&self) -> &'static str {
        "split two parallel one-layer edges on whether they share a layer"
    }
    fn sites(&self, tr: &Triple) -> Vec<Site> {
        let m = tr.graph.edge_count();
        let mut out = Vec::new();
        for e in 0..m {
            for f in e + 1..m {
                if parallel_pair_reduce(tr, e, f).is_ok() {
                    out.push(Site::Pair(e, f));
                }
            }
        }
        out
    }
    fn apply(&self, tr: &Triple, site: Site) -> Result<ReductionStep> {
        match site {
            Site::Pair(e, f) => parallel_pair_reduce(tr, e, f),
            other => Err(pre(format!("expected an edge pair site, got {other}"))),
        }
    }
}

impl Reduction for E2Condition {
    fn name(&self) -> &'static str {
        "e2_condition_edge"
    }
    fn summary(&self) -> &'static str {
        "condition a free layered edge on how many of its images are present"
    }
    fn sites(&self, tr: &Triple) -> Vec<Site> {
        match tr.states() {
            Some(states) => states
                .iter()
                .enumerate()
                .filter(|(_, s)| matches!(s, EdgeState::Free(_)))
                .map(|(e, _)| Site::Edge(e))
                .collect(),
            None => Vec::new(),
        }
    }
    fn apply(&self, tr: &Triple, site: Site) -> Result<ReductionStep> {
        e2_condition_edge(tr, expect_edge(site)?)
    }
}
