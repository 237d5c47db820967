use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{BunkbedGraph, EdgeId, MultiGraph, Transversal, VertexId};
use crate::reach::Coloring;

/// Edges on `v`'s side of the separator `c`: those inside `v`'s component
/// of `G - c`, plus those joining that component to `c`.
pub fn cutset_side_edges(
    g: &MultiGraph,
    t: &Transversal,
    c: &BTreeSet<VertexId>,
    u: VertexId,
    v: VertexId,
) -> Result<BTreeSet<EdgeId>> {
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    if let Some(x) = c.iter().find(|&&x| !t.contains(x)) {
        return Err(Error::Precondition(format!("separator vertex {x} is not in T")));
    }
    if c.contains(&u) || c.contains(&v) || u == v || !g.separates(c, u, v) {
        return Err(Error::Precondition("the set does not separate u from v".into()));
    }
    let side: BTreeSet<VertexId> = g
        .components_after_removal(c)
        .into_iter()
        .find(|comp| comp.contains(&v))
        .expect("v survives the removal")
        .into_iter()
        .collect();
    Ok(g
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, (a, b))| {
            (side.contains(a) || side.contains(b)) && !(c.contains(a) && c.contains(b))
        })
        .map(|(e, _)| e)
        .collect())
}

/// Swaps the colour of every edge in `edges`.
pub fn mirror_coloring(c: &Coloring, edges: &BTreeSet<EdgeId>) -> Coloring {
    Coloring(
        c.0.iter()
            .enumerate()
            .map(|(e, &blue)| blue != edges.contains(&e))
            .collect(),
    )
}

/// Swaps the presence of `e_0` and `e_1` for every `e` in `edges`.
pub fn mirror_bunkbed(bb: &BunkbedGraph, present: u64, edges: &BTreeSet<EdgeId>) -> u64 {
    let mut out = present;
    for &e in edges {
        let (lo, hi) = (bb.horizontal(e, 0), bb.horizontal(e, 1));
        let (a, b) = (present >> lo & 1, present >> hi & 1);
        out &= !(1 << lo | 1 << hi);
        out |= b << lo | a << hi;
    }
    out
}
