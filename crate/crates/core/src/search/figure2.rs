use serde::Serialize;

use super::{enumerate_graphs, InstanceFilter};
use crate::error::{Error, Result};
use crate::graph::{MultiGraph, Transversal};
use crate::models::{build_model, probability, ModelSpec, Query};
use crate::rational::{ratio, serialize_fraction, Rational};
use crate::reach::{mode_reach, nonreversing_reach, Endpoint, Orientation};

#[derive(Clone, Debug, Serialize)]
pub struct Figure2Match {
    pub graph: MultiGraph,
    pub u: usize,
    pub v: usize,
    #[serde(serialize_with = "serialize_fraction")]
    pub d3: Rational,
    #[serde(serialize_with = "serialize_fraction")]
    pub e3: Rational,
    /// An orientation mask where the direction-switching walk reaches some
    /// `(v, layer)` that the non-reversing walk misses.
    pub separating_orientation: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Figure2Report {
    pub graphs_checked: usize,
    pub labelings_checked: usize,
    pub matches: Vec<Figure2Match>,
}

fn separating_orientation(g: &MultiGraph, t: &Transversal, u: usize, v: usize) -> Result<Option<u64>> {
    let m = g.edge_count();
    let start = Endpoint::new(u, 0);
    for mask in 0..1u64 << m {
        let o = Orientation::from_mask(mask, m);
        let loose = mode_reach(g, t, &o, start)?;
        let strict = nonreversing_reach(g, t, &o, start)?;
        let lost = (0..2).any(|l| {
            let target = Endpoint::new(v, l);
            loose.contains(target) && !strict.contains(target)
        });
        if lost {
            return Ok(Some(mask));
        }
    }
    Ok(None)
}

/// Every connected 4-vertex, 5-edge multigraph with marked `u, v` and
/// `T = {u, v}` where both D3 probabilities are 13/16 and both E3
/// probabilities are 7/8. Finding none is an error.
pub fn find_figure2() -> Result<Figure2Report> {
    let filter = InstanceFilter {
        min_vertices: 4,
        max_vertices: 4,
        max_edges: Some(5),
        connected_only: true,
        outerplanar_only: false,
        multigraph: true,
        max_multiplicity: 5,
    };
    let graphs: Vec<MultiGraph> = enumerate_graphs(&filter)?
        .into_iter()
        .filter(|g| g.edge_count() == 5)
        .collect();
    let d3_target = ratio(13, 16);
    let e3_target = ratio(7, 8);
    let mut matches = Vec::new();
    let mut labelings = 0;
    for g in &graphs {
        for u in 0..4 {
            for v in 0..4 {
                if u == v {
                    continue;
                }
                labelings += 1;
                let t = Transversal::new([u, v]);
                let d3 = build_model(g, &ModelSpec::d3(t.clone()))?;
                let e3 = build_model(g, &ModelSpec::e3(t.clone()))?;
                let hits = |model: &dyn crate::models::Model, target: &Rational| -> Result<bool> {
                    for layer in 0..2 {
                        if probability(model, &Query::two_point(u, v, layer))? != *target {
                            return Ok(false);
                        }
                    }
                    Ok(true)
                };
                if hits(d3.as_ref(), &d3_target)? && hits(e3.as_ref(), &e3_target)? {
                    matches.push(Figure2Match {
                        graph: g.clone(),
                        u,
                        v,
                        d3: d3_target.clone(),
                        e3: e3_target.clone(),
                        separating_orientation: separating_orientation(g, &t, u, v)?,
                    });
                }
            }
        }
    }
    if matches.is_empty() {
        return Err(Error::Precondition(
            "no 4-vertex 5-edge instance has D3 = 13/16 and E3 = 7/8; the non-reversing walk rule disagrees".into(),
        ));
    }
    Ok(Figure2Report {
        graphs_checked: graphs.len(),
        labelings_checked: labelings,
        matches,
    })
}
