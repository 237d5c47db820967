//! Reductions: rewrite an instance into weighted child instances whose
//! probabilities mix back to the parent's exactly, and check that they do.
//!
//! Each operation is a [`Reduction`] strategy registered by name. It lists
//! the sites where it applies and produces a [`ReductionStep`] at a site.

mod mirror;
mod ops;

use std::fmt;

use serde::ser::SerializeStruct;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::format::Instance;
use crate::graph::{EdgeId, EdgePartition, Minor, MultiGraph, Transversal, VertexId};
use crate::models::{build_model, probabilities, EdgeState, ModelSpec, Query};
use crate::rational::{int, to_fraction_string, Rational};
use crate::reach::Endpoint;

pub use mirror::{cutset_side_edges, mirror_bunkbed, mirror_coloring};
pub use ops::{
    delta_reduce, e2_condition_edge, parallel_pair_reduce, restricted_delta_reduce, t_contract,
    v2_reduce, y_reduce,
};

/// How edge colours (or layers) are coupled in a triple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coupling {
    /// Colour model: each block is one fair colour.
    Partition(EdgePartition),
    /// Layered model: per-edge E2 states, free or committed to one layer.
    Hybrid(Vec<EdgeState>),
}

impl Coupling {
    fn through(&self, minor: &Minor) -> Result<Coupling> {
        Ok(match self {
            Coupling::Partition(p) => Coupling::Partition(p.through(minor)?),
            Coupling::Hybrid(states) => {
                let mut out = vec![EdgeState::OneLayer; minor.graph.edge_count()];
                for (old, new) in minor.edge_map.iter().enumerate() {
                    if let Some(new) = new {
                        out[*new] = states[old].clone();
                    }
                }
                Coupling::Hybrid(out)
            }
        })
    }
}

/// An instance `(G, T, U)` with two marked vertices that survive rewrites.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triple {
    pub graph: MultiGraph,
    pub transversal: Transversal,
    pub coupling: Coupling,
    pub u: VertexId,
    pub v: VertexId,
}

impl Triple {
    pub fn new(graph: MultiGraph, transversal: Transversal, partition: EdgePartition, u: VertexId, v: VertexId) -> Result<Self> {
        Triple::build(graph, transversal, Coupling::Partition(partition), u, v)
    }

    /// Colour triple with the singleton partition.
    pub fn colored(graph: MultiGraph, transversal: Transversal, u: VertexId, v: VertexId) -> Result<Self> {
        let partition = EdgePartition::singletons(&graph);
        Triple::new(graph, transversal, partition, u, v)
    }

    /// E2 triple with per-edge probabilities.
    pub fn layered(graph: MultiGraph, transversal: Transversal, p_vec: Vec<Rational>, u: VertexId, v: VertexId) -> Result<Self> {
        let states = p_vec.into_iter().map(EdgeState::Free).collect();
        Triple::build(graph, transversal, Coupling::Hybrid(states), u, v)
    }

    pub fn build(graph: MultiGraph, transversal: Transversal, coupling: Coupling, u: VertexId, v: VertexId) -> Result<Self> {
        graph.check_vertex(u)?;
        graph.check_vertex(v)?;
        transversal.validate(&graph)?;
        match &coupling {
            Coupling::Partition(p) if p.edge_count() != graph.edge_count() => {
                return Err(Error::InvalidPartition("partition is for a different graph".into()))
            }
            Coupling::Hybrid(s) if s.len() != graph.edge_count() => {
                return Err(Error::ModelMismatch("one edge state per edge is needed".into()))
            }
            _ => {}
        }
        Ok(Triple {
            graph,
            transversal,
            coupling,
            u,
            v,
        })
    }

    pub fn partition(&self) -> Option<&EdgePartition> {
        match &self.coupling {
            Coupling::Partition(p) => Some(p),
            Coupling::Hybrid(_) => None,
        }
    }

    pub fn states(&self) -> Option<&[EdgeState]> {
        match &self.coupling {
            Coupling::Hybrid(s) => Some(s),
            Coupling::Partition(_) => None,
        }
    }

    pub fn spec(&self) -> ModelSpec {
        let t = self.transversal.clone();
        match &self.coupling {
            Coupling::Partition(p) if p.is_all_singletons() => ModelSpec::e3(t),
            Coupling::Partition(p) => ModelSpec::e4(t, p.clone()),
            Coupling::Hybrid(s) => ModelSpec::e2_hybrid(t, s.clone()),
        }
    }

    /// Carries `T`, the coupling and the marked vertices through a minor.
    pub fn derive(&self, minor: Minor) -> Result<Triple> {
        let lost = |w| Error::Precondition(format!("marked vertex {w} does not survive the rewrite"));
        let u = minor.vertex(self.u).ok_or_else(|| lost(self.u))?;
        let v = minor.vertex(self.v).ok_or_else(|| lost(self.v))?;
        Ok(Triple {
            transversal: self.transversal.through(&minor),
            coupling: self.coupling.through(&minor)?,
            graph: minor.graph,
            u,
            v,
        })
    }

    pub fn with_coupling(&self, coupling: Coupling) -> Result<Triple> {
        Triple::build(self.graph.clone(), self.transversal.clone(), coupling, self.u, self.v)
    }

    /// `u_0 -> v_0`, `u_0 -> v_1`, `v_0 -> u_0`, `v_0 -> u_1`.
    pub fn queries(&self) -> [(String, Query); 4] {
        let q = |a: VertexId, b: VertexId, layer: u8| Query {
            sources: vec![Endpoint::new(a, 0)],
            targets: vec![Endpoint::new(b, layer)],
        };
        [
            ("u0->v0".into(), q(self.u, self.v, 0)),
            ("u0->v1".into(), q(self.u, self.v, 1)),
            ("v0->u0".into(), q(self.v, self.u, 0)),
            ("v0->u1".into(), q(self.v, self.u, 1)),
        ]
    }

    pub fn probabilities(&self) -> Result<[Rational; 4]> {
        let model = build_model(&self.graph, &self.spec())?;
        let qs: Vec<Query> = self.queries().into_iter().map(|(_, q)| q).collect();
        let probs = probabilities(model.as_ref(), &qs)?;
        Ok(probs.try_into().expect("four queries"))
    }

    pub fn instance(&self) -> Instance {
        let partition = match &self.coupling {
            Coupling::Partition(p) => p.clone(),
            Coupling::Hybrid(_) => EdgePartition::singletons(&self.graph),
        };
        Instance {
            graph: self.graph.clone(),
            transversal: self.transversal.clone(),
            partition,
            names: None,
        }
    }
}

impl Serialize for Triple {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Triple", 4)?;
        st.serialize_field("instance", &self.instance().render())?;
        st.serialize_field("u", &self.u)?;
        st.serialize_field("v", &self.v)?;
        st.serialize_field("edge_states", &self.states())?;
        st.end()
    }
}

/// Where a reduction acts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Site {
    Edge(EdgeId),
    Vertex(VertexId),
    /// Triangle edges `xy`, `xz`, `yz`.
    Triangle(EdgeId, EdgeId, EdgeId),
    Pair(EdgeId, EdgeId),
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Site::Edge(e) => write!(f, "edge {e}"),
            Site::Vertex(x) => write!(f, "vertex {x}"),
            Site::Triangle(a, b, c) => write!(f, "triangle {a},{b},{c}"),
            Site::Pair(e, g) => write!(f, "edges {e},{g}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Child {
    pub triple: Triple,
    pub weight: Rational,
}

impl Serialize for Child {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Child", 2)?;
        st.serialize_field("weight", &to_fraction_string(&self.weight))?;
        st.serialize_field("triple", &self.triple)?;
        st.end()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionStep {
    pub op: String,
    pub site: Site,
    pub parent: Triple,
    pub children: Vec<Child>,
    pub notes: Vec<String>,
}

impl ReductionStep {
    pub fn weight_sum(&self) -> Rational {
        self.children.iter().fold(int(0), |acc, c| acc + &c.weight)
    }

    /// The trivial step: the parent is its own single child.
    pub fn identity(parent: &Triple) -> ReductionStep {
        ReductionStep {
            op: "identity".into(),
            site: Site::Vertex(parent.u),
            parent: parent.clone(),
            children: vec![Child {
                triple: parent.clone(),
                weight: int(1),
            }],
            notes: Vec::new(),
        }
    }

    /// Copy with `delta` added to the weight of child `i`; a negative control.
    pub fn perturbed(&self, i: usize, delta: &Rational) -> ReductionStep {
        let mut out = self.clone();
        if let Some(c) = out.children.get_mut(i) {
            c.weight += delta;
        }
        out.notes.push(format!("weight of child {i} perturbed by {delta}"));
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QueryCheck {
    pub query: String,
    pub parent: Rational,
    pub mixture: Rational,
}

impl QueryCheck {
    pub fn holds(&self) -> bool {
        self.parent == self.mixture
    }

    pub fn discrepancy(&self) -> Rational {
        &self.mixture - &self.parent
    }
}

impl Serialize for QueryCheck {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("QueryCheck", 4)?;
        st.serialize_field("query", &self.query)?;
        st.serialize_field("parent", &to_fraction_string(&self.parent))?;
        st.serialize_field("mixture", &to_fraction_string(&self.mixture))?;
        st.serialize_field("ok", &self.holds())?;
        st.end()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub op: String,
    pub site: Site,
    #[serde(serialize_with = "crate::rational::serialize_fraction")]
    pub weight_sum: Rational,
    pub checks: Vec<QueryCheck>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.weight_sum == int(1) && self.checks.iter().all(QueryCheck::holds)
    }

    pub fn failures(&self) -> impl Iterator<Item = &QueryCheck> {
        self.checks.iter().filter(|c| !c.holds())
    }
}

/// Checks `P(parent) = sum_i w_i P(child_i)` for the four endpoint queries.
pub fn verify_reduction(step: &ReductionStep) -> Result<VerificationReport> {
    let parent = step.parent.probabilities()?;
    let mut mixture = [int(0), int(0), int(0), int(0)];
    for child in &step.children {
        let probs = child.triple.probabilities()?;
        for (m, p) in mixture.iter_mut().zip(probs) {
            *m += p * &child.weight;
        }
    }
    let checks = step
        .parent
        .queries()
        .into_iter()
        .zip(parent)
        .zip(mixture)
        .map(|(((name, _), parent), mixture)| QueryCheck {
            query: name,
            parent,
            mixture,
        })
        .collect();
    Ok(VerificationReport {
        op: step.op.clone(),
        site: step.site,
        weight_sum: step.weight_sum(),
        checks,
    })
}

/// One reduction operation.
pub trait Reduction: Send + Sync {
    fn name(&self) -> &'static str;
    fn summary(&self) -> &'static str;
    /// Every site of `tr` where the preconditions hold.
    fn sites(&self, tr: &Triple) -> Vec<Site>;
    fn apply(&self, tr: &Triple, site: Site) -> Result<ReductionStep>;
}

static REGISTRY: [&dyn Reduction; 7] = [
    &ops::TContract,
    &ops::V2,
    &ops::Delta,
    &ops::RestrictedDelta,
    &ops::Wye,
    &ops::ParallelPair,
    &ops::E2Condition,
];

pub fn registry() -> &'static [&'static dyn Reduction] {
    &REGISTRY
}

pub fn lookup(name: &str) -> Result<&'static dyn Reduction> {
    let key = name.to_ascii_lowercase().replace('-', "_");
    REGISTRY
        .iter()
        .copied()
        .find(|r| r.name() == key)
        .ok_or_else(|| Error::UnknownName {
            name: name.to_string(),
            known: REGISTRY.iter().map(|r| r.name()).collect::<Vec<_>>().join(", "),
        })
}
