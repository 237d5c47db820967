//! The eight probability models behind one trait, a registry that builds
//! them by name, and the exact and sampled probability computations that
//! run on any of them.
//!
//! Every model is a product measure over independent Bernoulli bits (one
//! per bunkbed edge, per colour block, or per edge orientation). A model
//! states the law of each bit and how to compute the reach set of a start
//! endpoint in one outcome; everything else is generic.

mod colored;
mod critical;
mod exact;
mod montecarlo;
mod oriented;
mod percolation;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, EdgePartition, MultiGraph, Transversal, VertexId};
use crate::poly::UniPoly;
use crate::rational::Rational;
use crate::reach::{Coloring, Endpoint, ReachSet};

pub use colored::ColorSwitching;
pub use critical::{
    avg_prob_over_t, avg_prob_over_t_poly, critical_probability, CriticalReport, RootReport,
    MAX_AVERAGE_VERTICES,
};
pub use exact::{
    bbc_margin, connection_polynomial, exact_prob, exact_prob_conditional, joint_prob,
    probabilities, probability, probability_poly, total_probability, two_point_table, ColorConstraint, Relation,
    MAX_OUTCOME_BITS,
};
pub use montecarlo::{mc_estimate, McEstimate};
pub use oriented::{DirectionSwitching, NonReversing, RandomOrientation};
pub use percolation::{EdgeState, EdgePercolation, Kasteleyn, Surface};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ModelKind {
    E1,
    E2,
    E3,
    E4,
    E5,
    D1,
    D2,
    D3,
}

impl ModelKind {
    pub const ALL: [ModelKind; 8] = [
        ModelKind::E1,
        ModelKind::E2,
        ModelKind::E3,
        ModelKind::E4,
        ModelKind::E5,
        ModelKind::D1,
        ModelKind::D2,
        ModelKind::D3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::E1 => "e1",
            ModelKind::E2 => "e2",
            ModelKind::E3 => "e3",
            ModelKind::E4 => "e4",
            ModelKind::E5 => "e5",
            ModelKind::D1 => "d1",
            ModelKind::D2 => "d2",
            ModelKind::D3 => "d3",
        }
    }

    /// Orientation models read layer 0 as "arriving with the edge
    /// direction" and layer 1 as "arriving against it".
    pub fn is_oriented(self) -> bool {
        matches!(self, ModelKind::D1 | ModelKind::D2 | ModelKind::D3)
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        lookup(s).map(|entry| entry.kind)
    }
}

/// Edge-probability parameter: a fixed value or the formal variable `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Param {
    Value(Rational),
    Symbolic,
}

impl Param {
    pub fn law(&self) -> UniPoly {
        match self {
            Param::Value(r) => UniPoly::constant(r.clone()),
            Param::Symbolic => UniPoly::var(),
        }
    }

    pub(crate) fn check(&self) -> Result<()> {
        match self {
            Param::Value(r) if !crate::rational::is_probability(r) => Err(Error::Precondition(
                format!("probability {r} outside [0, 1]"),
            )),
            _ => Ok(()),
        }
    }
}

/// Model choice plus its parameters. Only the fields the kind uses may be
/// set; [`build_model`] rejects anything else.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelSpec {
    pub kind: ModelKind,
    pub p: Option<Param>,
    pub p_vec: Option<Vec<Rational>>,
    pub edge_states: Option<Vec<EdgeState>>,
    pub transversal: Transversal,
    pub partition: Option<EdgePartition>,
    pub surface: Surface,
}

impl ModelSpec {
    fn bare(kind: ModelKind) -> Self {
        ModelSpec {
            kind,
            p: None,
            p_vec: None,
            edge_states: None,
            transversal: Transversal::empty(),
            partition: None,
            surface: Surface::Bunkbed,
        }
    }

    /// Edge percolation on the bunkbed graph.
    pub fn e1(p: Rational) -> Self {
        ModelSpec {
            p: Some(Param::Value(p)),
            ..ModelSpec::bare(ModelKind::E1)
        }
    }

    /// Edge percolation on the base graph itself, no bunkbed.
    pub fn e1_base(p: Rational) -> Self {
        ModelSpec {
            surface: Surface::Base,
            ..ModelSpec::e1(p)
        }
    }

    pub fn e2(t: Transversal, p_vec: Vec<Rational>) -> Self {
        ModelSpec {
            p_vec: Some(p_vec),
            transversal: t,
            ..ModelSpec::bare(ModelKind::E2)
        }
    }

    /// E2 where some edges are already committed to exactly one layer.
    pub fn e2_hybrid(t: Transversal, states: Vec<EdgeState>) -> Self {
        ModelSpec {
            edge_states: Some(states),
            transversal: t,
            ..ModelSpec::bare(ModelKind::E2)
        }
    }

    pub fn e3(t: Transversal) -> Self {
        ModelSpec {
            transversal: t,
            ..ModelSpec::bare(ModelKind::E3)
        }
    }

    pub fn e4(t: Transversal, partition: EdgePartition) -> Self {
        ModelSpec {
            transversal: t,
            partition: Some(partition),
            ..ModelSpec::bare(ModelKind::E4)
        }
    }

    pub fn e5(p: Rational, t: Transversal) -> Self {
        ModelSpec {
            p: Some(Param::Value(p)),
            transversal: t,
            ..ModelSpec::bare(ModelKind::E5)
        }
    }

    pub fn d1() -> Self {
        ModelSpec::bare(ModelKind::D1)
    }

    pub fn d2(t: Transversal) -> Self {
        ModelSpec {
            transversal: t,
            ..ModelSpec::bare(ModelKind::D2)
        }
    }

    pub fn d3(t: Transversal) -> Self {
        ModelSpec {
            transversal: t,
            ..ModelSpec::bare(ModelKind::D3)
        }
    }

    /// Replaces a numeric `p` by the formal variable.
    pub fn symbolic(mut self) -> Self {
        if self.p.is_some() {
            self.p = Some(Param::Symbolic);
        }
        self
    }

    pub fn with_transversal(mut self, t: Transversal) -> Self {
        self.transversal = t;
        self
    }

    pub(crate) fn require_absent(&self, uses_p: bool, uses_t: bool) -> Result<()> {
        let kind = self.kind;
        let stray = |what: &str| Err(Error::ModelMismatch(format!("{kind} takes no {what}")));
        if !uses_p && self.p.is_some() {
            return stray("p");
        }
        if kind != ModelKind::E2 && (self.p_vec.is_some() || self.edge_states.is_some()) {
            return stray("per-edge probability vector");
        }
        if kind != ModelKind::E4 && self.partition.is_some() {
            return stray("edge partition");
        }
        if !uses_t && !self.transversal.is_empty() {
            return stray("transversal set");
        }
        if kind != ModelKind::E1 && self.surface != Surface::Bunkbed {
            return stray("surface choice");
        }
        Ok(())
    }

    pub(crate) fn required_p(&self) -> Result<Param> {
        let p = self
            .p
            .clone()
            .ok_or_else(|| Error::ModelMismatch(format!("{} needs p", self.kind)))?;
        p.check()?;
        Ok(p)
    }
}

/// One interchangeable probability model bound to a graph.
pub trait Model: Send + Sync + fmt::Debug {
    fn kind(&self) -> ModelKind;

    /// Short human-readable description including parameters.
    fn describe(&self) -> String;

    fn graph(&self) -> &MultiGraph;

    /// Probability that each outcome bit is 1, as a polynomial in `p`
    /// (constant unless the model was built symbolically).
    fn bit_laws(&self) -> &[UniPoly];

    /// Reach set of `start` in the outcome encoded by `outcome`.
    fn reach(&self, outcome: u64, start: Endpoint) -> ReachSet;

    /// Models without layers (plain percolation on `G`, directed paths)
    /// ignore the layer of query targets.
    fn layered(&self) -> bool {
        true
    }

    /// Edge colouring of an outcome, for the colour models only.
    fn coloring(&self, _outcome: u64) -> Option<Coloring> {
        None
    }
}

type Factory = fn(&MultiGraph, &ModelSpec) -> Result<Box<dyn Model>>;

pub struct ModelEntry {
    pub name: &'static str,
    pub kind: ModelKind,
    pub summary: &'static str,
    build: Factory,
}

impl ModelEntry {
    pub fn build(&self, g: &MultiGraph, spec: &ModelSpec) -> Result<Box<dyn Model>> {
        (self.build)(g, spec)
    }
}

static REGISTRY: [ModelEntry; 8] = [
    ModelEntry {
        name: "e1",
        kind: ModelKind::E1,
        summary: "every bunkbed edge present with probability p",
        build: |g, s| Ok(Box::new(EdgePercolation::from_spec(g, s)?)),
    },
    ModelEntry {
        name: "e2",
        kind: ModelKind::E2,
        summary: "vertical edges exactly at T, horizontal images present with probability p_e",
        build: |g, s| Ok(Box::new(Kasteleyn::from_spec(g, s)?)),
    },
    ModelEntry {
        name: "e3",
        kind: ModelKind::E3,
        summary: "fair red/blue edge colouring, colour switches only at T",
        build: |g, s| Ok(Box::new(ColorSwitching::from_spec(g, s)?)),
    },
    ModelEntry {
        name: "e4",
        kind: ModelKind::E4,
        summary: "fair colouring of partition blocks, colour switches only at T",
        build: |g, s| Ok(Box::new(ColorSwitching::from_spec(g, s)?)),
    },
    ModelEntry {
        name: "e5",
        kind: ModelKind::E5,
        summary: "edges red with probability p, colour switches only at T",
        build: |g, s| Ok(Box::new(ColorSwitching::from_spec(g, s)?)),
    },
    ModelEntry {
        name: "d1",
        kind: ModelKind::D1,
        summary: "uniform random orientation, directed paths",
        build: |g, s| Ok(Box::new(RandomOrientation::from_spec(g, s)?)),
    },
    ModelEntry {
        name: "d2",
        kind: ModelKind::D2,
        summary: "uniform random orientation, direction switches at T",
        build: |g, s| Ok(Box::new(DirectionSwitching::from_spec(g, s)?)),
    },
    ModelEntry {
        name: "d3",
        kind: ModelKind::D3,
        summary: "as d2, but no edge may be used in both directions",
        build: |g, s| Ok(Box::new(NonReversing::from_spec(g, s)?)),
    },
];

pub fn registry() -> &'static [ModelEntry] {
    &REGISTRY
}

pub fn lookup(name: &str) -> Result<&'static ModelEntry> {
    let lower = name.to_ascii_lowercase();
    REGISTRY
        .iter()
        .find(|e| e.name == lower)
        .ok_or_else(|| Error::UnknownName {
            name: name.to_string(),
            known: REGISTRY.iter().map(|e| e.name).collect::<Vec<_>>().join(", "),
        })
}

pub fn build_model(g: &MultiGraph, spec: &ModelSpec) -> Result<Box<dyn Model>> {
    spec.transversal.validate(g)?;
    lookup(spec.kind.name())?.build(g, spec)
}

/// Event "every source reaches every target".
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Query {
    pub sources: Vec<Endpoint>,
    pub targets: Vec<Endpoint>,
}

impl Query {
    /// `u_0 -> v_layer` (for orientation models: `u` travelling with the
    /// directions, arriving with (0) or against (1) them).
    pub fn two_point(u: VertexId, v: VertexId, layer: u8) -> Self {
        Query {
            sources: vec![Endpoint::new(u, 0)],
            targets: vec![Endpoint::new(v, layer)],
        }
    }

    pub fn joint(start: Endpoint, targets: Vec<Endpoint>) -> Self {
        Query {
            sources: vec![start],
            targets,
        }
    }

    /// Walks from every one of `sources` to `target`.
    pub fn from_all(sources: Vec<Endpoint>, target: Endpoint) -> Self {
        Query {
            sources,
            targets: vec![target],
        }
    }

    pub fn validate(&self, g: &MultiGraph) -> Result<()> {
        if self.sources.is_empty() {
            return Err(Error::Precondition("query needs a start endpoint".into()));
        }
        for p in self.sources.iter().chain(&self.targets) {
            g.check_vertex(p.vertex)?;
            if p.layer > 1 {
                return Err(Error::Precondition(format!("layer {} is not 0 or 1", p.layer)));
            }
        }
        Ok(())
    }

    pub(crate) fn holds(&self, model: &dyn Model, outcome: u64) -> bool {
        let layered = model.layered();
        self.sources.iter().all(|&s| {
            let reach = model.reach(outcome, s);
            self.targets.iter().all(|&t| {
                if layered {
                    reach.contains(t)
                } else {
                    reach.contains_vertex(t.vertex)
                }
            })
        })
    }
}

/// Expands block bits into a per-edge blue mask.
pub(crate) fn expand_blocks(partition: &EdgePartition, outcome: u64) -> u64 {
    let mut blue = 0u64;
    for (i, block) in partition.blocks().iter().enumerate() {
        if outcome >> i & 1 == 1 {
            for &e in block {
                blue |= 1 << e;
            }
        }
    }
    blue
}

pub(crate) fn check_edge_bits(g: &MultiGraph, bits: usize) -> Result<()> {
    if bits > 64 {
        return Err(Error::guard("outcome bits", 64, bits as u64));
    }
    let _ = g;
    Ok(())
}

pub(crate) fn edge_id_check(g: &MultiGraph, e: EdgeId) -> Result<()> {
    g.endpoints(e).map(|_| ())
}
