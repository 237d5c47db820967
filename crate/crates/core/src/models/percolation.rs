use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{BunkbedGraph, MultiGraph, Transversal};
use crate::poly::UniPoly;
use crate::rational::{half, is_probability, Rational};
use crate::reach::{Endpoint, Kernel, ReachSet};

use super::{check_edge_bits, Model, ModelKind, ModelSpec, Param};

/// Where E1 percolation runs: on the bunkbed `G × K_2` or on `G` itself.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Surface {
    #[default]
    Bunkbed,
    Base,
}

/// E1: every edge of the surface graph present independently.
///
/// On the bunkbed, outcome bit `i` is derived edge `i` (horizontals of
/// layer 0, then layer 1, then one vertical slot per vertex). On the base
/// graph, bit `e` is edge `e` and reach sets carry no layer information.
#[derive(Debug)]
pub struct EdgePercolation {
    graph: MultiGraph,
    surface: Surface,
    param: Param,
    kernel: Kernel,
    laws: Vec<UniPoly>,
}

impl EdgePercolation {
    pub fn new(g: &MultiGraph, param: Param, surface: Surface) -> Result<Self> {
        param.check()?;
        let host = match surface {
            Surface::Bunkbed => BunkbedGraph::new(g).derived().clone(),
            Surface::Base => g.clone(),
        };
        check_edge_bits(&host, host.edge_count())?;
        Ok(EdgePercolation {
            graph: g.clone(),
            surface,
            kernel: Kernel::new(&host, &Transversal::empty()),
            laws: vec![param.law(); host.edge_count()],
            param,
        })
    }

    pub(crate) fn from_spec(g: &MultiGraph, spec: &ModelSpec) -> Result<Self> {
        spec.require_absent(true, false)?;
        EdgePercolation::new(g, spec.required_p()?, spec.surface)
    }

    pub fn surface(&self) -> Surface {
        self.surface
    }
}

impl Model for EdgePercolation {
    fn kind(&self) -> ModelKind {
        ModelKind::E1
    }

    fn describe(&self) -> String {
        let p = match &self.param {
            Param::Value(r) => r.to_string(),
            Param::Symbolic => "p".into(),
        };
        match self.surface {
            Surface::Bunkbed => format!("e1(p={p})"),
            Surface::Base => format!("e1(p={p}, on G)"),
        }
    }

    fn graph(&self) -> &MultiGraph {
        &self.graph
    }

    fn bit_laws(&self) -> &[UniPoly] {
        &self.laws
    }

    fn layered(&self) -> bool {
        self.surface == Surface::Bunkbed
    }

    fn reach(&self, outcome: u64, start: Endpoint) -> ReachSet {
        let n = self.graph.vertex_count();
        let mut set = ReachSet::empty(n);
        match self.surface {
            Surface::Bunkbed => {
                let seen = self.kernel.plain(outcome, start.vertex + start.layer as usize * n);
                for (id, hit) in seen.into_iter().enumerate() {
                    if hit {
                        set.insert(Endpoint::new(id % n, (id / n) as u8));
                    }
                }
            }
            Surface::Base => {
                for (x, hit) in self.kernel.plain(outcome, start.vertex).into_iter().enumerate() {
                    if hit {
                        set.insert(Endpoint::new(x, 0));
                        set.insert(Endpoint::new(x, 1));
                    }
                }
            }
        }
        set
    }
}

/// Per-edge state of the E2 model, extended by the one-layer state used
/// when conditioning on edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeState {
    /// Both horizontal images present independently with this probability.
    Free(#[serde(serialize_with = "crate::rational::serialize_fraction")] Rational),
    /// Exactly one image present, each layer with probability 1/2.
    OneLayer,
}

/// E2: vertical edges exactly at `T`; horizontal images governed by each
/// edge's [`EdgeState`]. A free edge takes two outcome bits (layer 0, then
/// layer 1), a one-layer edge takes one (set = upstairs).
#[derive(Debug)]
pub struct Kasteleyn {
    graph: MultiGraph,
    states: Vec<EdgeState>,
    kernel: Kernel,
    n: usize,
    verticals: u64,
    /// Derived edge for each outcome bit, with the alternative for a clear
    /// bit when the edge is one-layer.
    slots: Vec<(usize, Option<usize>)>,
    laws: Vec<UniPoly>,
}

impl Kasteleyn {
    pub fn new(g: &MultiGraph, t: &Transversal, states: Vec<EdgeState>) -> Result<Self> {
        t.validate(g)?;
        if states.len() != g.edge_count() {
            return Err(Error::ModelMismatch(format!(
                "{} edge probabilities for {} edges",
                states.len(),
                g.edge_count()
            )));
        }
        let bb = BunkbedGraph::new(g);
        let mut slots = Vec::new();
        let mut laws = Vec::new();
        for (e, state) in states.iter().enumerate() {
            match state {
                EdgeState::Free(p) => {
                    if !is_probability(p) {
                        return Err(Error::Precondition(format!("p_{e} = {p} outside [0, 1]")));
                    }
                    for layer in 0..2 {
                        slots.push((bb.horizontal(e, layer), None));
                        laws.push(UniPoly::constant(p.clone()));
                    }
                }
                EdgeState::OneLayer => {
                    slots.push((bb.horizontal(e, 1), Some(bb.horizontal(e, 0))));
                    laws.push(UniPoly::constant(half()));
                }
            }
        }
        check_edge_bits(g, slots.len())?;
        let verticals = t.members().iter().fold(0u64, |acc, &x| acc | 1 << bb.vertical(x));
        let derived = bb.derived();
        if derived.edge_count() > 64 {
            return Err(Error::guard("bunkbed edge slots", 64, derived.edge_count() as u64));
        }
        Ok(Kasteleyn {
            graph: g.clone(),
            states,
            kernel: Kernel::new(derived, &Transversal::empty()),
            n: g.vertex_count(),
            verticals,
            slots,
            laws,
        })
    }

    pub(crate) fn from_spec(g: &MultiGraph, spec: &ModelSpec) -> Result<Self> {
        spec.require_absent(false, true)?;
        let states = match (&spec.p_vec, &spec.edge_states) {
            (Some(pv), None) => pv.iter().cloned().map(EdgeState::Free).collect(),
            (None, Some(states)) => states.clone(),
            _ => {
                return Err(Error::ModelMismatch(
                    "e2 needs exactly one of a probability vector or edge states".into(),
                ))
            }
        };
        Kasteleyn::new(g, &spec.transversal, states)
    }

    pub fn states(&self) -> &[EdgeState] {
        &self.states
    }

    fn present(&self, outcome: u64) -> u64 {
        let mut present = self.verticals;
        for (i, &(on, off)) in self.slots.iter().enumerate() {
            if outcome >> i & 1 == 1 {
                present |= 1 << on;
            } else if let Some(off) = off {
                present |= 1 << off;
            }
        }
        present
    }
}

impl Model for Kasteleyn {
    fn kind(&self) -> ModelKind {
        ModelKind::E2
    }

    fn describe(&self) -> String {
        let states: Vec<String> = self
            .states
            .iter()
            .map(|s| match s {
                EdgeState::Free(p) => p.to_string(),
                EdgeState::OneLayer => "one-layer".into(),
            })
            .collect();
        format!("e2(p=[{}])", states.join(", "))
    }

    fn graph(&self) -> &MultiGraph {
        &self.graph
    }

    fn bit_laws(&self) -> &[UniPoly] {
        &self.laws
    }

    fn reach(&self, outcome: u64, start: Endpoint) -> ReachSet {
        let n = self.n;
        let seen = self
            .kernel
            .plain(self.present(outcome), start.vertex + start.layer as usize * n);
        let mut set = ReachSet::empty(n);
        for (id, hit) in seen.into_iter().enumerate() {
            if hit {
                set.insert(Endpoint::new(id % n, (id / n) as u8));
            }
        }
        set
    }
}
