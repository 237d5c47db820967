use crate::error::{Error, Result};
use crate::graph::{MultiGraph, Transversal};
use crate::poly::UniPoly;
use crate::rational::half;
use crate::reach::{Endpoint, Kernel, ReachSet, MAX_NONREVERSING_EDGES};

use super::{check_edge_bits, Model, ModelKind, ModelSpec};

/// Outcome bit `e` set means edge `e` points from its first stored
/// endpoint to its second; every orientation has probability `2^-m`.
fn fair_laws(g: &MultiGraph) -> Result<Vec<UniPoly>> {
    check_edge_bits(g, g.edge_count())?;
    Ok(vec![UniPoly::constant(half()); g.edge_count()])
}

fn describe_t(name: &str, t: &Transversal) -> String {
    let members: Vec<String> = t.members().iter().map(|v| v.to_string()).collect();
    format!("{name}(T={{{}}})", members.join(","))
}

/// D1: directed paths in a uniformly random orientation.
#[derive(Debug)]
pub struct RandomOrientation {
    graph: MultiGraph,
    kernel: Kernel,
    laws: Vec<UniPoly>,
}

impl RandomOrientation {
    pub fn new(g: &MultiGraph) -> Result<Self> {
        Ok(RandomOrientation {
            graph: g.clone(),
            kernel: Kernel::new(g, &Transversal::empty()),
            laws: fair_laws(g)?,
        })
    }

    pub(crate) fn from_spec(g: &MultiGraph, spec: &ModelSpec) -> Result<Self> {
        spec.require_absent(false, false)?;
        RandomOrientation::new(g)
    }
}

impl Model for RandomOrientation {
    fn kind(&self) -> ModelKind {
        ModelKind::D1
    }

    fn describe(&self) -> String {
        "d1".into()
    }

    fn graph(&self) -> &MultiGraph {
        &self.graph
    }

    fn bit_laws(&self) -> &[UniPoly] {
        &self.laws
    }

    fn layered(&self) -> bool {
        false
    }

    fn reach(&self, outcome: u64, start: Endpoint) -> ReachSet {
        let mut set = ReachSet::empty(self.graph.vertex_count());
        for (x, hit) in self.kernel.directed(outcome, start.vertex).into_iter().enumerate() {
            if hit {
                set.insert(Endpoint::new(x, 0));
                set.insert(Endpoint::new(x, 1));
            }
        }
        set
    }
}

/// D2: walks follow the directions or go against them, switching only at `T`.
#[derive(Debug)]
pub struct DirectionSwitching {
    graph: MultiGraph,
    transversal: Transversal,
    kernel: Kernel,
    laws: Vec<UniPoly>,
}

impl DirectionSwitching {
    pub fn new(g: &MultiGraph, t: &Transversal) -> Result<Self> {
        t.validate(g)?;
        Ok(DirectionSwitching {
            graph: g.clone(),
            transversal: t.clone(),
            kernel: Kernel::new(g, t),
            laws: fair_laws(g)?,
        })
    }

    pub(crate) fn from_spec(g: &MultiGraph, spec: &ModelSpec) -> Result<Self> {
        spec.require_absent(false, true)?;
        DirectionSwitching::new(g, &spec.transversal)
    }
}

impl Model for DirectionSwitching {
    fn kind(&self) -> ModelKind {
        ModelKind::D2
    }

    fn describe(&self) -> String {
        describe_t("d2", &self.transversal)
    }

    fn graph(&self) -> &MultiGraph {
        &self.graph
    }

    fn bit_laws(&self) -> &[UniPoly] {
        &self.laws
    }

    fn reach(&self, outcome: u64, start: Endpoint) -> ReachSet {
        self.kernel.mode(outcome, start)
    }
}

/// D3: as D2, but no edge may be traversed in both physical directions.
#[derive(Debug)]
pub struct NonReversing {
    graph: MultiGraph,
    transversal: Transversal,
    kernel: Kernel,
    laws: Vec<UniPoly>,
}

impl NonReversing {
    pub fn new(g: &MultiGraph, t: &Transversal) -> Result<Self> {
        t.validate(g)?;
        if g.edge_count() > MAX_NONREVERSING_EDGES {
            return Err(Error::guard(
                "non-reversing walk edges",
                MAX_NONREVERSING_EDGES as u64,
                g.edge_count() as u64,
            ));
        }
        Ok(NonReversing {
            graph: g.clone(),
            transversal: t.clone(),
            kernel: Kernel::new(g, t),
            laws: fair_laws(g)?,
        })
    }

    pub(crate) fn from_spec(g: &MultiGraph, spec: &ModelSpec) -> Result<Self> {
        spec.require_absent(false, true)?;
        NonReversing::new(g, &spec.transversal)
    }
}

impl Model for NonReversing {
    fn kind(&self) -> ModelKind {
        ModelKind::D3
    }

    fn describe(&self) -> String {
        describe_t("d3", &self.transversal)
    }

    fn graph(&self) -> &MultiGraph {
        &self.graph
    }

    fn bit_laws(&self) -> &[UniPoly] {
        &self.laws
    }

    fn reach(&self, outcome: u64, start: Endpoint) -> ReachSet {
        self.kernel
            .nonreversing(outcome, start)
            .expect("edge guard checked at construction")
    }
}
