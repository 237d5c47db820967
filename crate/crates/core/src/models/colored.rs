use crate::error::{Error, Result};
use crate::graph::{EdgePartition, MultiGraph, Transversal};
use crate::poly::UniPoly;
use crate::rational::half;
use crate::reach::{Coloring, Endpoint, Kernel, ReachSet};

use super::{check_edge_bits, expand_blocks, Model, ModelKind, ModelSpec, Param};

/// E3, E4 and E5: red/blue colourings with colour switches at `T`.
///
/// Outcome bit `i` colours block `i` of the partition (set = blue). Every
/// block is red with probability `p` (1/2 for E3 and E4).
#[derive(Debug)]
pub struct ColorSwitching {
    kind: ModelKind,
    graph: MultiGraph,
    transversal: Transversal,
    partition: EdgePartition,
    param: Param,
    kernel: Kernel,
    identity_blocks: bool,
    laws: Vec<UniPoly>,
}

impl ColorSwitching {
    pub fn new(
        kind: ModelKind,
        g: &MultiGraph,
        t: &Transversal,
        partition: EdgePartition,
        param: Param,
    ) -> Result<Self> {
        if !matches!(kind, ModelKind::E3 | ModelKind::E4 | ModelKind::E5) {
            return Err(Error::ModelMismatch(format!("{kind} is not a colour model")));
        }
        t.validate(g)?;
        param.check()?;
        check_edge_bits(g, g.edge_count())?;
        let red = param.law();
        let blue = &UniPoly::one() - &red;
        Ok(ColorSwitching {
            kind,
            graph: g.clone(),
            transversal: t.clone(),
            kernel: Kernel::new(g, t),
            identity_blocks: partition.is_all_singletons(),
            laws: vec![blue; partition.block_count()],
            partition,
            param,
        })
    }

    pub fn e3(g: &MultiGraph, t: &Transversal) -> Result<Self> {
        ColorSwitching::new(ModelKind::E3, g, t, EdgePartition::singletons(g), Param::Value(half()))
    }

    pub fn e4(g: &MultiGraph, t: &Transversal, partition: EdgePartition) -> Result<Self> {
        ColorSwitching::new(ModelKind::E4, g, t, partition, Param::Value(half()))
    }

    pub fn e5(g: &MultiGraph, t: &Transversal, param: Param) -> Result<Self> {
        ColorSwitching::new(ModelKind::E5, g, t, EdgePartition::singletons(g), param)
    }

    pub(crate) fn from_spec(g: &MultiGraph, spec: &ModelSpec) -> Result<Self> {
        let t = &spec.transversal;
        match spec.kind {
            ModelKind::E3 => {
                spec.require_absent(false, true)?;
                ColorSwitching::e3(g, t)
            }
            ModelKind::E4 => {
                spec.require_absent(false, true)?;
                let partition = spec
                    .partition
                    .clone()
                    .ok_or_else(|| Error::ModelMismatch("e4 needs an edge partition".into()))?;
                if partition.edge_count() != g.edge_count() {
                    return Err(Error::InvalidPartition("partition is for a different graph".into()));
                }
                ColorSwitching::e4(g, t, partition)
            }
            _ => {
                spec.require_absent(true, true)?;
                ColorSwitching::e5(g, t, spec.required_p()?)
            }
        }
    }

    pub fn transversal(&self) -> &Transversal {
        &self.transversal
    }

    pub fn partition(&self) -> &EdgePartition {
        &self.partition
    }

    /// Blue edge mask of an outcome.
    pub fn blue_mask(&self, outcome: u64) -> u64 {
        if self.identity_blocks {
            outcome
        } else {
            expand_blocks(&self.partition, outcome)
        }
    }
}

impl Model for ColorSwitching {
    fn kind(&self) -> ModelKind {
        self.kind
    }

    fn describe(&self) -> String {
        let t: Vec<String> = self.transversal.members().iter().map(|v| v.to_string()).collect();
        let t = format!("T={{{}}}", t.join(","));
        match (self.kind, &self.param) {
            (ModelKind::E5, Param::Value(p)) => format!("e5(p={p}, {t})"),
            (ModelKind::E5, Param::Symbolic) => format!("e5(p, {t})"),
            (ModelKind::E4, _) => format!("e4({t}, {} blocks)", self.partition.block_count()),
            _ => format!("e3({t})"),
        }
    }

    fn graph(&self) -> &MultiGraph {
        &self.graph
    }

    fn bit_laws(&self) -> &[UniPoly] {
        &self.laws
    }

    fn reach(&self, outcome: u64, start: Endpoint) -> ReachSet {
        self.kernel.colored(self.blue_mask(outcome), start)
    }

    fn coloring(&self, outcome: u64) -> Option<Coloring> {
        Some(Coloring::from_mask(self.blue_mask(outcome), self.graph.edge_count()))
    }
}
