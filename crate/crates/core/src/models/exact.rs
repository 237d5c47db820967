//! Exact probabilities by enumerating every outcome of a model.
//!
//! Outcomes are grouped by how many bits of each distinct law are set, so
//! the rational (or polynomial) weight of a group is computed once and
//! the per-outcome work is a reach computation plus integer counting.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, MultiGraph, VertexId};
use crate::poly::UniPoly;
use crate::rational::Rational;
use crate::reach::Endpoint;

use super::{build_model, edge_id_check, Model, ModelKind, ModelSpec, Query};

/// At most `2^24` outcomes are enumerated exactly.
pub const MAX_OUTCOME_BITS: usize = 24;

const CHUNK: u64 = 1 << 12;

struct LawClasses {
    /// Bits of each class, as a mask over outcome bits.
    masks: Vec<u64>,
    /// `weights[c][k]`: weight of `k` set bits among class `c`.
    weights: Vec<Vec<UniPoly>>,
}

impl LawClasses {
    fn new(laws: &[UniPoly]) -> Self {
        let mut distinct: Vec<&UniPoly> = Vec::new();
        let mut masks: Vec<u64> = Vec::new();
        for (i, law) in laws.iter().enumerate() {
            match distinct.iter().position(|&d| d == law) {
                Some(c) => masks[c] |= 1 << i,
                None => {
                    distinct.push(law);
                    masks.push(1 << i);
                }
            }
        }
        let weights = distinct
            .iter()
            .zip(&masks)
            .map(|(&law, mask)| {
                let size = mask.count_ones() as usize;
                let off = &UniPoly::one() - law;
                (0..=size).map(|k| &law.pow(k) * &off.pow(size - k)).collect()
            })
            .collect();
        LawClasses { masks, weights }
    }

    fn key(&self, outcome: u64) -> u128 {
        self.masks
            .iter()
            .enumerate()
            .fold(0u128, |acc, (c, m)| acc | ((outcome & m).count_ones() as u128) << (5 * c))
    }

    fn weight(&self, key: u128) -> UniPoly {
        self.weights.iter().enumerate().fold(UniPoly::one(), |acc, (c, table)| {
            let k = (key >> (5 * c) & 31) as usize;
            &acc * &table[k]
        })
    }
}

/// Probability, as a polynomial in `p`, of each of `slots` events; `event`
/// sets `flags[i]` when event `i` holds in an outcome.
pub(crate) fn tally<F>(model: &dyn Model, slots: usize, event: F) -> Result<Vec<UniPoly>>
where
    F: Fn(u64, &mut [bool]) + Sync,
{
    let bits = model.bit_laws().len();
    if bits > MAX_OUTCOME_BITS {
        return Err(Error::guard("enumerated outcomes (log2)", MAX_OUTCOME_BITS as u64, bits as u64));
    }
    let classes = LawClasses::new(model.bit_laws());
    let total = 1u64 << bits;
    let chunks = total.div_ceil(CHUNK);
    let counts = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut local: HashMap<u128, Vec<u64>> = HashMap::new();
            let mut flags = vec![false; slots];
            for outcome in c * CHUNK..((c + 1) * CHUNK).min(total) {
                flags.iter_mut().for_each(|f| *f = false);
                event(outcome, &mut flags);
                if flags.iter().any(|&f| f) {
                    let row = local.entry(classes.key(outcome)).or_insert_with(|| vec![0; slots]);
                    for (r, &f) in row.iter_mut().zip(&flags) {
                        *r += f as u64;
                    }
                }
            }
            local
        })
        .reduce(HashMap::new, |mut a, b| {
            for (k, row) in b {
                let into = a.entry(k).or_insert_with(|| vec![0; slots]);
                for (x, y) in into.iter_mut().zip(row) {
                    *x += y;
                }
            }
            a
        });
    let mut keys: Vec<_> = counts.keys().copied().collect();
    keys.sort_unstable();
    let mut out = vec![UniPoly::zero(); slots];
    for key in keys {
        let w = classes.weight(key);
        for (acc, &count) in out.iter_mut().zip(&counts[&key]) {
            if count > 0 {
                *acc = &*acc + &w.scale(&Rational::from_integer(count.into()));
            }
        }
    }
    Ok(out)
}

fn constant(poly: UniPoly) -> Result<Rational> {
    poly.as_constant().ok_or_else(|| {
        Error::ModelMismatch("model was built with a symbolic p; use the polynomial form".into())
    })
}

/// Sum of all outcome weights; exactly 1 for a well-formed model.
pub fn total_probability(model: &dyn Model) -> Result<UniPoly> {
    Ok(tally(model, 1, |_, f| f[0] = true)?.remove(0))
}

pub fn probability_poly(model: &dyn Model, q: &Query) -> Result<UniPoly> {
    q.validate(model.graph())?;
    Ok(tally(model, 1, |o, f| f[0] = q.holds(model, o))?.remove(0))
}

pub fn probability(model: &dyn Model, q: &Query) -> Result<Rational> {
    constant(probability_poly(model, q)?)
}

/// Several queries in one enumeration pass.
pub fn probabilities(model: &dyn Model, queries: &[Query]) -> Result<Vec<Rational>> {
    for q in queries {
        q.validate(model.graph())?;
    }
    tally(model, queries.len(), |o, f| {
        for (slot, q) in f.iter_mut().zip(queries) {
            *slot = q.holds(model, o);
        }
    })?
    .into_iter()
    .map(constant)
    .collect()
}

pub fn exact_prob(g: &MultiGraph, spec: &ModelSpec, q: &Query) -> Result<Rational> {
    probability(build_model(g, spec)?.as_ref(), q)
}

/// Probability that `start` reaches every endpoint of `targets`.
pub fn joint_prob(g: &MultiGraph, spec: &ModelSpec, start: Endpoint, targets: &[Endpoint]) -> Result<Rational> {
    exact_prob(g, spec, &Query::joint(start, targets.to_vec()))
}

/// Connection probability as a polynomial in `p`; E1 and E5 only. The
/// numeric `p` of `spec`, if any, is ignored.
pub fn connection_polynomial(g: &MultiGraph, spec: &ModelSpec, q: &Query) -> Result<UniPoly> {
    if !matches!(spec.kind, ModelKind::E1 | ModelKind::E5) {
        return Err(Error::ModelMismatch(format!(
            "{} has no probability parameter",
            spec.kind
        )));
    }
    let mut spec = spec.clone();
    spec.p = Some(super::Param::Symbolic);
    probability_poly(build_model(g, &spec)?.as_ref(), q)
}

/// `P(u_0 -> v_0)` and `P(u_0 -> v_1)` for every `v`, in one sweep.
pub fn two_point_table(model: &dyn Model, u: VertexId) -> Result<Vec<[UniPoly; 2]>> {
    let n = model.graph().vertex_count();
    model.graph().check_vertex(u)?;
    let layered = model.layered();
    let polys = tally(model, 2 * n, |o, f| {
        let reach = model.reach(o, Endpoint::new(u, 0));
        for p in reach.iter() {
            f[2 * p.vertex + p.layer as usize] = true;
            if !layered {
                f[2 * p.vertex + 1 - p.layer as usize] = true;
            }
        }
    })?;
    let mut it = polys.into_iter();
    Ok((0..n)
        .map(|_| [it.next().expect("two slots"), it.next().expect("per vertex")])
        .collect())
}

/// `P(u_0 -> v_0) - P(u_0 -> v_1)`; for orientation models the layers
/// are "arriving with" and "arriving against" the edge directions.
pub fn bbc_margin(g: &MultiGraph, spec: &ModelSpec, u: VertexId, v: VertexId) -> Result<Rational> {
    let model = build_model(g, spec)?;
    let q0 = Query::two_point(u, v, 0);
    let q1 = Query::two_point(u, v, 1);
    let polys = {
        q0.validate(g)?;
        q1.validate(g)?;
        let m = model.as_ref();
        tally(m, 2, |o, f| {
            let reach = m.reach(o, Endpoint::new(u, 0));
            f[0] = reach.contains(Endpoint::new(v, 0));
            f[1] = reach.contains(Endpoint::new(v, 1));
        })?
    };
    let [a, b]: [UniPoly; 2] = polys.try_into().expect("two slots");
    Ok(constant(a)? - constant(b)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Same,
    Different,
}

/// Requires edges `pair.0` and `pair.1` to have the same or different colours.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ColorConstraint {
    pub pair: (EdgeId, EdgeId),
    pub relation: Relation,
}

impl ColorConstraint {
    pub fn same(e: EdgeId, f: EdgeId) -> Self {
        ColorConstraint {
            pair: (e, f),
            relation: Relation::Same,
        }
    }

    pub fn different(e: EdgeId, f: EdgeId) -> Self {
        ColorConstraint {
            pair: (e, f),
            relation: Relation::Different,
        }
    }

    fn holds(&self, blue: &[bool]) -> bool {
        let same = blue[self.pair.0] == blue[self.pair.1];
        same == (self.relation == Relation::Same)
    }
}

/// Probability of `q` given that every colour constraint holds.
pub fn exact_prob_conditional(
    g: &MultiGraph,
    spec: &ModelSpec,
    q: &Query,
    constraints: &[ColorConstraint],
) -> Result<Rational> {
    if !matches!(spec.kind, ModelKind::E3 | ModelKind::E4 | ModelKind::E5) {
        return Err(Error::ModelMismatch(format!(
            "colour constraints need a colour model, not {}",
            spec.kind
        )));
    }
    for c in constraints {
        edge_id_check(g, c.pair.0)?;
        edge_id_check(g, c.pair.1)?;
    }
    let model = build_model(g, spec)?;
    let m = model.as_ref();
    q.validate(g)?;
    let polys = tally(m, 2, |o, f| {
        let coloring = m.coloring(o).expect("colour model");
        if constraints.iter().all(|c| c.holds(&coloring.0)) {
            f[0] = true;
            f[1] = q.holds(m, o);
        }
    })?;
    let [cond, joint]: [UniPoly; 2] = polys.try_into().expect("two slots");
    let cond = constant(cond)?;
    if cond == Rational::from_integer(0.into()) {
        return Err(Error::ZeroProbability);
    }
    Ok(constant(joint)? / cond)
}
