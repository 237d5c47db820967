use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use super::{enumerate_graphs, InstanceFilter};
use crate::error::{Error, Result};
use crate::graph::{EdgePartition, MultiGraph, Transversal};
use crate::models::{build_model, exact_prob_conditional, two_point_table, ColorConstraint, ModelKind, ModelSpec, Param, Query};
use crate::rational::{half, ratio, serialize_fraction, to_fraction_string, Rational};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanVariant {
    #[default]
    Standard,
    /// Colour models conditioned on edges 0 and 1 getting different colours.
    AntiCorrelated,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanOptions {
    /// Edge or red probability for E1 and E5.
    #[serde(serialize_with = "serialize_fraction")]
    pub p: Rational,
    /// E2 edge probabilities, assigned as `grid[(e + shift) % len]` for every shift.
    #[serde(serialize_with = "serialize_seq")]
    pub e2_grid: Vec<Rational>,
    pub variant: ScanVariant,
    /// Only transversals with at most this many vertices.
    pub max_transversal: Option<usize>,
    /// Keep every evaluated instance in the report.
    pub keep_all: bool,
}

fn serialize_seq<S: serde::Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(to_fraction_string))
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            p: half(),
            e2_grid: vec![ratio(1, 4), ratio(1, 2), ratio(3, 4)],
            variant: ScanVariant::Standard,
            max_transversal: None,
            keep_all: false,
        }
    }
}

/// One evaluated `(G, T, u, v)` and its margin `P(u_0 -> v_0) - P(u_0 -> v_1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InstanceRecord {
    pub graph_index: usize,
    pub graph: String,
    pub t: Vec<usize>,
    pub u: usize,
    pub v: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shift: Option<usize>,
    #[serde(serialize_with = "serialize_fraction")]
    pub margin: Rational,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanReport {
    pub model: String,
    pub variant: ScanVariant,
    pub filter: InstanceFilter,
    pub options: ScanOptions,
    pub graphs: usize,
    pub instances: usize,
    pub equalities: usize,
    pub worst: Option<InstanceRecord>,
    /// Minimum margin of each graph, with its witness.
    pub per_graph: Vec<InstanceRecord>,
    pub violations: Vec<InstanceRecord>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub records: Vec<InstanceRecord>,
}

impl ScanReport {
    pub fn min_margin(&self) -> Option<&Rational> {
        self.worst.as_ref().map(|r| &r.margin)
    }

    pub fn has_violation(&self) -> bool {
        !self.violations.is_empty()
    }

    pub fn render_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{:<6} {:<10} {:<12} {:>3} {:>3}  graph", "id", "margin", "T", "u", "v");
        for r in &self.per_graph {
            let t = format!("{{{}}}", r.t.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","));
            let flag = if r.margin < Rational::from_integer(0.into()) { "  VIOLATION" } else { "" };
            let _ = writeln!(
                out,
                "{:<6} {:<10} {:<12} {:>3} {:>3}  {}{}",
                r.graph_index,
                to_fraction_string(&r.margin),
                t,
                r.u,
                r.v,
                r.graph,
                flag
            );
        }
        let min = self.min_margin().map(to_fraction_string).unwrap_or_else(|| "-".into());
        let _ = writeln!(
            out,
            "model {} graphs {} instances {} equalities {} violations {} min {}",
            self.model,
            self.graphs,
            self.instances,
            self.equalities,
            self.violations.len(),
            min
        );
        out
    }
}

fn uses_transversal(kind: ModelKind) -> bool {
    !matches!(kind, ModelKind::E1 | ModelKind::D1)
}

fn spec_for(kind: ModelKind, g: &MultiGraph, t: &Transversal, shift: usize, opts: &ScanOptions) -> ModelSpec {
    match kind {
        ModelKind::E1 => ModelSpec::e1(opts.p.clone()),
        ModelKind::E2 => {
            let k = opts.e2_grid.len();
            let p_vec = (0..g.edge_count()).map(|e| opts.e2_grid[(e + shift) % k].clone()).collect();
            ModelSpec::e2(t.clone(), p_vec)
        }
        ModelKind::E3 => ModelSpec::e3(t.clone()),
        ModelKind::E4 => ModelSpec::e4(t.clone(), EdgePartition::singletons(g)),
        ModelKind::E5 => ModelSpec::e5(opts.p.clone(), t.clone()),
        ModelKind::D1 => ModelSpec::d1(),
        ModelKind::D2 => ModelSpec::d2(t.clone()),
        ModelKind::D3 => ModelSpec::d3(t.clone()),
    }
}

struct GraphScan {
    records: Vec<InstanceRecord>,
    count: usize,
    equalities: usize,
    worst: Option<InstanceRecord>,
    violations: Vec<InstanceRecord>,
}

fn scan_graph(kind: ModelKind, index: usize, g: &MultiGraph, opts: &ScanOptions) -> Result<GraphScan> {
    let n = g.vertex_count();
    let zero = Rational::from_integer(0.into());
    let transversals: Vec<Transversal> = if uses_transversal(kind) {
        (0..1u64 << n)
            .map(|mask| Transversal::from_mask(mask, n))
            .filter(|t| opts.max_transversal.map_or(true, |k| t.len() <= k))
            .collect()
    } else {
        vec![Transversal::empty()]
    };
    let shifts: Vec<Option<usize>> = if kind == ModelKind::E2 {
        (0..opts.e2_grid.len()).map(Some).collect()
    } else {
        vec![None]
    };
    let anti = opts.variant == ScanVariant::AntiCorrelated;
    let mut out = GraphScan {
        records: Vec::new(),
        count: 0,
        equalities: 0,
        worst: None,
        violations: Vec::new(),
    };
    if anti && g.edge_count() < 2 {
        return Ok(out);
    }
    let label = g.to_string();
    for t in &transversals {
        for &shift in &shifts {
            let spec = spec_for(kind, g, t, shift.unwrap_or(0), opts);
            let mut margins = Vec::with_capacity(n * n);
            if anti {
                let cond = [ColorConstraint::different(0, 1)];
                for u in 0..n {
                    for v in 0..n {
                        let a = exact_prob_conditional(g, &spec, &Query::two_point(u, v, 0), &cond)?;
                        let b = exact_prob_conditional(g, &spec, &Query::two_point(u, v, 1), &cond)?;
                        margins.push((u, v, a - b));
                    }
                }
            } else {
                let model = build_model(g, &spec)?;
                for u in 0..n {
                    let table = two_point_table(model.as_ref(), u)?;
                    for (v, [a, b]) in table.into_iter().enumerate() {
                        let d = &a - &b;
                        let d = d
                            .as_constant()
                            .ok_or_else(|| Error::Precondition("scan needs numeric parameters".into()))?;
                        margins.push((u, v, d));
                    }
                }
            }
            for (u, v, margin) in margins {
                out.count += 1;
                if margin == zero {
                    out.equalities += 1;
                }
                let record = || InstanceRecord {
                    graph_index: index,
                    graph: label.clone(),
                    t: t.members().iter().copied().collect(),
                    u,
                    v,
                    shift,
                    margin: margin.clone(),
                };
                if margin < zero {
                    out.violations.push(record());
                }
                if out.worst.as_ref().map_or(true, |w| margin < w.margin) {
                    out.worst = Some(record());
                }
                if opts.keep_all {
                    out.records.push(record());
                }
            }
        }
    }
    Ok(out)
}

/// Exact margins for every graph passing `filter`, every transversal (when
/// the model uses one) and every ordered pair `u, v`.
pub fn scan_conjecture(kind: ModelKind, filter: &InstanceFilter, opts: &ScanOptions) -> Result<ScanReport> {
    if opts.variant == ScanVariant::AntiCorrelated && !matches!(kind, ModelKind::E3 | ModelKind::E4 | ModelKind::E5) {
        return Err(Error::ModelMismatch(format!(
            "the anti-correlated variant needs a colour model, not {kind}"
        )));
    }
    if kind == ModelKind::E2 && opts.e2_grid.is_empty() {
        return Err(Error::Precondition("E2 scan needs a non-empty probability grid".into()));
    }
    Param::Value(opts.p.clone()).check()?;
    for p in &opts.e2_grid {
        Param::Value(p.clone()).check()?;
    }
    let graphs = enumerate_graphs(filter)?;
    let scans: Vec<GraphScan> = graphs
        .par_iter()
        .enumerate()
        .map(|(i, g)| scan_graph(kind, i, g, opts))
        .collect::<Result<_>>()?;
    let mut report = ScanReport {
        model: kind.name().to_string(),
        variant: opts.variant,
        filter: filter.clone(),
        options: opts.clone(),
        graphs: graphs.len(),
        instances: 0,
        equalities: 0,
        worst: None,
        per_graph: Vec::new(),
        violations: Vec::new(),
        records: Vec::new(),
    };
    for s in scans {
        report.instances += s.count;
        report.equalities += s.equalities;
        report.violations.extend(s.violations);
        report.records.extend(s.records);
        if let Some(w) = s.worst {
            if report.worst.as_ref().map_or(true, |cur| w.margin < cur.margin) {
                report.worst = Some(w.clone());
            }
            report.per_graph.push(w);
        }
    }
    Ok(report)
}
