//! Exhaustive checks of the structural identities over a graph corpus.
//!
//! Every check returns one [`LemmaRow`]; a row passes when no instance
//! failed. Checks are independent and run over the corpus in parallel.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::graph::{EdgePartition, MultiGraph, Transversal};
use crate::models::{build_model, exact_prob, two_point_table, ModelSpec, Query};
use crate::rational::{half, ratio, to_fraction_string, Rational};
use crate::reach::{mode_reach, reaches_transversal, reversal_involution, Endpoint, Orientation};
use crate::reductions::{self, verify_reduction, Triple, VerificationReport};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaRow {
    pub name: String,
    pub checked: usize,
    pub failures: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl LemmaRow {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Clone, Debug, Default)]
struct Tally {
    checked: usize,
    failures: usize,
    first_failure: Option<String>,
}

impl Tally {
    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(what());
            }
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.checked += other.checked;
        self.failures += other.failures;
        if self.first_failure.is_none() {
            self.first_failure = other.first_failure;
        }
        self
    }

    fn row(self, name: &str) -> LemmaRow {
        LemmaRow {
            name: name.to_string(),
            checked: self.checked,
            failures: self.failures,
            first_failure: self.first_failure,
            note: None,
        }
    }
}

fn over_corpus(corpus: &[MultiGraph], f: impl Fn(&MultiGraph) -> Result<Tally> + Sync) -> Result<Tally> {
    let parts: Vec<Tally> = corpus.par_iter().map(&f).collect::<Result<_>>()?;
    Ok(parts.into_iter().fold(Tally::default(), Tally::merge))
}

fn all_transversals(n: usize) -> impl Iterator<Item = Transversal> {
    (0..1u64 << n).map(move |m| Transversal::from_mask(m, n))
}

fn zero() -> Rational {
    Rational::from_integer(0.into())
}

/// Margins `P(u_0 -> v_0) - P(u_0 -> v_1)` for all `u, v`.
fn margins(g: &MultiGraph, spec: &ModelSpec) -> Result<Vec<Vec<Rational>>> {
    let model = build_model(g, spec)?;
    (0..g.vertex_count())
        .map(|u| {
            Ok(two_point_table(model.as_ref(), u)?
                .into_iter()
                .map(|[a, b]| (&a - &b).as_constant().expect("numeric model"))
                .collect())
        })
        .collect()
}

fn describe(g: &MultiGraph, t: &Transversal, u: usize, v: usize) -> String {
    format!("{g} T={:?} u={u} v={v}", t.members())
}

/// E3 margin is 0 when `u` or `v` is in `T` or `T` separates them.
pub fn check_cutset(corpus: &[MultiGraph]) -> Result<LemmaRow> {
    let tally = over_corpus(corpus, |g| {
        let mut tally = Tally::default();
        let n = g.vertex_count();
        for t in all_transversals(n) {
            let m = margins(g, &ModelSpec::e3(t.clone()))?;
            for u in 0..n {
                for v in 0..n {
                    let cut = t.contains(u) || t.contains(v) || (u != v && g.separates(t.members(), u, v));
                    if cut {
                        tally.record(m[u][v] == zero(), || describe(g, &t, u, v));
                    }
                }
            }
        }
        Ok(tally)
    })?;
    Ok(tally.row("cutset"))
}

/// E2 margin is nonnegative when `|T| <= 1`, for every rotation of `grid`.
pub fn check_few_vertices(corpus: &[MultiGraph], grid: &[Rational]) -> Result<LemmaRow> {
    let tally = over_corpus(corpus, |g| {
        let mut tally = Tally::default();
        let n = g.vertex_count();
        for t in all_transversals(n).filter(|t| t.len() <= 1) {
            for shift in 0..grid.len() {
                let p_vec = (0..g.edge_count()).map(|e| grid[(e + shift) % grid.len()].clone()).collect();
                let m = margins(g, &ModelSpec::e2(t.clone(), p_vec))?;
                for u in 0..n {
                    for v in 0..n {
                        tally.record(m[u][v] >= zero(), || {
                            format!("{} shift={shift} margin={}", describe(g, &t, u, v), to_fraction_string(&m[u][v]))
                        });
                    }
                }
            }
        }
        Ok(tally)
    })?;
    Ok(tally.row("few-vertices"))
}

/// Plain percolation at 1/2 on `G` equals the random-orientation model.
pub fn check_equal(corpus: &[MultiGraph]) -> Result<LemmaRow> {
    let tally = over_corpus(corpus, |g| {
        let mut tally = Tally::default();
        let e1 = build_model(g, &ModelSpec::e1_base(half()))?;
        let d1 = build_model(g, &ModelSpec::d1())?;
        for u in 0..g.vertex_count() {
            let a = two_point_table(e1.as_ref(), u)?;
            let b = two_point_table(d1.as_ref(), u)?;
            for v in 0..g.vertex_count() {
                tally.record(a[v][0] == b[v][0], || format!("{g} u={u} v={v}"));
            }
        }
        Ok(tally)
    })?;
    Ok(tally.row("plain-equals-oriented"))
}

/// D2 margins are nonnegative; on orientations with a walk from `u` to
/// `T` the reversal involution pairs arrivals with and against, so the
/// restricted margin is 0.
pub fn check_d2(corpus: &[MultiGraph]) -> Result<LemmaRow> {
    let tally = over_corpus(corpus, |g| {
        let mut tally = Tally::default();
        let n = g.vertex_count();
        let m = g.edge_count();
        for t in all_transversals(n) {
            let full = margins(g, &ModelSpec::d2(t.clone()))?;
            for u in 0..n {
                for v in 0..n {
                    tally.record(full[u][v] >= zero(), || describe(g, &t, u, v));
                }
                // restricted counts per target, and involution properties
                let mut with = vec![0i64; n];
                let mut against = vec![0i64; n];
                for mask in 0..1u64 << m {
                    let o = Orientation::from_mask(mask, m);
                    if !reaches_transversal(g, &t, &o, u)? {
                        continue;
                    }
                    let start = Endpoint::new(u, 0);
                    let reach = mode_reach(g, &t, &o, start)?;
                    let cert = reversal_involution(g, &t, &o, u)?;
                    let back = reversal_involution(g, &t, &cert.reversed, u)?;
                    let reach_r = mode_reach(g, &t, &cert.reversed, start)?;
                    let mut ok = back.reversed == o
                        && back.both_ways == cert.both_ways
                        && back.kept_edges == cert.kept_edges;
                    for v in 0..n {
                        ok &= reach.contains(Endpoint::new(v, 0)) == reach_r.contains(Endpoint::new(v, 1));
                        with[v] += reach.contains(Endpoint::new(v, 0)) as i64;
                        against[v] += reach.contains(Endpoint::new(v, 1)) as i64;
                    }
                    tally.record(ok, || format!("{} orientation={mask:#b}", describe(g, &t, u, u)));
                }
                for v in 0..n {
                    tally.record(with[v] == against[v], || format!("restricted margin {}", describe(g, &t, u, v)));
                }
            }
        }
        Ok(tally)
    })?;
    Ok(tally.row("direction-switching"))
}

/// E3 margin across a cut vertex `x` factors into the margins of the two
/// sides.
pub fn check_cut_vertex(corpus: &[MultiGraph]) -> Result<LemmaRow> {
    let tally = over_corpus(corpus, |g| {
        let mut tally = Tally::default();
        let n = g.vertex_count();
        for x in g.cut_vertices() {
            let comps = g.components_after_removal(&[x].into());
            for comp in &comps {
                let side1: BTreeSet<usize> = comp.iter().copied().chain([x]).collect();
                let side2: BTreeSet<usize> = (0..n).filter(|w| !comp.contains(w)).collect();
                let g1 = g.induced(&side1);
                let g2 = g.induced(&side2);
                for t in all_transversals(n) {
                    let t1 = t.through(&g1);
                    let t2 = t.through(&g2);
                    let m = margins(g, &ModelSpec::e3(t.clone()))?;
                    let m1 = margins(&g1.graph, &ModelSpec::e3(t1))?;
                    let m2 = margins(&g2.graph, &ModelSpec::e3(t2))?;
                    let x1 = g1.vertex(x).expect("x on side one");
                    let x2 = g2.vertex(x).expect("x on side two");
                    for &u in comp {
                        for v in side2.iter().copied().filter(|&v| v != x) {
                            let u1 = g1.vertex(u).expect("u on side one");
                            let v2 = g2.vertex(v).expect("v on side two");
                            let product = &m1[u1][x1] * &m2[x2][v2];
                            tally.record(m[u][v] == product, || format!("x={x} {}", describe(g, &t, u, v)));
                        }
                    }
                }
            }
        }
        Ok(tally)
    })?;
    Ok(tally.row("cut-vertex-factorisation"))
}

/// Per-operation counts from [`reduction_sweep`].
#[derive(Clone, Debug, Default, Serialize)]
pub struct SweepReport {
    /// Operation name to (steps verified, steps failed).
    pub per_op: BTreeMap<String, (usize, usize)>,
    pub failures: Vec<VerificationReport>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn merge(mut self, other: SweepReport) -> SweepReport {
        for (k, (a, f)) in other.per_op {
            let e = self.per_op.entry(k).or_default();
            e.0 += a;
            e.1 += f;
        }
        self.failures.extend(other.failures);
        self
    }
}

/// Colour, layered and two-edge-block triples of `g` for every `T` and
/// every pair `u < v`.
pub fn sweep_triples(g: &MultiGraph) -> Result<Vec<Triple>> {
    let n = g.vertex_count();
    let m = g.edge_count();
    let mut out = Vec::new();
    for t in all_transversals(n) {
        for u in 0..n {
            for v in u + 1..n {
                out.push(Triple::colored(g.clone(), t.clone(), u, v)?);
                let p_vec = (0..m).map(|e| ratio(1 + (e % 3) as i64, 4)).collect();
                out.push(Triple::layered(g.clone(), t.clone(), p_vec, u, v)?);
                let single = EdgePartition::singletons(g);
                for e in 0..m {
                    for f in e + 1..m {
                        if let Ok(p) = single.merged(g, &[e, f]) {
                            out.push(Triple::new(g.clone(), t.clone(), p, u, v)?);
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Applies every registered reduction at every site of every sweep triple
/// and verifies each step.
pub fn reduction_sweep(corpus: &[MultiGraph]) -> Result<SweepReport> {
    let parts: Vec<SweepReport> = corpus
        .par_iter()
        .map(|g| {
            let mut report = SweepReport::default();
            for tr in sweep_triples(g)? {
                for r in reductions::registry() {
                    for site in r.sites(&tr) {
                        let check = verify_reduction(&r.apply(&tr, site)?)?;
                        let e = report.per_op.entry(r.name().to_string()).or_default();
                        e.0 += 1;
                        if !check.passed() {
                            e.1 += 1;
                            report.failures.push(check);
                        }
                    }
                }
            }
            Ok(report)
        })
        .collect::<Result<_>>()?;
    Ok(parts.into_iter().fold(SweepReport::default(), SweepReport::merge))
}

fn sweep_row(sweep: &SweepReport) -> LemmaRow {
    let failures = sweep.per_op.values().map(|c| c.1).sum();
    LemmaRow {
        name: "reductions".into(),
        checked: sweep.per_op.values().map(|c| c.0).sum(),
        failures,
        first_failure: sweep.failures.first().map(|f| format!("{} at {}", f.op, f.site)),
        note: Some(
            sweep
                .per_op
                .iter()
                .map(|(k, c)| format!("{k}:{}", c.0))
                .collect::<Vec<_>>()
                .join(" "),
        ),
    }
}

/// A reduction step with one weight perturbed; the row must fail.
pub fn negative_control() -> Result<LemmaRow> {
    let tr = Triple::colored(MultiGraph::cycle(4), Transversal::empty(), 0, 2)?;
    let step = reductions::v2_reduce(&tr, 1)?.perturbed(0, &ratio(1, 8));
    let report = verify_reduction(&step)?;
    let mut tally = Tally::default();
    tally.record(report.passed(), || {
        let worst = report.failures().next().map(|c| to_fraction_string(&c.discrepancy()));
        format!("perturbed v2_reduce, discrepancy {}", worst.unwrap_or_default())
    });
    Ok(tally.row("negative-control"))
}

/// E3 versus D3 on the reconstructed example; both margins must be 0.
pub fn figure2_row() -> Result<LemmaRow> {
    let found = crate::search::find_figure2()?;
    let mut tally = Tally::default();
    for m in &found.matches {
        let t = Transversal::new([m.u, m.v]);
        for spec in [ModelSpec::e3(t.clone()), ModelSpec::d3(t.clone())] {
            let a = exact_prob(&m.graph, &spec, &Query::two_point(m.u, m.v, 0))?;
            let b = exact_prob(&m.graph, &spec, &Query::two_point(m.u, m.v, 1))?;
            tally.record(a >= b, || describe(&m.graph, &t, m.u, m.v));
        }
    }
    let mut row = tally.row("figure2");
    row.note = found.matches.first().map(|m| {
        format!(
            "e3={} d3={} gap={}",
            to_fraction_string(&m.e3),
            to_fraction_string(&m.d3),
            to_fraction_string(&(&m.e3 - &m.d3))
        )
    });
    Ok(row)
}

#[derive(Clone, Debug, Default)]
pub struct LemmaOptions {
    pub include_figure2: bool,
    pub negative_control: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaReport {
    pub graphs: usize,
    pub rows: Vec<LemmaRow>,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(LemmaRow::passed)
    }
}

/// Runs every check on `corpus`.
pub fn verify_lemmas(corpus: &[MultiGraph], opts: &LemmaOptions) -> Result<LemmaReport> {
    let grid = [ratio(1, 4), half(), ratio(3, 4)];
    let mut rows = vec![
        check_cutset(corpus)?,
        check_few_vertices(corpus, &grid)?,
        check_equal(corpus)?,
        check_d2(corpus)?,
        check_cut_vertex(corpus)?,
        sweep_row(&reduction_sweep(corpus)?),
    ];
    if opts.include_figure2 {
        rows.push(figure2_row()?);
    }
    if opts.negative_control {
        rows.push(negative_control()?);
    }
    Ok(LemmaReport {
        graphs: corpus.len(),
        rows,
    })
}
