use std::fmt;
use std::path::Path;
use std::time::{Duration, Instant};

use serde::Serialize;
use serde_json::{json, Value};

use bunkbed::format::{self, Instance};
use bunkbed::lemmas::{verify_lemmas, LemmaOptions};
use bunkbed::models::{
    self, avg_prob_over_t, avg_prob_over_t_poly, build_model, connection_polynomial, critical_probability,
    exact_prob_conditional, mc_estimate, probability, ColorConstraint, EdgeState, ModelKind, ModelSpec,
    Query,
};
use bunkbed::rational::{parse_rational, to_fraction_string};
use bunkbed::reductions::{self, verify_reduction, Coupling, Site, Triple};
use bunkbed::report::{query_label, Envelope, ReportRecord};
use bunkbed::search::{enumerate_graphs, find_figure2, scan_conjecture, InstanceFilter, ScanOptions, ScanVariant};
use bunkbed::{Rational, Transversal};

use crate::args::{Cli, Command, Format, ModelArgs, QueryArgs, SurfaceArg};

pub enum Outcome {
    Ok,
    /// A verification failed or an inequality was violated.
    Finding,
}

#[derive(Debug)]
pub enum CliError {
    Core(bunkbed::Error),
    Usage(String),
    Io(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Usage(m) => write!(f, "usage: {m}"),
            CliError::Io(m) => write!(f, "{m}"),
        }
    }
}

impl From<bunkbed::Error> for CliError {
    fn from(e: bunkbed::Error) -> Self {
        CliError::Core(e)
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn load(path: &Path) -> Result<Instance> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    format::parse(&text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn rational(text: &str) -> Result<Rational> {
    Ok(parse_rational(text)?)
}

fn transversal(inst: &Instance, text: &str) -> Result<Transversal> {
    let ids = text
        .split([',', ' '])
        .filter(|s| !s.is_empty())
        .map(|s| inst.resolve(s))
        .collect::<bunkbed::Result<Vec<_>>>()?;
    Ok(Transversal::new(ids))
}

fn uses_transversal(kind: ModelKind) -> bool {
    !matches!(kind, ModelKind::E1 | ModelKind::D1)
}

/// Builds the model spec from flags; `T` and the partition come from the
/// instance file unless overridden.
fn model_spec(inst: &Instance, args: &ModelArgs) -> Result<ModelSpec> {
    model_spec_with(inst, args, false)
}

/// As [`model_spec`]; with `symbolic` set, `p` stays a formal variable.
fn model_spec_with(inst: &Instance, args: &ModelArgs, symbolic: bool) -> Result<ModelSpec> {
    let kind = models::lookup(&args.model)?.kind;
    let t = match &args.transversal {
        Some(text) => transversal(inst, text)?,
        None => inst.transversal.clone(),
    };
    let t = if uses_transversal(kind) {
        t
    } else if args.transversal.is_some() && !t.is_empty() {
        return Err(usage(format!("{kind} takes no transversal set")));
    } else {
        Transversal::empty()
    };
    let mut p = args.p.as_deref().map(rational).transpose()?;
    if symbolic && p.is_none() && matches!(kind, ModelKind::E1 | ModelKind::E5) {
        p = Some(Rational::new(1.into(), 2.into()));
    }
    let need_p = |what: &str| p.clone().ok_or_else(|| usage(format!("{kind} needs --p ({what})")));
    if !matches!(kind, ModelKind::E1 | ModelKind::E5) && p.is_some() {
        return Err(usage(format!("{kind} takes no --p")));
    }
    if kind != ModelKind::E2 && !args.p_vec.is_empty() {
        return Err(usage(format!("{kind} takes no --p-vec")));
    }
    if kind != ModelKind::E1 && args.surface.is_some() {
        return Err(usage(format!("{kind} takes no --surface")));
    }
    let spec = match kind {
        ModelKind::E1 => match args.surface {
            Some(SurfaceArg::Base) => ModelSpec::e1_base(need_p("edge probability")?),
            _ => ModelSpec::e1(need_p("edge probability")?),
        },
        ModelKind::E2 => {
            let m = inst.graph.edge_count();
            let vals = args.p_vec.iter().map(|s| rational(s)).collect::<Result<Vec<_>>>()?;
            let p_vec = match vals.len() {
                0 => return Err(usage("e2 needs --p-vec")),
                1 => vec![vals[0].clone(); m],
                k if k == m => vals,
                k => return Err(usage(format!("--p-vec has {k} values for {m} edges"))),
            };
            ModelSpec::e2(t, p_vec)
        }
        ModelKind::E3 => ModelSpec::e3(t),
        ModelKind::E4 => ModelSpec::e4(t, inst.partition.clone()),
        ModelKind::E5 => ModelSpec::e5(need_p("red probability")?, t),
        ModelKind::D1 => ModelSpec::d1(),
        ModelKind::D2 => ModelSpec::d2(t),
        ModelKind::D3 => ModelSpec::d3(t),
    };
    Ok(spec)
}

fn queries(inst: &Instance, q: &QueryArgs) -> Result<Vec<Query>> {
    let u = inst.resolve(&q.from)?;
    let v = inst.resolve(&q.to)?;
    match q.layer {
        Some(l) if l > 1 => Err(usage("--layer must be 0 or 1")),
        Some(l) => Ok(vec![Query::two_point(u, v, l)]),
        None => Ok(vec![Query::two_point(u, v, 0), Query::two_point(u, v, 1)]),
    }
}

fn edge_pair(text: &str) -> Result<(usize, usize)> {
    let ids: Vec<usize> = text
        .split(',')
        .map(|s| s.trim().parse::<usize>().map_err(|_| usage(format!("bad edge pair `{text}`"))))
        .collect::<Result<_>>()?;
    match ids[..] {
        [e, f] => Ok((e, f)),
        _ => Err(usage(format!("edge pair `{text}` must be `e,f`"))),
    }
}

fn print_json(command: &str, body: impl Serialize, elapsed: Option<Duration>) -> Result<()> {
    let mut value = serde_json::to_value(Envelope::new(command, body)).map_err(|e| CliError::Io(e.to_string()))?;
    if let (Some(d), Value::Object(map)) = (elapsed, &mut value) {
        map.insert("timing_ms".into(), json!(d.as_secs_f64() * 1e3));
    }
    println!("{}", serde_json::to_string_pretty(&value).map_err(|e| CliError::Io(e.to_string()))?);
    Ok(())
}

struct Ctx {
    format: Format,
    timing: bool,
    start: Instant,
}

impl Ctx {
    fn elapsed(&self) -> Option<Duration> {
        self.timing.then(|| self.start.elapsed())
    }

    fn text_timing(&self) {
        if let Some(d) = self.elapsed() {
            println!("time {:.3} ms", d.as_secs_f64() * 1e3);
        }
    }

    fn records(&self, command: &str, records: Vec<ReportRecord>, text: impl Fn(&ReportRecord) -> String) -> Result<()> {
        let records: Vec<ReportRecord> = match self.elapsed() {
            Some(d) => records.into_iter().map(|r| r.with_timing(d)).collect(),
            None => records,
        };
        match self.format {
            Format::Json => print_json(command, json!({ "records": records }), None),
            Format::Text => {
                if records.len() == 1 {
                    println!("{}", text(&records[0]));
                } else {
                    for r in &records {
                        println!("{} {}", r.query, text(r));
                    }
                }
                self.text_timing();
                Ok(())
            }
        }
    }
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let ctx = Ctx {
        format: cli.format,
        timing: cli.timing,
        start: Instant::now(),
    };
    match &cli.command {
        Command::Compute {
            graph,
            model,
            query,
            given_different,
            given_same,
        } => {
            let inst = load(graph)?;
            let spec = model_spec(&inst, model)?;
            let built = build_model(&inst.graph, &spec)?;
            let mut constraints = Vec::new();
            for pair in given_different {
                let (e, f) = edge_pair(pair)?;
                constraints.push(ColorConstraint::different(e, f));
            }
            for pair in given_same {
                let (e, f) = edge_pair(pair)?;
                constraints.push(ColorConstraint::same(e, f));
            }
            let mut records = Vec::new();
            for q in queries(&inst, query)? {
                let value = if constraints.is_empty() {
                    probability(built.as_ref(), &q)?
                } else {
                    exact_prob_conditional(&inst.graph, &spec, &q, &constraints)?
                };
                records.push(ReportRecord::new(&inst, built.describe(), query_label(&inst, &q)).with_value(&value));
            }
            ctx.records("compute", records, |r| r.value.clone().unwrap_or_default())?;
            Ok(Outcome::Ok)
        }
        Command::Poly { graph, model, query } => {
            let inst = load(graph)?;
            let spec = model_spec_with(&inst, model, true)?.symbolic();
            let name = format!("{} (symbolic p)", spec.kind);
            let mut records = Vec::new();
            for q in queries(&inst, query)? {
                let poly = connection_polynomial(&inst.graph, &spec, &q)?;
                let mut r = ReportRecord::new(&inst, name.clone(), query_label(&inst, &q)).with_polynomial(&poly);
                r.value = Some(poly.to_string());
                records.push(r);
            }
            // the polynomial's display form is text-only
            if ctx.format == Format::Json {
                for r in &mut records {
                    r.value = None;
                }
            }
            ctx.records("poly", records, |r| r.value.clone().unwrap_or_default())?;
            Ok(Outcome::Ok)
        }
        Command::Critical { graph, from, to, tol } => {
            let inst = load(graph)?;
            let (u, v) = (inst.resolve(from)?, inst.resolve(to)?);
            let tol = rational(tol)?;
            let report = critical_probability(&inst.graph, u, v, &tol)?;
            match ctx.format {
                Format::Json => print_json(
                    "critical",
                    json!({ "instance": inst.hash(), "report": report }),
                    ctx.elapsed(),
                )?,
                Format::Text => {
                    println!("D(p) = {}", report.difference);
                    if report.identically_zero {
                        println!("D vanishes identically");
                    }
                    for r in &report.roots {
                        let side = |s: Option<bunkbed::poly::Sign>| s.map(|s| s.symbol()).unwrap_or('|');
                        println!(
                            "root in [{}, {}] ~ {:.12} sign {}/{}",
                            to_fraction_string(&r.interval.lo),
                            to_fraction_string(&r.interval.hi),
                            r.interval.approx(),
                            side(r.left),
                            side(r.right)
                        );
                    }
                    ctx.text_timing();
                }
            }
            Ok(Outcome::Ok)
        }
        Command::Average { graph, query, p } => {
            let inst = load(graph)?;
            let p = p.as_deref().map(rational).transpose()?;
            let mut records = Vec::new();
            for q in queries(&inst, query)? {
                let label = query_label(&inst, &q);
                let r = match &p {
                    Some(p) => {
                        let value = avg_prob_over_t(&inst.graph, p, &q)?;
                        ReportRecord::new(&inst, format!("e5 averaged over T, p={}", to_fraction_string(p)), label)
                            .with_value(&value)
                    }
                    None => {
                        let poly = avg_prob_over_t_poly(&inst.graph, &q)?;
                        let mut r = ReportRecord::new(&inst, "e5 averaged over T", label).with_polynomial(&poly);
                        if ctx.format == Format::Text {
                            r.value = Some(poly.to_string());
                        }
                        r
                    }
                };
                records.push(r);
            }
            ctx.records("average", records, |r| r.value.clone().unwrap_or_default())?;
            Ok(Outcome::Ok)
        }
        Command::Estimate {
            graph,
            model,
            query,
            samples,
            seed,
        } => {
            let inst = load(graph)?;
            let spec = model_spec(&inst, model)?;
            let mut rows = Vec::new();
            for q in queries(&inst, query)? {
                let est = mc_estimate(&inst.graph, &spec, &q, *samples, *seed)?;
                rows.push((query_label(&inst, &q), est));
            }
            match ctx.format {
                Format::Json => {
                    let body: Vec<Value> = rows
                        .iter()
                        .map(|(label, est)| json!({ "query": label, "estimate": est }))
                        .collect();
                    print_json(
                        "estimate",
                        json!({ "instance": inst.hash(), "model": spec.kind.name(), "seed": seed, "results": body }),
                        ctx.elapsed(),
                    )?
                }
                Format::Text => {
                    for (label, est) in &rows {
                        println!(
                            "{label} {:.6} +- {:.6} ({}/{})",
                            est.estimate, est.stderr, est.hits, est.samples
                        );
                    }
                    ctx.text_timing();
                }
            }
            Ok(Outcome::Ok)
        }
        Command::VerifyLemmas {
            max_vertices,
            graph,
            figure2,
            negative_control,
        } => {
            let mut corpus = enumerate_graphs(&InstanceFilter::connected(*max_vertices))?;
            for path in graph {
                corpus.push(load(path)?.graph);
            }
            let opts = LemmaOptions {
                include_figure2: *figure2,
                negative_control: *negative_control,
            };
            let report = verify_lemmas(&corpus, &opts)?;
            match ctx.format {
                Format::Json => print_json(
                    "verify-lemmas",
                    json!({ "passed": report.passed(), "report": report }),
                    ctx.elapsed(),
                )?,
                Format::Text => {
                    println!("{:<26} {:>9} {:>8}  status", "check", "instances", "failures");
                    for row in &report.rows {
                        let status = if row.passed() { "PASS" } else { "FAIL" };
                        println!("{:<26} {:>9} {:>8}  {status}", row.name, row.checked, row.failures);
                        if let Some(f) = &row.first_failure {
                            println!("    first failure: {f}");
                        }
                        if let Some(n) = &row.note {
                            println!("    {n}");
                        }
                    }
                    println!("corpus {} graphs", report.graphs);
                    ctx.text_timing();
                }
            }
            Ok(if report.passed() { Outcome::Ok } else { Outcome::Finding })
        }
        Command::Reduce {
            graph,
            op,
            site,
            from,
            to,
            p_vec,
        } => reduce(&ctx, graph, op.as_deref(), site.as_deref(), from, to, p_vec),
        Command::Scan {
            model,
            min_vertices,
            max_vertices,
            max_edges,
            all_graphs,
            outerplanar,
            multigraph,
            p,
            grid,
            anti_correlated,
            max_t,
        } => {
            let kind = models::lookup(model)?.kind;
            let filter = InstanceFilter {
                min_vertices: *min_vertices,
                max_vertices: *max_vertices,
                max_edges: *max_edges,
                connected_only: !all_graphs,
                outerplanar_only: *outerplanar,
                multigraph: multigraph.is_some(),
                max_multiplicity: multigraph.unwrap_or(1),
            };
            let mut opts = ScanOptions {
                variant: if *anti_correlated {
                    ScanVariant::AntiCorrelated
                } else {
                    ScanVariant::Standard
                },
                max_transversal: *max_t,
                ..ScanOptions::default()
            };
            if let Some(p) = p {
                opts.p = rational(p)?;
            }
            if !grid.is_empty() {
                opts.e2_grid = grid.iter().map(|s| rational(s)).collect::<Result<_>>()?;
            }
            let report = scan_conjecture(kind, &filter, &opts)?;
            match ctx.format {
                Format::Json => print_json("scan", &report, ctx.elapsed())?,
                Format::Text => {
                    print!("{}", report.render_table());
                    ctx.text_timing();
                }
            }
            Ok(if report.has_violation() { Outcome::Finding } else { Outcome::Ok })
        }
        Command::FindFigure2 => {
            let report = find_figure2()?;
            match ctx.format {
                Format::Json => print_json("find-figure2", &report, ctx.elapsed())?,
                Format::Text => {
                    println!(
                        "checked {} graphs, {} labelings; {} matches",
                        report.graphs_checked,
                        report.labelings_checked,
                        report.matches.len()
                    );
                    for m in &report.matches {
                        let inst = Instance::new(m.graph.clone()).with_transversal(Transversal::new([m.u, m.v]));
                        println!(
                            "{} u={} v={} d3={} e3={}",
                            m.graph,
                            m.u,
                            m.v,
                            to_fraction_string(&m.d3),
                            to_fraction_string(&m.e3)
                        );
                        print!("{}", inst.render());
                    }
                    ctx.text_timing();
                }
            }
            Ok(Outcome::Ok)
        }
    }
}

fn parse_site(text: &str) -> Result<Site> {
    let (kind, rest) = text
        .split_once(':')
        .ok_or_else(|| usage(format!("site `{text}` must look like `edge:3`")))?;
    let ids: Vec<usize> = rest
        .split(',')
        .map(|s| s.trim().parse::<usize>().map_err(|_| usage(format!("bad id in site `{text}`"))))
        .collect::<Result<_>>()?;
    match (kind, &ids[..]) {
        ("edge", [e]) => Ok(Site::Edge(*e)),
        ("vertex", [x]) => Ok(Site::Vertex(*x)),
        ("triangle", [a, b, c]) => Ok(Site::Triangle(*a, *b, *c)),
        ("pair", [e, f]) => Ok(Site::Pair(*e, *f)),
        _ => Err(usage(format!("unrecognised site `{text}`"))),
    }
}

fn reduce(
    ctx: &Ctx,
    graph: &Path,
    op: Option<&str>,
    site: Option<&str>,
    from: &str,
    to: &str,
    p_vec: &[String],
) -> Result<Outcome> {
    let inst = load(graph)?;
    let (u, v) = (inst.resolve(from)?, inst.resolve(to)?);
    let m = inst.graph.edge_count();
    let coupling = if p_vec.is_empty() {
        Coupling::Partition(inst.partition.clone())
    } else {
        let vals = p_vec.iter().map(|s| rational(s)).collect::<Result<Vec<_>>>()?;
        let vals = match vals.len() {
            1 => vec![vals[0].clone(); m],
            k if k == m => vals,
            k => return Err(usage(format!("--p-vec has {k} values for {m} edges"))),
        };
        Coupling::Hybrid(vals.into_iter().map(EdgeState::Free).collect())
    };
    let triple = Triple::build(inst.graph.clone(), inst.transversal.clone(), coupling, u, v)?;

    let Some(op) = op else {
        let listing: Vec<Value> = reductions::registry()
            .iter()
            .map(|r| {
                let sites: Vec<String> = r.sites(&triple).iter().map(|s| s.to_string()).collect();
                json!({ "op": r.name(), "summary": r.summary(), "sites": sites })
            })
            .collect();
        match ctx.format {
            Format::Json => print_json("reduce", json!({ "operations": listing }), None)?,
            Format::Text => {
                for r in reductions::registry() {
                    let sites: Vec<String> = r.sites(&triple).iter().map(|s| s.to_string()).collect();
                    println!("{:<24} {}", r.name(), r.summary());
                    println!("    sites: {}", if sites.is_empty() { "-".into() } else { sites.join("; ") });
                }
            }
        }
        return Ok(Outcome::Ok);
    };
    let r = reductions::lookup(op)?;
    let Some(site) = site else {
        for s in r.sites(&triple) {
            println!("{s}");
        }
        return Ok(Outcome::Ok);
    };
    let step = r.apply(&triple, parse_site(site)?)?;
    let check = verify_reduction(&step)?;
    match ctx.format {
        Format::Json => print_json(
            "reduce",
            json!({ "step": step, "verification": check, "passed": check.passed() }),
            ctx.elapsed(),
        )?,
        Format::Text => {
            println!("{} at {}", step.op, step.site);
            for (i, c) in step.children.iter().enumerate() {
                println!("child {i} weight {} u={} v={}", to_fraction_string(&c.weight), c.triple.u, c.triple.v);
                for line in c.triple.instance().render().lines() {
                    println!("    {line}");
                }
            }
            for note in &step.notes {
                println!("note: {note}");
            }
            println!("weights sum to {}", to_fraction_string(&check.weight_sum));
            for q in &check.checks {
                println!(
                    "{} parent {} mixture {} {}",
                    q.query,
                    to_fraction_string(&q.parent),
                    to_fraction_string(&q.mixture),
                    if q.holds() { "ok" } else { "MISMATCH" }
                );
            }
            println!("{}", if check.passed() { "PASS" } else { "FAIL" });
            ctx.text_timing();
        }
    }
    Ok(if check.passed() { Outcome::Ok } else { Outcome::Finding })
}
