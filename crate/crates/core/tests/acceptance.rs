//! Acceptance suite: one PASS/FAIL line per criterion. Runs without the
//! libtest harness so the lines always reach the test output.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use bunkbed::lemmas::{check_cutset, check_d2, check_few_vertices, negative_control, reduction_sweep};
use bunkbed::models::{
    build_model, critical_probability, exact_prob, exact_prob_conditional, mc_estimate, two_point_table,
    ColorConstraint, EdgeState, ModelKind, ModelSpec, Query,
};
use bunkbed::poly::{Sign, UniPoly};
use bunkbed::rational::{half, int, ratio, to_f64};
use bunkbed::reductions;
use bunkbed::search::{enumerate_graphs, find_figure2, scan_conjecture, InstanceFilter, ScanOptions};
use bunkbed::{EdgePartition, MultiGraph, Rational, Transversal};

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn tol() -> Rational {
    ratio(1, 1_000_000_000)
}

fn c1_critical_p1() -> Outcome {
    let r = critical_probability(&MultiGraph::path(1), 0, 1, &tol()).map_err(|e| e.to_string())?;
    check(r.roots.len() == 1, format!("{} roots", r.roots.len()))?;
    let root = &r.roots[0];
    let third = ratio(1, 3);
    check(root.interval.contains(&third), "interval misses 1/3")?;
    check(root.interval.width() <= tol(), "interval too wide")?;
    check(root.left == Some(Sign::Negative) && root.right == Some(Sign::Positive), "sign pattern is not -/+")?;
    Ok(format!("root {:.12}", root.interval.approx()))
}

fn c2_critical_p2() -> Outcome {
    let r = critical_probability(&MultiGraph::path(2), 0, 2, &tol()).map_err(|e| e.to_string())?;
    check(r.is_single_crossing(), "not a single -/+ crossing")?;
    let root = &r.roots[0].interval;
    let target = (11.0f64 / 12.0).sqrt() - 0.5;
    check((root.approx() - target).abs() <= 1e-9, format!("root {} vs {target}", root.approx()))?;
    check(root.width() <= tol(), "interval too wide")?;
    // exact: sqrt(11/12) - 1/2 is the root in [0, 1] of 3p^2 + 3p - 2
    let q = UniPoly::new(vec![int(-2), int(3), int(3)]);
    let (a, b) = (q.eval(&root.lo), q.eval(&root.hi));
    check(root.exact || (a < int(0)) != (b < int(0)), "3p^2 + 3p - 2 has no sign change on the interval")?;
    Ok(format!("root {:.12}", root.approx()))
}

fn c3_path_monotonicity() -> Outcome {
    let mut roots = Vec::new();
    for k in 1..=6 {
        let r = critical_probability(&MultiGraph::path(k), 0, k, &tol()).map_err(|e| e.to_string())?;
        check(r.roots.len() == 1, format!("P_{k} has {} roots", r.roots.len()))?;
        roots.push(r.roots[0].interval.clone());
    }
    for w in roots.windows(2) {
        check(w[0].hi < w[1].lo, "roots are not strictly increasing")?;
    }
    check(roots.iter().all(|r| r.hi < half()), "a root is not below 1/2")?;
    let shown: Vec<String> = roots.iter().map(|r| format!("{:.6}", r.approx())).collect();
    Ok(shown.join(" < "))
}

fn c4_figure2() -> Outcome {
    let report = find_figure2().map_err(|e| e.to_string())?;
    check(!report.matches.is_empty(), "no instance found")?;
    for m in &report.matches {
        check(m.graph.vertex_count() == 4 && m.graph.edge_count() == 5, "wrong size")?;
        let t = Transversal::new([m.u, m.v]);
        for layer in 0..2 {
            let q = Query::two_point(m.u, m.v, layer);
            let d3 = exact_prob(&m.graph, &ModelSpec::d3(t.clone()), &q).map_err(|e| e.to_string())?;
            let e3 = exact_prob(&m.graph, &ModelSpec::e3(t.clone()), &q).map_err(|e| e.to_string())?;
            check(d3 == ratio(13, 16) && e3 == ratio(7, 8), format!("{} layer {layer}: d3 {d3} e3 {e3}", m.graph))?;
        }
    }
    Ok(format!("{} matches, first {} u={} v={}", report.matches.len(), report.matches[0].graph, report.matches[0].u, report.matches[0].v))
}

fn c5_plain_equals_oriented() -> Outcome {
    let mut corpus = enumerate_graphs(&InstanceFilter::connected(4)).map_err(|e| e.to_string())?;
    corpus.extend(
        enumerate_graphs(&InstanceFilter::connected(5).with_min_vertices(5).with_max_edges(8))
            .map_err(|e| e.to_string())?,
    );
    let mut pairs = 0;
    for g in &corpus {
        let e1 = build_model(g, &ModelSpec::e1_base(half())).map_err(|e| e.to_string())?;
        let d1 = build_model(g, &ModelSpec::d1()).map_err(|e| e.to_string())?;
        for u in 0..g.vertex_count() {
            let a = two_point_table(e1.as_ref(), u).map_err(|e| e.to_string())?;
            let b = two_point_table(d1.as_ref(), u).map_err(|e| e.to_string())?;
            for v in 0..g.vertex_count() {
                pairs += 1;
                check(a[v][0] == b[v][0], format!("{g} u={u} v={v}: {} vs {}", a[v][0], b[v][0]))?;
            }
        }
    }
    Ok(format!("{} graphs, {pairs} ordered pairs", corpus.len()))
}

fn c6_direction_switching() -> Outcome {
    let corpus = enumerate_graphs(&InstanceFilter::connected(4)).map_err(|e| e.to_string())?;
    let row = check_d2(&corpus).map_err(|e| e.to_string())?;
    check(row.passed(), row.first_failure.clone().unwrap_or_default())?;
    Ok(format!("{} checks", row.checked))
}

fn c7_cutset_and_few_vertices() -> Outcome {
    let mut filter = InstanceFilter::connected(4);
    filter.connected_only = false;
    let corpus = enumerate_graphs(&filter).map_err(|e| e.to_string())?;
    let cut = check_cutset(&corpus).map_err(|e| e.to_string())?;
    check(cut.passed(), format!("cutset: {}", cut.first_failure.clone().unwrap_or_default()))?;
    let grid = [ratio(1, 4), half(), ratio(3, 4)];
    let few = check_few_vertices(&corpus, &grid).map_err(|e| e.to_string())?;
    check(few.passed(), format!("few vertices: {}", few.first_failure.clone().unwrap_or_default()))?;
    Ok(format!("{} graphs, {} zero-margin and {} nonnegative checks", corpus.len(), cut.checked, few.checked))
}

fn handcrafted_multigraphs() -> Vec<MultiGraph> {
    let g = |n, e: &[(usize, usize)]| MultiGraph::new(n, e.to_vec()).unwrap();
    vec![
        g(2, &[(0, 1), (0, 1)]),
        g(2, &[(0, 1), (0, 1), (0, 1)]),
        g(3, &[(0, 1), (0, 1), (1, 2)]),
        g(3, &[(0, 1), (0, 1), (1, 2), (0, 2)]),
        g(3, &[(0, 1), (1, 2), (1, 2), (0, 2), (0, 2)]),
        g(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 1)]),
        g(4, &[(0, 1), (0, 2), (0, 3), (0, 3)]),
        g(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (0, 1)]),
        g(4, &[(0, 1), (1, 2), (1, 2), (2, 3), (1, 3)]),
        g(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (2, 3)]),
    ]
}

fn c8_reduction_soundness() -> Outcome {
    let mut corpus = enumerate_graphs(&InstanceFilter::connected(4)).map_err(|e| e.to_string())?;
    corpus.extend(handcrafted_multigraphs());
    let sweep = reduction_sweep(&corpus).map_err(|e| e.to_string())?;
    if let Some(f) = sweep.failures.first() {
        return Err(format!("{} at {} failed", f.op, f.site));
    }
    for r in reductions::registry() {
        let applied = sweep.per_op.get(r.name()).map_or(0, |c| c.0);
        check(applied > 0, format!("{} never applied", r.name()))?;
    }
    let control = negative_control().map_err(|e| e.to_string())?;
    check(!control.passed(), "perturbed weight was not detected")?;
    let steps: usize = sweep.per_op.values().map(|c| c.0).sum();
    Ok(format!("{steps} steps over {} ops, negative control rejected", sweep.per_op.len()))
}

fn c9_outerplanar() -> Outcome {
    let filter = InstanceFilter::connected(6).with_max_edges(8).outerplanar();
    let report = scan_conjecture(ModelKind::E3, &filter, &ScanOptions::default()).map_err(|e| e.to_string())?;
    if let Some(v) = report.violations.first() {
        return Err(format!("violation on {} T={:?} u={} v={} margin {}", v.graph, v.t, v.u, v.v, v.margin));
    }
    Ok(format!("{} graphs, {} instances, min margin {}", report.graphs, report.instances, report.min_margin().unwrap()))
}

fn c10_forced_different() -> Outcome {
    let g = MultiGraph::path(2);
    let spec = ModelSpec::e3(Transversal::new([1]));
    let cond = [ColorConstraint::different(0, 1)];
    let a = exact_prob_conditional(&g, &spec, &Query::two_point(0, 2, 0), &cond).map_err(|e| e.to_string())?;
    let b = exact_prob_conditional(&g, &spec, &Query::two_point(0, 2, 1), &cond).map_err(|e| e.to_string())?;
    check(a == int(0) && b == half(), format!("{a} vs {b}"))?;
    Ok(format!("{a} < {b}"))
}

fn mc_instances() -> Vec<(MultiGraph, ModelSpec, Query)> {
    let diamond = MultiGraph::new(4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
    let k3 = MultiGraph::complete(3);
    let c4 = MultiGraph::cycle(4);
    let t = |v: &[usize]| Transversal::new(v.iter().copied());
    vec![
        (MultiGraph::path(2), ModelSpec::e1(half()), Query::two_point(0, 2, 1)),
        (k3.clone(), ModelSpec::e1(ratio(3, 4)), Query::two_point(0, 1, 0)),
        (c4.clone(), ModelSpec::e2(t(&[1]), vec![ratio(1, 4), half(), ratio(3, 4), half()]), Query::two_point(0, 2, 0)),
        (diamond.clone(), ModelSpec::e3(t(&[2, 3])), Query::two_point(2, 3, 0)),
        (
            k3.clone(),
            ModelSpec::e4(t(&[2]), EdgePartition::new(&k3, vec![vec![0, 1], vec![2]]).unwrap()),
            Query::two_point(0, 1, 1),
        ),
        (MultiGraph::path(3), ModelSpec::e5(ratio(1, 3), t(&[1])), Query::two_point(0, 3, 0)),
        (MultiGraph::complete(4), ModelSpec::d1(), Query::two_point(0, 3, 0)),
        (c4.clone(), ModelSpec::d2(t(&[0, 2])), Query::two_point(1, 3, 1)),
        (diamond.clone(), ModelSpec::d3(t(&[2, 3])), Query::two_point(2, 3, 1)),
        (
            diamond,
            ModelSpec::e2_hybrid(t(&[0]), vec![EdgeState::Free(half()), EdgeState::OneLayer, EdgeState::Free(ratio(2, 3)), EdgeState::OneLayer, EdgeState::Free(ratio(1, 5))]),
            Query::two_point(2, 3, 0),
        ),
    ]
}

fn c11_monte_carlo() -> Outcome {
    let mut worst: f64 = 0.0;
    for (i, (g, spec, q)) in mc_instances().iter().enumerate() {
        let seed = 1000 + i as u64;
        let exact = to_f64(&exact_prob(g, spec, q).map_err(|e| e.to_string())?);
        let a = mc_estimate(g, spec, q, 100_000, seed).map_err(|e| e.to_string())?;
        let b = mc_estimate(g, spec, q, 100_000, seed).map_err(|e| e.to_string())?;
        check(format!("{a:?}") == format!("{b:?}"), format!("instance {i}: rerun differs"))?;
        let dev = (a.estimate - exact).abs();
        if a.stderr == 0.0 {
            check(dev == 0.0, format!("instance {i}: degenerate estimate {} vs {exact}", a.estimate))?;
        } else {
            let z = dev / a.stderr;
            worst = worst.max(z);
            check(z <= 5.0, format!("instance {i}: {} vs {exact} ({z:.2} se)", a.estimate))?;
        }
    }
    Ok(format!("10 instances, worst deviation {worst:.2} se"))
}

fn main() -> ExitCode {
    let criteria: [(&str, Duration, fn() -> Outcome); 11] = [
        ("critical probability of P_1 is 1/3", Duration::from_secs(1), c1_critical_p1),
        ("critical probability of P_2", Duration::from_secs(1), c2_critical_p2),
        ("path critical points increase below 1/2", Duration::from_secs(60), c3_path_monotonicity),
        ("four-vertex example: D3 13/16, E3 7/8", Duration::from_secs(60), c4_figure2),
        ("plain percolation at 1/2 equals random orientation", Duration::from_secs(300), c5_plain_equals_oriented),
        ("direction switching margins and involution", Duration::from_secs(600), c6_direction_switching),
        ("cutset equality and small-T inequality", Duration::from_secs(600), c7_cutset_and_few_vertices),
        ("reduction soundness", Duration::from_secs(600), c8_reduction_soundness),
        ("outerplanar E3 sweep", Duration::from_secs(1800), c9_outerplanar),
        ("forced different colours reverse the inequality", Duration::from_secs(60), c10_forced_different),
        ("Monte Carlo consistency", Duration::from_secs(600), c11_monte_carlo),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > *limit => Err(format!("{detail}; took {elapsed:.2?}, limit {limit:?}")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS {name} [{elapsed:.2?}] {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name} [{elapsed:.2?}] {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
