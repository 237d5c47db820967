use std::collections::BTreeSet;

use bunkbed::models::{bbc_margin, ModelKind, ModelSpec};
use bunkbed::rational::ratio;
use bunkbed::search::{enumerate_graphs, find_figure2, scan_conjecture, InstanceFilter, ScanOptions, ScanVariant};
use bunkbed::{MultiGraph, Rational, Transversal};

fn zero() -> Rational {
    Rational::from_integer(0.into())
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn sorted_edges(edges: impl Iterator<Item = (usize, usize)>) -> Vec<(usize, usize)> {
    let mut e: Vec<_> = edges.map(|(a, b)| (a.min(b), a.max(b))).collect();
    e.sort();
    e
}

/// Brute force over all vertex permutations.
fn isomorphic(g: &MultiGraph, h: &MultiGraph) -> bool {
    if g.vertex_count() != h.vertex_count() || g.edge_count() != h.edge_count() {
        return false;
    }
    let target = sorted_edges(h.edges().iter().copied());
    permutations(g.vertex_count())
        .into_iter()
        .any(|p| sorted_edges(g.edges().iter().map(|&(a, b)| (p[a], p[b]))) == target)
}

/// Isomorphism classes of labelled graphs on `n` vertices, by brute force.
fn brute_classes(n: usize, max_mult: usize, max_edges: usize, connected: bool) -> usize {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let mut reps: Vec<MultiGraph> = Vec::new();
    let total = (max_mult + 1).pow(pairs.len() as u32);
    for code in 0..total {
        let mut c = code;
        let mut edges = Vec::new();
        for &pr in &pairs {
            for _ in 0..c % (max_mult + 1) {
                edges.push(pr);
            }
            c /= max_mult + 1;
        }
        if edges.len() > max_edges {
            continue;
        }
        let g = MultiGraph::new(n, edges).unwrap();
        if connected && !g.is_connected() {
            continue;
        }
        if !reps.iter().any(|r| isomorphic(r, &g)) {
            reps.push(g);
        }
    }
    reps.len()
}

#[test]
fn small_connected_counts() {
    let f = InstanceFilter::connected(3).with_min_vertices(2);
    let graphs = enumerate_graphs(&f).unwrap();
    assert_eq!(graphs.len(), 3);
    assert_eq!(graphs[0], MultiGraph::path(1));

    let single = enumerate_graphs(&InstanceFilter::connected(1)).unwrap();
    assert_eq!(single, vec![MultiGraph::empty(1)]);
}

#[test]
fn known_class_counts() {
    // connected graphs on 1..=6 vertices: 1, 1, 2, 6, 21, 112
    let graphs = enumerate_graphs(&InstanceFilter::connected(6)).unwrap();
    let mut by_n = [0usize; 7];
    for g in &graphs {
        by_n[g.vertex_count()] += 1;
    }
    assert_eq!(&by_n[1..], &[1, 1, 2, 6, 21, 112]);

    // all graphs on 5 vertices: 34
    let mut all = InstanceFilter::connected(5).with_min_vertices(5);
    all.connected_only = false;
    assert_eq!(enumerate_graphs(&all).unwrap().len(), 34);
}

#[test]
fn order_is_by_size_then_code() {
    let graphs = enumerate_graphs(&InstanceFilter::connected(5)).unwrap();
    for w in graphs.windows(2) {
        let a = (w[0].vertex_count(), w[0].edge_count());
        let b = (w[1].vertex_count(), w[1].edge_count());
        assert!(a <= b);
    }
    assert_eq!(graphs, enumerate_graphs(&InstanceFilter::connected(5)).unwrap());
}

#[test]
fn dedup_matches_brute_force_isomorphism() {
    for n in 1..=4 {
        let f = InstanceFilter::connected(n).with_min_vertices(n);
        let graphs = enumerate_graphs(&f).unwrap();
        for (i, g) in graphs.iter().enumerate() {
            for h in &graphs[i + 1..] {
                assert!(!isomorphic(g, h), "{g} and {h} are isomorphic");
            }
        }
        assert_eq!(graphs.len(), brute_classes(n, 1, usize::MAX, true));

        let mf = InstanceFilter::connected(n).with_min_vertices(n).with_max_edges(5).multigraphs(3);
        let multi = enumerate_graphs(&mf).unwrap();
        for (i, g) in multi.iter().enumerate() {
            for h in &multi[i + 1..] {
                assert!(!isomorphic(g, h));
            }
        }
        assert_eq!(multi.len(), brute_classes(n, 3, 5, true), "n = {n}");
    }
}

#[test]
fn outerplanar_filter_drops_k4() {
    let f = InstanceFilter::connected(4).with_min_vertices(4).outerplanar();
    let graphs = enumerate_graphs(&f).unwrap();
    assert_eq!(graphs.len(), 5);
    assert!(!graphs.iter().any(|g| isomorphic(g, &MultiGraph::complete(4))));
}

#[test]
fn filter_guards() {
    assert!(enumerate_graphs(&InstanceFilter::connected(9)).is_err());
    assert!(enumerate_graphs(&InstanceFilter::connected(3).with_min_vertices(4)).is_err());
    let mut f = InstanceFilter::connected(3);
    f.multigraph = true;
    assert!(enumerate_graphs(&f).is_err());
}

#[test]
fn e3_scan_small_graphs() {
    let f = InstanceFilter::connected(4);
    let opts = ScanOptions {
        keep_all: true,
        ..ScanOptions::default()
    };
    let report = scan_conjecture(ModelKind::E3, &f, &opts).unwrap();
    assert!(!report.has_violation());
    assert_eq!(report.min_margin(), Some(&zero()));
    assert_eq!(report.graphs, 10);
    assert_eq!(report.instances, report.records.len());

    let graphs = enumerate_graphs(&f).unwrap();
    let mut cutset_cases = 0;
    for r in &report.records {
        let g = &graphs[r.graph_index];
        let t: BTreeSet<usize> = r.t.iter().copied().collect();
        let cut = t.contains(&r.u) || t.contains(&r.v) || (r.u != r.v && g.separates(&t, r.u, r.v));
        if cut {
            cutset_cases += 1;
            assert_eq!(r.margin, zero(), "{r:?}");
        }
    }
    assert!(cutset_cases > 0);
    assert!(report.equalities >= cutset_cases);

    // double entry on a sample
    for r in report.records.iter().step_by(37) {
        let g = &graphs[r.graph_index];
        let spec = ModelSpec::e3(Transversal::new(r.t.iter().copied()));
        assert_eq!(bbc_margin(g, &spec, r.u, r.v).unwrap(), r.margin);
    }
}

#[test]
fn d2_scan_is_nonnegative() {
    let report = scan_conjecture(ModelKind::D2, &InstanceFilter::connected(4), &ScanOptions::default()).unwrap();
    assert!(!report.has_violation());
    assert!(report.min_margin().unwrap() >= &zero());
}

#[test]
fn anti_correlated_scan_finds_p2() {
    let f = InstanceFilter::connected(3).with_min_vertices(3);
    let opts = ScanOptions {
        variant: ScanVariant::AntiCorrelated,
        ..ScanOptions::default()
    };
    let report = scan_conjecture(ModelKind::E3, &f, &opts).unwrap();
    assert!(report.has_violation());
    let p2 = &report.per_graph[0];
    assert!(isomorphic(&MultiGraph::new(3, vec![(0, 1), (1, 2)]).unwrap(), &enumerate_graphs(&f).unwrap()[p2.graph_index]));
    assert_eq!(p2.margin, ratio(-1, 2));

    assert!(scan_conjecture(ModelKind::D2, &f, &opts).is_err());
}

#[test]
fn scan_output_is_thread_independent() {
    let f = InstanceFilter::connected(4);
    let opts = ScanOptions::default();
    let a = serde_json::to_string(&scan_conjecture(ModelKind::E2, &f, &opts).unwrap()).unwrap();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let b = pool.install(|| serde_json::to_string(&scan_conjecture(ModelKind::E2, &f, &opts).unwrap()).unwrap());
    assert_eq!(a, b);
    assert!(a.contains("\"e2_grid\":[\"1/4\",\"1/2\",\"3/4\"]"));
}

#[test]
fn table_lists_each_graph() {
    let report = scan_conjecture(ModelKind::E1, &InstanceFilter::connected(3), &ScanOptions::default()).unwrap();
    let table = report.render_table();
    assert_eq!(table.lines().count(), report.graphs + 2);
    assert!(table.lines().last().unwrap().contains("violations 0"));
}

#[test]
fn figure2_reconstruction() {
    let report = find_figure2().unwrap();
    assert!(!report.matches.is_empty());
    // the diamond with the degree-2 vertices marked, found by hand earlier
    let diamond = MultiGraph::new(4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
    let mut diamond_found = false;
    for m in &report.matches {
        assert_eq!(m.graph.vertex_count(), 4);
        assert_eq!(m.graph.edge_count(), 5);
        assert_eq!(m.d3, ratio(13, 16));
        assert_eq!(m.e3, ratio(7, 8));
        assert_eq!(&m.e3 - &m.d3, ratio(1, 16));
        // D2 gives 13/16 here too, so no orientation separates the two walks
        assert_eq!(m.separating_orientation, None);
        diamond_found |= isomorphic(&m.graph, &diamond) && m.graph.degree(m.u) == 2 && m.graph.degree(m.v) == 2;
    }
    assert!(diamond_found);
    assert_eq!(report.matches.len(), 2);
}
