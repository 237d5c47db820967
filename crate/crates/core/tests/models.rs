use bunkbed::graph::{BunkbedGraph, MultiGraph, Transversal, VertexId};
use bunkbed::models::{
    self, avg_prob_over_t_poly, bbc_margin, build_model, connection_polynomial, critical_probability,
    exact_prob, exact_prob_conditional, joint_prob, mc_estimate, total_probability, ColorConstraint,
    EdgeState, ModelKind, ModelSpec, Query,
};
use bunkbed::poly::{Sign, UniPoly};
use bunkbed::rational::{half, int, ratio, Rational};
use bunkbed::reach::{subgraph_reach, Endpoint};
use bunkbed::EdgePartition;

fn diamond() -> MultiGraph {
    MultiGraph::new(4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]).unwrap()
}

fn t(members: &[VertexId]) -> Transversal {
    Transversal::new(members.iter().copied())
}

fn small_graphs() -> Vec<MultiGraph> {
    vec![
        MultiGraph::path(1),
        MultiGraph::path(2),
        MultiGraph::path(3),
        MultiGraph::cycle(3),
        MultiGraph::cycle(4),
        MultiGraph::complete(4),
        diamond(),
        MultiGraph::new(4, vec![(0, 1), (0, 2), (0, 3)]).unwrap(),
        MultiGraph::new(3, vec![(0, 1), (0, 1), (1, 2)]).unwrap(),
    ]
}

fn all_t(g: &MultiGraph) -> impl Iterator<Item = Transversal> + '_ {
    let n = g.vertex_count();
    (0..1u64 << n).map(move |m| Transversal::from_mask(m, n))
}

/// Independent E3 oracle: enumerate colourings, build the bunkbed subgraph
/// explicitly (red edges downstairs, blue upstairs, verticals at T) and
/// test plain connectivity with a union-find.
fn e3_oracle(g: &MultiGraph, tr: &Transversal, u: VertexId, target: Endpoint) -> Rational {
    let (n, m) = (g.vertex_count(), g.edge_count());
    let mut hits = 0i64;
    for c in 0..1u64 << m {
        let mut parent: Vec<usize> = (0..2 * n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            if p[x] != x {
                let r = find(p, p[x]);
                p[x] = r;
            }
            p[x]
        }
        let mut join = |a: usize, b: usize| {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra] = rb;
        };
        for (e, &(a, b)) in g.edges().iter().enumerate() {
            let layer = (c >> e & 1) as usize;
            join(a + layer * n, b + layer * n);
        }
        for &x in tr.members() {
            join(x, x + n);
        }
        let tv = target.vertex + target.layer as usize * n;
        if find(&mut parent, u) == find(&mut parent, tv) {
            hits += 1;
        }
    }
    ratio(hits, 1 << m)
}

#[test]
fn e3_on_the_two_edge_path() {
    let g = MultiGraph::path(2);
    let spec = ModelSpec::e3(t(&[1]));
    assert_eq!(exact_prob(&g, &spec, &Query::two_point(0, 2, 0)).unwrap(), ratio(1, 4));
    assert_eq!(exact_prob(&g, &spec, &Query::two_point(0, 2, 1)).unwrap(), ratio(1, 4));
}

#[test]
fn e3_on_one_edge() {
    let g = MultiGraph::path(1);
    let spec = ModelSpec::e3(Transversal::empty());
    assert_eq!(exact_prob(&g, &spec, &Query::two_point(0, 1, 0)).unwrap(), half());
    assert_eq!(exact_prob(&g, &spec, &Query::two_point(0, 1, 1)).unwrap(), int(0));
}

#[test]
fn d1_on_one_edge_matches_plain_percolation() {
    let g = MultiGraph::path(1);
    let q = Query::two_point(0, 1, 0);
    assert_eq!(exact_prob(&g, &ModelSpec::d1(), &q).unwrap(), half());
    assert_eq!(exact_prob(&g, &ModelSpec::e1_base(half()), &q).unwrap(), half());
}

#[test]
fn diamond_values() {
    // u = 2 and v = 3 are the two degree-2 vertices
    let g = diamond();
    let tr = t(&[2, 3]);
    for layer in 0..2 {
        let q = Query::two_point(2, 3, layer);
        assert_eq!(exact_prob(&g, &ModelSpec::d3(tr.clone()), &q).unwrap(), ratio(13, 16));
        assert_eq!(exact_prob(&g, &ModelSpec::e3(tr.clone()), &q).unwrap(), ratio(7, 8));
    }
}

#[test]
fn e3_agrees_with_bunkbed_oracle() {
    for g in small_graphs() {
        for tr in all_t(&g) {
            let spec = ModelSpec::e3(tr.clone());
            for u in 0..g.vertex_count() {
                for v in 0..g.vertex_count() {
                    for layer in 0..2 {
                        let got = exact_prob(&g, &spec, &Query::two_point(u, v, layer)).unwrap();
                        assert_eq!(got, e3_oracle(&g, &tr, u, Endpoint::new(v, layer)), "{g} {tr:?} {u} {v}");
                    }
                }
            }
        }
    }
}

#[test]
fn e1_on_k2_against_explicit_subsets() {
    let g = MultiGraph::path(1);
    let bb = BunkbedGraph::new(&g);
    let mut hits = 0;
    for present in 0..16u64 {
        let reach = subgraph_reach(&bb, present, Endpoint::new(0, 0)).unwrap();
        hits += reach.contains(Endpoint::new(1, 1)) as i64;
    }
    let q = Query::two_point(0, 1, 1);
    assert_eq!(exact_prob(&g, &ModelSpec::e1(half()), &q).unwrap(), ratio(hits, 16));
    let poly = connection_polynomial(&g, &ModelSpec::e1(half()), &q).unwrap();
    assert_eq!(poly.eval(&half()), ratio(hits, 16));
    let p00 = connection_polynomial(&g, &ModelSpec::e1(half()), &Query::two_point(0, 1, 0)).unwrap();
    assert_eq!(p00.eval(&int(0)), int(0));
    assert_eq!(p00.eval(&int(1)), int(1));
}

#[test]
fn e5_polynomial_of_one_edge_is_p() {
    let g = MultiGraph::path(1);
    let poly = connection_polynomial(&g, &ModelSpec::e5(half(), Transversal::empty()), &Query::two_point(0, 1, 0));
    assert_eq!(poly.unwrap(), UniPoly::var());
}

#[test]
fn polynomials_match_pointwise_values() {
    let g = diamond();
    let q = Query::two_point(2, 3, 1);
    let spec = ModelSpec::e5(ratio(1, 3), t(&[0]));
    let poly = connection_polynomial(&g, &spec, &q).unwrap();
    for p in [ratio(0, 1), ratio(1, 3), ratio(3, 5), int(1)] {
        let direct = exact_prob(&g, &ModelSpec::e5(p.clone(), t(&[0])), &q).unwrap();
        assert_eq!(poly.eval(&p), direct);
    }
}

#[test]
fn total_probability_is_one() {
    let g = MultiGraph::new(3, vec![(0, 1), (0, 1), (1, 2), (2, 0)]).unwrap();
    let tr = t(&[1]);
    let part = EdgePartition::new(&g, vec![vec![0, 2], vec![1], vec![3]]).unwrap();
    let specs = vec![
        ModelSpec::e1(ratio(2, 7)),
        ModelSpec::e1(half()).symbolic(),
        ModelSpec::e1_base(ratio(1, 5)),
        ModelSpec::e2(tr.clone(), vec![ratio(1, 4), half(), ratio(3, 4), int(1)]),
        ModelSpec::e2_hybrid(tr.clone(), vec![EdgeState::OneLayer, EdgeState::Free(ratio(1, 3)), EdgeState::OneLayer, EdgeState::Free(int(0))]),
        ModelSpec::e3(tr.clone()),
        ModelSpec::e4(tr.clone(), part),
        ModelSpec::e5(ratio(1, 9), tr.clone()).symbolic(),
        ModelSpec::d1(),
        ModelSpec::d2(tr.clone()),
        ModelSpec::d3(tr),
    ];
    for spec in specs {
        let model = build_model(&g, &spec).unwrap();
        assert_eq!(total_probability(model.as_ref()).unwrap(), UniPoly::one(), "{}", model.describe());
    }
}

#[test]
fn e3_is_e5_at_one_half_and_e4_with_singletons() {
    for g in small_graphs() {
        for tr in all_t(&g) {
            for v in 0..g.vertex_count() {
                for layer in 0..2 {
                    let q = Query::two_point(0, v, layer);
                    let e3 = exact_prob(&g, &ModelSpec::e3(tr.clone()), &q).unwrap();
                    let e5 = exact_prob(&g, &ModelSpec::e5(half(), tr.clone()), &q).unwrap();
                    let e4 = exact_prob(&g, &ModelSpec::e4(tr.clone(), EdgePartition::singletons(&g)), &q).unwrap();
                    assert_eq!(e3, e5);
                    assert_eq!(e3, e4);
                }
            }
        }
    }
}

#[test]
fn e1_is_monotone_in_p() {
    for g in [MultiGraph::path(2), MultiGraph::cycle(3), diamond()] {
        for v in 0..g.vertex_count() {
            for layer in 0..2 {
                let poly = connection_polynomial(&g, &ModelSpec::e1(half()), &Query::two_point(0, v, layer)).unwrap();
                let d = poly.derivative();
                for k in 0..=20 {
                    assert!(d.eval(&ratio(k, 20)) >= int(0), "{g} v={v} layer={layer}");
                }
            }
        }
    }
}

#[test]
fn e2_is_monotone_in_each_edge() {
    let g = diamond();
    let tr = t(&[1]);
    let base = vec![ratio(1, 4), half(), ratio(3, 4), half(), ratio(1, 4)];
    for e in 0..g.edge_count() {
        let mut prev = None;
        for k in 0..=4 {
            let mut pv = base.clone();
            pv[e] = ratio(k, 4);
            let p = exact_prob(&g, &ModelSpec::e2(tr.clone(), pv), &Query::two_point(2, 3, 1)).unwrap();
            if let Some(prev) = prev {
                assert!(p >= prev);
            }
            prev = Some(p);
        }
    }
}

#[test]
fn plain_percolation_equals_random_orientation() {
    for g in small_graphs() {
        for u in 0..g.vertex_count() {
            for v in 0..g.vertex_count() {
                let q = Query::two_point(u, v, 0);
                assert_eq!(
                    exact_prob(&g, &ModelSpec::e1_base(half()), &q).unwrap(),
                    exact_prob(&g, &ModelSpec::d1(), &q).unwrap()
                );
            }
        }
    }
}

#[test]
fn separating_transversal_gives_zero_margin() {
    for g in small_graphs() {
        let n = g.vertex_count();
        for tr in all_t(&g) {
            for u in 0..n {
                for v in 0..n {
                    let separated = tr.contains(u)
                        || tr.contains(v)
                        || (u != v && g.separates(tr.members(), u, v));
                    if separated {
                        assert_eq!(bbc_margin(&g, &ModelSpec::e3(tr.clone()), u, v).unwrap(), int(0));
                        let pv = vec![ratio(1, 3); g.edge_count()];
                        assert_eq!(bbc_margin(&g, &ModelSpec::e2(tr.clone(), pv), u, v).unwrap(), int(0));
                    }
                }
            }
        }
    }
}

#[test]
fn orientation_margins_are_nonnegative() {
    for g in small_graphs() {
        for tr in all_t(&g) {
            for u in 0..g.vertex_count() {
                for v in 0..g.vertex_count() {
                    assert!(bbc_margin(&g, &ModelSpec::d2(tr.clone()), u, v).unwrap() >= int(0));
                }
            }
        }
    }
}

#[test]
fn forced_different_colours_reverse_the_inequality() {
    let g = MultiGraph::path(2);
    let spec = ModelSpec::e3(t(&[1]));
    let diff = [ColorConstraint::different(0, 1)];
    assert_eq!(exact_prob_conditional(&g, &spec, &Query::two_point(0, 2, 0), &diff).unwrap(), int(0));
    assert_eq!(exact_prob_conditional(&g, &spec, &Query::two_point(0, 2, 1), &diff).unwrap(), half());
    let q = Query::two_point(0, 2, 0);
    let plain = exact_prob(&g, &spec, &q).unwrap();
    assert_eq!(exact_prob_conditional(&g, &spec, &q, &[]).unwrap(), plain);
    assert_eq!(exact_prob_conditional(&g, &spec, &q, &[ColorConstraint::same(1, 1)]).unwrap(), plain);
    let impossible = [ColorConstraint::same(0, 1), ColorConstraint::different(0, 1)];
    assert!(matches!(
        exact_prob_conditional(&g, &spec, &q, &impossible),
        Err(bunkbed::Error::ZeroProbability)
    ));
    assert!(exact_prob_conditional(&g, &ModelSpec::d2(t(&[1])), &q, &[]).is_err());
}

#[test]
fn joint_probabilities() {
    let g = MultiGraph::path(2);
    let spec = ModelSpec::e3(t(&[1]));
    let start = Endpoint::new(0, 0);
    assert_eq!(
        joint_prob(&g, &spec, start, &[Endpoint::new(1, 0), Endpoint::new(1, 1)]).unwrap(),
        half()
    );
    assert_eq!(joint_prob(&g, &spec, start, &[start]).unwrap(), int(1));
    assert_eq!(
        joint_prob(&g, &spec, start, &[Endpoint::new(2, 0)]).unwrap(),
        exact_prob(&g, &spec, &Query::two_point(0, 2, 0)).unwrap()
    );
}

#[test]
fn colour_swap_symmetries() {
    for g in small_graphs() {
        let n = g.vertex_count();
        for tr in all_t(&g) {
            let spec = ModelSpec::e3(tr.clone());
            for x in 0..n {
                for v in 0..n {
                    let a = exact_prob(&g, &spec, &Query { sources: vec![Endpoint::new(x, 0)], targets: vec![Endpoint::new(v, 1)] }).unwrap();
                    let b = exact_prob(&g, &spec, &Query { sources: vec![Endpoint::new(x, 1)], targets: vec![Endpoint::new(v, 0)] }).unwrap();
                    assert_eq!(a, b);
                    let both = vec![Endpoint::new(x, 0), Endpoint::new(x, 1)];
                    let c = exact_prob(&g, &spec, &Query::from_all(both.clone(), Endpoint::new(v, 0))).unwrap();
                    let d = exact_prob(&g, &spec, &Query::from_all(both, Endpoint::new(v, 1))).unwrap();
                    assert_eq!(c, d);
                }
            }
        }
    }
}

/// Glues `g1` (vertices 0..n1, cut vertex `x`) and `g2` (with `x` as its
/// vertex 0) at `x`.
fn glue(g1: &MultiGraph, x: VertexId, g2: &MultiGraph) -> (MultiGraph, Vec<VertexId>) {
    let n1 = g1.vertex_count();
    let map: Vec<VertexId> = (0..g2.vertex_count()).map(|w| if w == 0 { x } else { n1 + w - 1 }).collect();
    let mut edges = g1.edges().to_vec();
    edges.extend(g2.edges().iter().map(|&(a, b)| (map[a], map[b])));
    (MultiGraph::new(n1 + g2.vertex_count() - 1, edges).unwrap(), map)
}

#[test]
fn cut_vertex_factorisation() {
    let pieces = [MultiGraph::path(1), MultiGraph::path(2), MultiGraph::cycle(3), diamond()];
    for g1 in &pieces {
        for g2 in &pieces {
            let x = g1.vertex_count() - 1;
            let (g, map) = glue(g1, x, g2);
            let (n1, n2) = (g1.vertex_count(), g2.vertex_count());
            for t1 in 0..1u64 << n1 {
                for t2 in 0..1u64 << (n2 - 1) {
                    let t1s = Transversal::from_mask(t1, n1);
                    if t1s.contains(x) {
                        continue;
                    }
                    let t2s = Transversal::new((1..n2).filter(|w| t2 >> (w - 1) & 1 == 1));
                    let tg = Transversal::new(t1s.members().iter().copied().chain(t2s.members().iter().map(|&w| map[w])));
                    let (u, v) = (0, map[n2 - 1]);
                    let margin = bbc_margin(&g, &ModelSpec::e3(tg), u, v).unwrap();
                    let s1 = ModelSpec::e3(t1s.clone());
                    let s2 = ModelSpec::e3(t2s.clone());
                    let f1 = exact_prob(g1, &s1, &Query::two_point(u, x, 0)).unwrap()
                        - exact_prob(g1, &s1, &Query::two_point(u, x, 1)).unwrap();
                    let f2 = exact_prob(g2, &s2, &Query::two_point(0, n2 - 1, 0)).unwrap()
                        - exact_prob(g2, &s2, &Query::two_point(0, n2 - 1, 1)).unwrap();
                    assert_eq!(margin, f1 * f2, "{g}");
                }
            }
        }
    }
}

#[test]
fn path_averages() {
    let g = MultiGraph::path(1);
    let a0 = avg_prob_over_t_poly(&g, &Query::two_point(0, 1, 0)).unwrap();
    let a1 = avg_prob_over_t_poly(&g, &Query::two_point(0, 1, 1)).unwrap();
    assert_eq!(a0, UniPoly::affine(ratio(1, 4), ratio(3, 4)));
    assert_eq!(a1, UniPoly::constant(half()));
    // p = 1: everything red
    for g in [MultiGraph::path(3), diamond()] {
        let a = avg_prob_over_t_poly(&g, &Query::two_point(0, 2, 0)).unwrap();
        assert_eq!(a.eval(&int(1)), int(1));
    }
}

#[test]
fn averages_mirror_under_colour_swap() {
    // swapping colours maps layer-1 targets at p to layer-0 targets from u_1 at 1 - p
    let g = diamond();
    let a = avg_prob_over_t_poly(&g, &Query::two_point(2, 3, 1)).unwrap();
    let b = avg_prob_over_t_poly(&g, &Query { sources: vec![Endpoint::new(2, 1)], targets: vec![Endpoint::new(3, 0)] }).unwrap();
    for k in 0..=6 {
        let p = ratio(k, 6);
        assert_eq!(a.eval(&p), b.eval(&(int(1) - &p)));
    }
}

#[test]
fn critical_points_of_short_paths() {
    let tol = ratio(1, 1_000_000_000);
    let r1 = critical_probability(&MultiGraph::path(1), 0, 1, &tol).unwrap();
    assert!(r1.is_single_crossing());
    assert!(r1.roots[0].interval.contains(&ratio(1, 3)));
    assert!(r1.roots[0].interval.width() <= tol);
    assert_eq!(r1.difference, UniPoly::affine(ratio(-1, 4), ratio(3, 4)));

    let r2 = critical_probability(&MultiGraph::path(2), 0, 2, &tol).unwrap();
    assert!(r2.is_single_crossing());
    let expected = (11f64 / 12.0).sqrt() - 0.5;
    assert!((r2.roots[0].interval.approx() - expected).abs() < 1e-9);
    // 8 D(p) = 3p^2 + 3p - 2
    assert_eq!(r2.difference.scale(&int(8)), UniPoly::new(vec![int(-2), int(3), int(3)]));
    assert_eq!(r2.roots[0].left, Some(Sign::Negative));

    assert!(critical_probability(&MultiGraph::path(1), 0, 1, &int(0)).is_err());
}

#[test]
fn sampling_agrees_and_is_reproducible() {
    let g = MultiGraph::path(2);
    let spec = ModelSpec::e3(t(&[1]));
    let q = Query::two_point(0, 2, 0);
    let est = mc_estimate(&g, &spec, &q, 100_000, 7).unwrap();
    assert!((est.estimate - 0.25).abs() < 5.0 * est.stderr);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let single = pool.install(|| mc_estimate(&g, &spec, &q, 100_000, 7).unwrap());
    assert_eq!(est, single);

    let sure = mc_estimate(&g, &ModelSpec::e1(int(1)), &q, 1000, 1).unwrap();
    assert_eq!((sure.estimate, sure.stderr), (1.0, 0.0));
    let never = mc_estimate(&g, &ModelSpec::e1(int(0)), &q, 1000, 1).unwrap();
    assert_eq!(never.estimate, 0.0);
}

#[test]
fn registry_and_spec_validation() {
    let names: Vec<&str> = models::registry().iter().map(|e| e.name).collect();
    assert_eq!(names, ["e1", "e2", "e3", "e4", "e5", "d1", "d2", "d3"]);
    for kind in ModelKind::ALL {
        assert_eq!(kind.name().parse::<ModelKind>().unwrap(), kind);
    }
    assert!(matches!(models::lookup("e9"), Err(bunkbed::Error::UnknownName { .. })));
    let g = MultiGraph::path(2);
    // stray or missing parameters
    assert!(build_model(&g, &ModelSpec::d1().with_transversal(t(&[1]))).is_err());
    assert!(build_model(&g, &ModelSpec::e1(int(2))).is_err());
    assert!(build_model(&g, &ModelSpec::e2(t(&[1]), vec![half()])).is_err());
    let mut e3p = ModelSpec::e3(t(&[1]));
    e3p.p = Some(models::Param::Value(half()));
    assert!(build_model(&g, &e3p).is_err());
    assert!(build_model(&g, &ModelSpec::e3(t(&[7]))).is_err());
}

#[test]
fn enumeration_guard() {
    // K_5 bunkbed: 2 * 10 + 5 = 25 outcome bits
    let g = MultiGraph::complete(5);
    let err = exact_prob(&g, &ModelSpec::e1(half()), &Query::two_point(0, 1, 0)).unwrap_err();
    assert!(matches!(err, bunkbed::Error::Guard { .. }));
    let k = MultiGraph::complete(6);
    assert!(build_model(&MultiGraph::new(6, k.edges()[..13].to_vec()).unwrap(), &ModelSpec::d3(Transversal::empty())).is_err());
}
