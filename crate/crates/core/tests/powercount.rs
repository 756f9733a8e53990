mod common;

use ribbon_core::powercount::classify_insertion_chain;
use ribbon_core::{
    classify_graph, classify_node, omega_kappa0, BoundCase, Counterterm, NodeData, PowerCountError,
    ScaleAttribution,
};

use common::{corpus_dir, corpus_names, load};

fn node(
    n: usize,
    n_kappa: usize,
    g: u32,
    b: usize,
    tree_like: bool,
    loop_kappa: usize,
    e_kappa_empty: bool,
) -> NodeData {
    NodeData {
        n,
        n_kappa,
        g,
        b,
        tree_like,
        loop_kappa,
        e_kappa_empty,
    }
}

/// Every consistent combination of the grid, plus how many were rejected.
fn grid() -> (Vec<NodeData>, usize) {
    let mut ok = Vec::new();
    let mut rejected = 0;
    for n in [2, 4, 6] {
        for n_kappa in 0..=n {
            for g in [0, 1] {
                for b in [1, 2] {
                    for tree_like in [true, false] {
                        for loop_kappa in [0, 1] {
                            for e_kappa_empty in [true, false] {
                                let d =
                                    node(n, n_kappa, g, b, tree_like, loop_kappa, e_kappa_empty);
                                match classify_node(&d) {
                                    Ok(_) => ok.push(d),
                                    Err(PowerCountError::InconsistentNode(_)) => rejected += 1,
                                    Err(e) => panic!("{e}"),
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    (ok, rejected)
}

#[test]
fn spot_cases() {
    let cases = [
        (
            node(2, 0, 0, 1, true, 0, true),
            -2,
            Some(Counterterm::MassWaveOmega),
        ),
        (
            node(2, 2, 0, 1, true, 0, true),
            0,
            Some(Counterterm::KappaSquared),
        ),
        (
            node(2, 1, 0, 1, true, 0, true),
            0,
            Some(Counterterm::KappaSquared),
        ),
        (
            node(2, 0, 0, 1, true, 0, false),
            0,
            Some(Counterterm::KappaSquared),
        ),
        (
            node(2, 0, 0, 2, true, 0, true),
            0,
            Some(Counterterm::KappaSquared),
        ),
        (
            node(4, 0, 0, 1, true, 0, true),
            0,
            Some(Counterterm::Lambda),
        ),
        (node(4, 1, 0, 1, true, 0, true), 2, None),
        (node(4, 4, 0, 1, true, 0, true), 6, None),
        (node(2, 0, 1, 1, true, 0, true), 2, None),
        (node(2, 0, 0, 1, false, 1, false), 6, None),
        (node(6, 0, 0, 1, true, 0, true), 2, None),
        (node(4, 0, 0, 2, true, 0, false), 2, None),
    ];
    for (d, bound, ct) in cases {
        let c = classify_node(&d).unwrap();
        assert_eq!(c.bound, bound, "{d:?}");
        assert_eq!(c.counterterm, ct, "{d:?}");
        assert_eq!(c.divergent, bound <= 0);
    }
}

#[test]
fn grid_partitions_into_cases() {
    let (ok, rejected) = grid();
    assert_eq!(ok.len() + rejected, 15 * 2 * 2 * 2 * 2 * 2);
    for d in &ok {
        let case = classify_node(d).unwrap().case;
        let fired = [
            !d.tree_like,
            d.tree_like && d.g >= 1,
            d.tree_like && d.g == 0 && d.b >= 2,
            d.tree_like && d.planar_regular() && !d.e_kappa_empty,
            d.tree_like && d.planar_regular() && d.e_kappa_empty && d.n_kappa < d.n,
            d.tree_like && d.planar_regular() && d.e_kappa_empty && d.n_kappa == d.n,
        ];
        assert_eq!(fired.iter().filter(|&&f| f).count(), 1, "{d:?}");
        let expected = [
            BoundCase::NotTreeLike,
            BoundCase::NonPlanar,
            BoundCase::BrokenFaces,
            BoundCase::PlanarRegularWithLines,
            BoundCase::PlanarRegular,
            BoundCase::PlanarRegularAllKappa,
        ][fired.iter().position(|&f| f).unwrap()];
        assert_eq!(case, expected);
    }
}

#[test]
fn divergent_nodes_are_tree_like_and_four_point_ones_are_bare() {
    for d in grid().0 {
        let c = classify_node(&d).unwrap();
        if c.divergent {
            assert!(d.tree_like);
            assert!(c.counterterm.is_some());
            if d.n == 4 {
                assert!(d.planar_regular() && !d.has_insertions());
            }
        }
    }
}

fn bound(d: &NodeData) -> i64 {
    classify_node(d).unwrap().bound
}

#[test]
fn bound_grows_with_legs_and_loop_lines() {
    let (ok, _) = grid();
    let consistent = |d: &NodeData| ok.contains(d);
    for d in &ok {
        let more_legs = NodeData { n: d.n + 2, ..*d };
        if consistent(&more_legs) {
            assert!(bound(&more_legs) >= bound(d), "{d:?}");
        }
        let more_kappa = NodeData {
            n_kappa: d.n_kappa + 1,
            ..*d
        };
        if consistent(&more_kappa) {
            assert!(bound(&more_kappa) >= bound(d), "{d:?}");
        }
        let more_loops = NodeData {
            loop_kappa: d.loop_kappa + 1,
            ..*d
        };
        if consistent(&more_loops) {
            assert!(bound(&more_loops) >= bound(d), "{d:?}");
        }
        // planar-regular nodes with two or more κ legs already beat the
        // non-planar and broken-face bounds, so genus and b only help below
        if d.n_kappa <= 1 {
            let genus = NodeData { g: d.g + 1, ..*d };
            if consistent(&genus) {
                assert!(bound(&genus) >= bound(d), "{d:?}");
            }
            let broken = NodeData { b: d.b + 1, ..*d };
            if consistent(&broken) {
                assert!(bound(&broken) >= bound(d), "{d:?}");
            }
        }
    }
}

#[test]
fn genus_and_broken_faces_can_lower_the_bound() {
    let planar = node(4, 2, 0, 1, true, 0, true);
    assert_eq!(bound(&planar), 4);
    assert_eq!(bound(&NodeData { b: 2, ..planar }), 2);
}

#[test]
fn insertion_free_nodes_agree_with_the_plain_bound() {
    for n in [2, 4, 6] {
        for g in [0, 1] {
            for b in [1, 2, 3] {
                if b > n {
                    continue;
                }
                let d = node(n, 0, g, b, true, 0, true);
                let with = bound(&d);
                let plain = omega_kappa0(n, g, b).unwrap();
                if g == 0 && b == 1 {
                    assert_eq!(with, plain);
                }
                assert!(with <= plain);
                assert_eq!(with <= 0, plain <= 0, "{d:?}");
            }
        }
    }
}

fn flat(name: &str) -> ribbon_core::DivergenceReport {
    let g = load(name);
    classify_graph(&g, &ScaleAttribution::flat(&g, 0)).unwrap()
}

#[test]
fn tadpoles() {
    let r = flat("tadpole_planar");
    assert_eq!(r.nodes.len(), 1);
    let n = &r.nodes[0];
    assert_eq!((n.data.n, n.data.g, n.data.b), (2, 0, 1));
    assert_eq!((n.class.bound, n.class.divergent), (-2, true));
    assert_eq!(n.class.counterterm, Some(Counterterm::MassWaveOmega));

    let r = flat("tadpole_nonplanar");
    let n = &r.nodes[0];
    assert_eq!((n.data.b, n.class.bound), (2, 0));
    assert!(n.class.logarithmic);
    assert_eq!(n.class.counterterm, Some(Counterterm::KappaSquared));
}

#[test]
fn graph_with_insertions_in_a_cycle() {
    let r = flat("fig1");
    let n = &r.nodes[0];
    assert_eq!((n.data.n, n.data.n_kappa, n.data.loop_kappa), (4, 1, 1));
    assert!(!n.data.tree_like);
    assert_eq!((n.class.case, n.class.bound), (BoundCase::NotTreeLike, 8));
    assert!(r.counterterms.is_empty());
}

#[test]
fn bridge_graph_per_node() {
    let g = load("fig4");
    let text = std::fs::read_to_string(corpus_dir().join("fig4.scales")).unwrap();
    let mu = ScaleAttribution::from_json(&g, &text).unwrap();
    let r = classify_graph(&g, &mu).unwrap();
    let summary: Vec<_> = r
        .nodes
        .iter()
        .map(|n| (n.label.as_str(), n.class.case, n.class.bound))
        .collect();
    assert_eq!(
        summary,
        [
            ("(0,1)", BoundCase::PlanarRegularWithLines, 0),
            ("(1,1)", BoundCase::PlanarRegularWithLines, 0),
            ("(2,1)", BoundCase::PlanarRegular, 0),
            ("(2,2)", BoundCase::PlanarRegular, 0),
        ]
    );
    assert!(r
        .nodes
        .iter()
        .all(|n| n.class.counterterm == Some(Counterterm::KappaSquared)));
}

#[test]
fn other_corpus_graphs() {
    let n = &flat("bubble4").nodes[0];
    assert_eq!(
        (n.class.bound, n.class.counterterm),
        (0, Some(Counterterm::Lambda))
    );
    let n = &flat("sunset_nonplanar").nodes[0];
    assert_eq!((n.class.case, n.class.bound), (BoundCase::NonPlanar, 2));
    let n = &flat("fig2").nodes[0];
    assert_eq!(
        (n.class.case, n.class.bound, n.class.divergent),
        (BoundCase::BrokenFaces, 4, false)
    );
    let chain = flat("kappa_chain");
    assert!(chain
        .nodes
        .iter()
        .all(|n| n.class == classify_insertion_chain()));
    assert_eq!(
        chain.counterterms.iter().copied().collect::<Vec<_>>(),
        [Counterterm::KappaSquared]
    );
}

#[test]
fn divergence_implies_tree_like_over_enumerated_attributions() {
    let mut divergent = 0;
    for name in corpus_names() {
        let g = load(&name);
        for mu in ScaleAttribution::enumerate(&g, 3) {
            for n in classify_graph(&g, &mu).unwrap().nodes {
                if n.class.divergent {
                    divergent += 1;
                    assert!(n.data.tree_like, "{name} {}", n.label);
                    let ct = n.class.counterterm.unwrap();
                    if n.data.n == 2 && (n.data.b >= 2 || n.data.has_insertions()) {
                        assert_eq!(ct, Counterterm::KappaSquared, "{name} {}", n.label);
                    }
                }
            }
        }
    }
    assert!(divergent > 0);
}
