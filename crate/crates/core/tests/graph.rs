mod common;

use std::collections::BTreeMap;

use proptest::prelude::*;
use ribbon_core::{Attachment, GraphError, RibbonGraph, TreePreference, VertexId};

use common::{arb_graph, corpus_names, count_components, load};

#[test]
fn triangle_with_alternating_legs() {
    let g = load("fig2");
    let t = g.topology().unwrap();
    assert_eq!((t.v, t.e, t.f, t.chi, t.g, t.b), (3, 3, 2, 2, 0, 2));
    assert!(t.planar && !t.regular);
    let faces = g.faces();
    assert_eq!(faces.faces.len(), 2);
    assert!(faces.faces.iter().all(|f| f.broken));
    let tree = g
        .spanning_tree(VertexId(0), &TreePreference::Default)
        .unwrap();
    assert_eq!((tree.tree_edges.len(), tree.loop_edges.len()), (2, 1));
}

#[test]
fn empty_description_is_malformed() {
    let err = RibbonGraph::from_json(r#"{"vertices": [], "edges": [], "externals": []}"#);
    assert!(matches!(err, Err(GraphError::MalformedGraph(_))));
}

#[test]
fn smallest_tadpole() {
    let g = RibbonGraph::from_json(
        r#"{"vertices": [{"id": "v", "ports": ["a", "b", "c", "d"]}],
            "edges": [{"id": "l", "ports": ["a", "b"], "kind": "simple"}],
            "externals": [{"id": "1", "port": "c"}, {"id": "2", "port": "d"}]}"#,
    )
    .unwrap();
    assert_eq!(
        (g.num_vertices(), g.num_edges(), g.num_externals()),
        (1, 1, 2)
    );
    let tree = g
        .spanning_tree(VertexId(0), &TreePreference::Default)
        .unwrap();
    assert!(tree.tree_edges.is_empty());
    assert_eq!(tree.loop_edges.len(), 1);
    assert!(!g.is_bridge(g.edge_by_name("l").unwrap()));
}

#[test]
fn tadpoles_differ_in_broken_faces() {
    let planar = load("tadpole_planar").topology().unwrap();
    assert_eq!((planar.g, planar.b), (0, 1));
    let crossed = load("tadpole_nonplanar").topology().unwrap();
    assert_eq!((crossed.g, crossed.b), (0, 2));
}

#[test]
fn bridge_between_blobs_is_tree_like() {
    let g = load("fig4");
    assert!(g.is_bridge_by_name("g").unwrap());
    assert!(!g.is_bridge_by_name("lu").unwrap());
    assert!(g.topology().unwrap().tree_like);
    assert!(matches!(
        g.is_bridge_by_name("nope"),
        Err(GraphError::UnknownEdge(_))
    ));
}

#[test]
fn generalised_line_in_a_cycle_is_not_tree_like() {
    let g = load("fig1");
    assert!(!g.is_bridge_by_name("g").unwrap());
    assert!(!g.topology().unwrap().tree_like);
}

#[test]
fn other_corpus_invariants() {
    let t = load("sunset_nonplanar").topology().unwrap();
    assert_eq!((t.g, t.b, t.chi), (1, 1, 0));
    let t = load("bubble4").topology().unwrap();
    assert!(t.planar && t.regular);
    let chain = load("kappa_chain");
    assert!(chain.is_insertion_chain());
    assert!(chain.topology().unwrap().tree_like);
}

#[test]
fn corpus_round_trips_bit_exactly() {
    for name in corpus_names() {
        let path = common::corpus_dir().join(format!("{name}.graph"));
        let text = std::fs::read_to_string(path).unwrap();
        let g = RibbonGraph::from_json(&text).unwrap();
        assert_eq!(g.to_file().to_json(), text, "{name}");
    }
}

#[test]
fn closed_insertion_ring_is_a_sphere() {
    let ring = RibbonGraph::from_json(
        r#"{"vertices": [{"id": "c", "kind": "insertion", "ports": ["a", "b"]}],
            "edges": [{"id": "s", "ports": ["a", "b"], "kind": "simple"}],
            "externals": []}"#,
    )
    .unwrap();
    let t = ring.topology().unwrap();
    assert_eq!((t.f, t.chi, t.g, t.b), (2, 2, 0, 0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn handshake(g in arb_graph(5)) {
        let valence: usize = g.vertices().iter().map(|v| v.ports.len()).sum();
        prop_assert_eq!(valence, 2 * g.num_edges() + g.num_externals());
    }

    #[test]
    fn euler_characteristic_and_genus(g in arb_graph(5)) {
        let t = g.topology().unwrap();
        prop_assert_eq!(t.chi, t.v as i64 - t.e as i64 + t.f as i64);
        prop_assert_eq!(t.chi, 2 * t.k as i64 - 2 * i64::from(t.g));
        for c in &t.components {
            prop_assert_eq!(c.chi, 2 - 2 * i64::from(c.g));
        }
        prop_assert_eq!(t.planar, t.g == 0);
        prop_assert_eq!(t.regular, t.b == 1);
    }

    #[test]
    fn faces_partition_the_ports(g in arb_graph(5)) {
        let mut seen: BTreeMap<usize, usize> = BTreeMap::new();
        let faces = g.faces();
        for f in &faces.faces {
            for p in &f.ports {
                *seen.entry(p.0).or_default() += 1;
            }
            let external = f
                .ports
                .iter()
                .any(|&p| matches!(g.port(p).attachment, Attachment::External(_)));
            prop_assert_eq!(f.broken, external);
        }
        prop_assert_eq!(seen.len(), g.ports().len());
        prop_assert!(seen.values().all(|&c| c == 1));
        prop_assert_eq!(faces.broken, faces.faces.iter().filter(|f| f.broken).count());
    }

    #[test]
    fn bridges_match_component_counts(g in arb_graph(3)) {
        let base = count_components(&g, |_| true);
        for e in g.edge_ids() {
            let without = count_components(&g, |x| x != e);
            prop_assert_eq!(g.is_bridge(e), without > base);
        }
    }

    #[test]
    fn spanning_trees_have_the_loop_count(g in arb_graph(5)) {
        let k = count_components(&g, |_| true);
        let t = g.spanning_tree(VertexId(0), &TreePreference::Default).unwrap();
        prop_assert_eq!(t.loop_edges.len(), g.num_edges() + k - g.num_vertices());
        prop_assert_eq!(t.tree_edges.len() + t.loop_edges.len(), g.num_edges());
        prop_assert_eq!(count_components(&g, |e| t.is_tree_edge(e)), k);
    }

    #[test]
    fn serialisation_round_trips(g in arb_graph(4)) {
        let text = g.to_file().to_json();
        let again = RibbonGraph::from_json(&text).unwrap();
        prop_assert_eq!(again.to_file().to_json(), text);
        prop_assert_eq!(again.topology().unwrap(), g.topology().unwrap());
    }
}
