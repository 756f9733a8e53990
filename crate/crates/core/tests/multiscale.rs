mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use ribbon_core::{
    gn_tree, is_admissible, quasi_local, EdgeId, MultiscaleError, RibbonGraph, ScaleAttribution,
    TreePreference, VertexId,
};

use common::{arb_scaled, corpus_dir, corpus_names, count_components, load};

fn scales(g: &RibbonGraph, name: &str) -> ScaleAttribution {
    let text = std::fs::read_to_string(corpus_dir().join(format!("{name}.scales"))).unwrap();
    ScaleAttribution::from_json(g, &text).unwrap()
}

fn names(g: &RibbonGraph, vs: &[VertexId]) -> Vec<String> {
    vs.iter().map(|&v| g.vertex(v).id.clone()).collect()
}

#[test]
fn admissibility_pair() {
    let a = load("fig3a");
    let mu = scales(&a, "fig3a");
    let l = a.edge_by_name("l").unwrap();
    assert!(is_admissible(&a, &mu, l).unwrap());

    let b = load("fig3b");
    let mu = scales(&b, "fig3b");
    assert!(!is_admissible(&b, &mu, b.edge_by_name("l").unwrap()).unwrap());
    assert!(matches!(
        is_admissible(&b, &mu, b.edge_by_name("s").unwrap()),
        Err(MultiscaleError::NotGeneralised(_))
    ));
}

#[test]
fn high_scale_blobs_are_separate() {
    let g = load("fig3a");
    let mu = scales(&g, "fig3a");
    let top = quasi_local(&g, &mu, 3);
    assert_eq!(top.len(), 2);
    assert_eq!(names(&g, &top[0].vertices), ["A1", "A2"]);
    assert_eq!(names(&g, &top[1].vertices), ["B1", "B2"]);
    assert!(quasi_local(&g, &mu, 4).is_empty());
    assert_eq!(quasi_local(&g, &mu, 0).len(), 1);
}

#[test]
fn generalised_line_node_holds_both_blobs() {
    let g = load("fig3a");
    let mu = scales(&g, "fig3a");
    let tree = gn_tree(&g, &mu);
    let l = g.edge_by_name("l").unwrap();
    let holder = tree
        .nodes
        .iter()
        .position(|n| n.level == 2 && n.edges.contains(&l))
        .unwrap();
    let children: Vec<_> = tree.nodes[holder]
        .children
        .iter()
        .map(|&c| names(&g, &tree.nodes[c].vertices))
        .collect();
    assert_eq!(children, [vec!["A1", "A2"], vec!["B1", "B2"]]);
}

#[test]
fn bridges_of_the_graph_are_always_admissible() {
    let g = load("fig4");
    let l = g.edge_by_name("g").unwrap();
    for mu in ScaleAttribution::enumerate(&g, 3) {
        assert!(is_admissible(&g, &mu, l).unwrap());
    }
}

#[test]
fn flat_attribution_repeats_the_components() {
    let g = load("fig2");
    let mu = ScaleAttribution::flat(&g, 2);
    let tree = gn_tree(&g, &mu);
    assert_eq!(tree.nodes.len(), 3);
    for node in &tree.nodes {
        assert_eq!(node.edges.len(), 3);
        assert_eq!(node.n, 6);
    }
}

#[test]
fn lower_scale_lines_count_as_legs() {
    let g = load("fig4");
    let mu = scales(&g, "fig4");
    let tree = gn_tree(&g, &mu);
    let blobs: Vec<_> = tree.at_level(2).collect();
    assert_eq!(blobs.len(), 2);
    for b in blobs {
        // one true leg plus one end of the generalised bridge
        assert_eq!((b.n, b.n_kappa, b.e_kappa), (2, 1, 0));
    }
    let root = &tree.nodes[0];
    assert_eq!((root.n, root.n_kappa, root.e_kappa), (2, 0, 1));
}

/// Every node is a connected subgraph; nodes of a level are disjoint, and
/// each node sits inside its parent.
fn check_forest(g: &RibbonGraph, mu: &ScaleAttribution) {
    let tree = gn_tree(g, mu);
    let eff = mu.effective_all();
    for i in 0..=mu.max_effective() {
        let level: Vec<_> = tree.at_level(i).collect();
        let ql = quasi_local(g, mu, i);
        assert_eq!(level.len(), ql.len());
        for (n, c) in level.iter().zip(&ql) {
            assert_eq!(n.vertices, c.vertices);
            assert_eq!(n.edges, c.edges);
            assert!(n.edges.iter().all(|e| eff[e.0] >= i));
        }
    }
    for (a, na) in tree.nodes.iter().enumerate() {
        let va: BTreeSet<_> = na.vertices.iter().collect();
        let ea: BTreeSet<_> = na.edges.iter().collect();
        if let Some(p) = na.parent {
            let np = &tree.nodes[p];
            assert_eq!(np.level + 1, na.level);
            assert!(na.vertices.iter().all(|v| np.vertices.contains(v)));
            assert!(na.edges.iter().all(|e| np.edges.contains(e)));
        } else {
            assert_eq!(na.level, 0);
        }
        for nb in &tree.nodes[a + 1..] {
            let vb: BTreeSet<_> = nb.vertices.iter().collect();
            let eb: BTreeSet<_> = nb.edges.iter().collect();
            let nested = (va.is_subset(&vb) && ea.is_subset(&eb))
                || (vb.is_subset(&va) && eb.is_subset(&ea));
            assert!(
                nested || va.is_disjoint(&vb),
                "{} vs {}",
                na.label(),
                nb.label()
            );
        }
    }
}

#[test]
fn corpus_forests_under_enumerated_attributions() {
    for name in corpus_names() {
        let g = load(&name);
        if g.num_edges() > 4 {
            check_forest(&g, &ScaleAttribution::flat(&g, 1));
            continue;
        }
        for mu in ScaleAttribution::enumerate(&g, 2) {
            check_forest(&g, &mu);
        }
    }
}

#[test]
fn tree_like_graphs_have_only_admissible_lines() {
    let mut checked = 0;
    for name in corpus_names() {
        let g = load(&name);
        if g.num_edges() > 5 || !g.topology().unwrap().tree_like {
            continue;
        }
        let lines: Vec<EdgeId> = g
            .edge_ids()
            .filter(|&e| g.edge(e).kind.is_generalised())
            .collect();
        for mu in ScaleAttribution::enumerate(&g, 3) {
            for &l in &lines {
                assert!(is_admissible(&g, &mu, l).unwrap(), "{name}");
                checked += 1;
            }
        }
    }
    assert!(checked > 0);
}

#[test]
fn scale_preferring_tree_spans_every_node() {
    for name in ["fig3a", "fig3b", "fig4", "fig1"] {
        let g = load(name);
        let mu = scales(&g, name);
        check_tree_spans_nodes(&g, &mu);
    }
}

fn check_tree_spans_nodes(g: &RibbonGraph, mu: &ScaleAttribution) {
    let pref = TreePreference::ScaleDescending(mu.effective_all());
    let t = g.spanning_tree(VertexId(0), &pref).unwrap();
    for node in gn_tree(g, mu).nodes {
        let inside: BTreeSet<_> = node.vertices.iter().map(|v| v.0).collect();
        let tree_inside = |e: EdgeId| t.is_tree_edge(e) && node.edges.contains(&e);
        let pieces = count_components(g, tree_inside);
        // vertices outside the node stay isolated
        assert_eq!(
            pieces,
            g.num_vertices() - inside.len() + 1,
            "{}",
            node.label()
        );
    }
}

#[test]
fn segment_lengths_are_checked() {
    let g = load("fig1");
    let err = ScaleAttribution::from_json(&g, r#"{"s": 1, "g": [1, 2]}"#);
    assert!(matches!(err, Err(MultiscaleError::LengthMismatch { .. })));
    let err = ScaleAttribution::from_json(&g, r#"{"s": 1}"#);
    assert!(matches!(err, Err(MultiscaleError::MissingScale(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn random_forests((g, mu) in arb_scaled(4, 3)) {
        check_forest(&g, &mu);
    }

    #[test]
    fn admissibility_matches_deletion((g, mu) in arb_scaled(3, 3)) {
        let eff = mu.effective_all();
        for l in g.edge_ids().filter(|&e| g.edge(e).kind.is_generalised()) {
            let i = eff[l.0];
            let with = count_components(&g, |e| eff[e.0] >= i);
            let without = count_components(&g, |e| e != l && eff[e.0] >= i);
            prop_assert_eq!(is_admissible(&g, &mu, l).unwrap(), without > with);
        }
    }

    #[test]
    fn tree_like_implies_admissible((g, mu) in arb_scaled(3, 3)) {
        if g.topology().unwrap().tree_like {
            for l in g.edge_ids().filter(|&e| g.edge(e).kind.is_generalised()) {
                prop_assert!(is_admissible(&g, &mu, l).unwrap());
            }
        }
    }

    #[test]
    fn random_trees_span_nodes((g, mu) in arb_scaled(4, 3)) {
        check_tree_spans_nodes(&g, &mu);
    }

    #[test]
    fn effective_scale_is_the_smallest_segment((g, mu) in arb_scaled(3, 3)) {
        for e in g.edge_ids() {
            prop_assert!(mu.effective(e) <= mu.i2(e) && mu.i2(e) <= mu.i1(e));
        }
    }
}
