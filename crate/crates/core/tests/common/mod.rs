#![allow(dead_code)]

use std::path::PathBuf;

use proptest::prelude::*;
use ribbon_core::graph::{
    EdgeDesc, EdgeKindDesc, ExternalDesc, GraphFile, VertexDesc, VertexKindDesc,
};
use ribbon_core::{EdgeId, EdgeKind, RibbonGraph, ScaleAttribution};

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

pub fn load(name: &str) -> RibbonGraph {
    let text = std::fs::read_to_string(corpus_dir().join(format!("{name}.graph"))).unwrap();
    RibbonGraph::from_json(&text).unwrap()
}

pub fn corpus_names() -> Vec<String> {
    let mut names: Vec<String> = std::fs::read_dir(corpus_dir())
        .unwrap()
        .filter_map(|e| {
            let p = e.unwrap().path();
            (p.extension()? == "graph")
                .then(|| p.file_stem().unwrap().to_string_lossy().into_owned())
        })
        .collect();
    names.sort();
    names
}

/// Moyal graphs with `vertices` vertices: ports are shuffled, the first
/// `2 * lines` are paired into lines, the rest become external legs.
pub fn arb_graph(max_vertices: usize) -> impl Strategy<Value = RibbonGraph> {
    (1..=max_vertices)
        .prop_flat_map(|v| {
            let ports = 4 * v;
            (
                Just(v),
                0..=(ports / 2),
                Just((0..ports).collect::<Vec<_>>()).prop_shuffle(),
                proptest::collection::vec(any::<bool>(), ports),
            )
        })
        .prop_map(|(v, lines, order, flags)| {
            let name = |p: usize| format!("p{p}");
            let vertices = (0..v)
                .map(|i| VertexDesc {
                    id: format!("v{i}"),
                    kind: VertexKindDesc::Moyal,
                    ports: (4 * i..4 * i + 4).map(name).collect(),
                })
                .collect();
            let edges = (0..lines)
                .map(|k| EdgeDesc {
                    id: format!("l{k}"),
                    ports: [name(order[2 * k]), name(order[2 * k + 1])],
                    kind: if flags[k] {
                        EdgeKindDesc::Generalised
                    } else {
                        EdgeKindDesc::Simple
                    },
                    insertions: flags[k].then_some(1),
                })
                .collect();
            let externals = order[2 * lines..]
                .iter()
                .enumerate()
                .map(|(k, &p)| ExternalDesc {
                    id: format!("x{k}"),
                    port: name(p),
                    kappa: flags[p],
                })
                .collect();
            RibbonGraph::build(&GraphFile {
                vertices,
                edges,
                externals,
            })
            .unwrap()
        })
}

/// A random graph with a random attribution of scales `0..=max_scale`.
pub fn arb_scaled(
    max_vertices: usize,
    max_scale: u32,
) -> impl Strategy<Value = (RibbonGraph, ScaleAttribution)> {
    arb_graph(max_vertices).prop_flat_map(move |g| {
        let lengths: Vec<usize> = g
            .edges()
            .iter()
            .map(|e| match e.kind {
                EdgeKind::Simple => 1,
                EdgeKind::Generalised { insertions } => insertions as usize + 1,
            })
            .collect();
        let segments = lengths
            .into_iter()
            .map(|n| proptest::collection::vec(0..=max_scale, n))
            .collect::<Vec<_>>();
        (Just(g), segments).prop_map(|(g, s)| {
            let mu = ScaleAttribution::new(&g, s).unwrap();
            (g, mu)
        })
    })
}

/// Connected components after dropping the edges rejected by `keep`, by
/// flooding from every vertex.
pub fn count_components(g: &RibbonGraph, keep: impl Fn(EdgeId) -> bool) -> usize {
    let n = g.num_vertices();
    let mut label = vec![usize::MAX; n];
    let mut count = 0;
    for start in 0..n {
        if label[start] != usize::MAX {
            continue;
        }
        label[start] = count;
        let mut changed = true;
        while changed {
            changed = false;
            for e in g.edge_ids().filter(|&e| keep(e)) {
                let (a, b) = g.endpoints(e);
                let (la, lb) = (label[a.0] == count, label[b.0] == count);
                if la != lb {
                    label[a.0] = count;
                    label[b.0] = count;
                    changed = true;
                }
            }
        }
        count += 1;
    }
    count
}
