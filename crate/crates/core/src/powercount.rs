//! Degree-of-convergence bounds and the counterterm each divergent
//! subgraph feeds.
//!
//! `ω` is always a lower bound. A node diverges when `ω <= 0`, and `ω = 0`
//! is the logarithmic case.

use std::collections::BTreeSet;

use num_rational::Rational64;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{GraphError, RibbonGraph, TreePreference, VertexId};
use crate::multiscale::{gn_tree, GnNode, ScaleAttribution};

#[derive(Debug, Error)]
pub enum PowerCountError {
    #[error("invalid topology: {0}")]
    InvalidTopology(String),
    #[error("inconsistent node data: {0}")]
    InconsistentNode(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn check_topology(n: usize, b: usize) -> Result<(), PowerCountError> {
    if n < 2 || n % 2 == 1 {
        return Err(PowerCountError::InvalidTopology(format!(
            "N = {n} must be even and at least 2"
        )));
    }
    if b < 1 {
        return Err(PowerCountError::InvalidTopology(
            "b must be at least 1".into(),
        ));
    }
    Ok(())
}

/// Bound without insertions: `N - 4 + 4g + 2(b - 1)`.
pub fn omega_kappa0(n: usize, g: u32, b: usize) -> Result<i64, PowerCountError> {
    check_topology(n, b)?;
    Ok(n as i64 - 4 + 4 * i64::from(g) + 2 * (b as i64 - 1))
}

/// Matrix-basis bound of the φ⁶ model: `½(N - 6 + 8g + 4(b - 1) + 2v₄)`.
pub fn omega_phi6(n: usize, g: u32, b: usize, v4: usize) -> Result<Rational64, PowerCountError> {
    check_topology(n, b)?;
    let twice = n as i64 - 6 + 8 * i64::from(g) + 4 * (b as i64 - 1) + 2 * v4 as i64;
    Ok(Rational64::new(twice, 2))
}

/// What the bound of a node depends on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct NodeData {
    pub n: usize,
    pub n_kappa: usize,
    pub g: u32,
    pub b: usize,
    pub tree_like: bool,
    /// Generalised loop lines.
    pub loop_kappa: usize,
    pub e_kappa_empty: bool,
}

impl NodeData {
    pub fn planar_regular(&self) -> bool {
        self.g == 0 && self.b == 1
    }

    pub fn has_insertions(&self) -> bool {
        self.n_kappa > 0 || !self.e_kappa_empty
    }

    fn check(&self) -> Result<(), PowerCountError> {
        let bad = |m: &str| Err(PowerCountError::InconsistentNode(format!("{m}: {self:?}")));
        if self.n < 2 || self.n % 2 == 1 {
            return bad("N must be even and at least 2");
        }
        if self.n_kappa > self.n {
            return bad("N_κ exceeds N");
        }
        if self.b < 1 || self.b > self.n {
            return bad("b must lie in 1..=N");
        }
        if self.tree_like && self.loop_kappa > 0 {
            return bad("a tree-like node has no generalised loop line");
        }
        if self.e_kappa_empty && (self.loop_kappa > 0 || !self.tree_like) {
            return bad("no generalised lines but generalised structure claimed");
        }
        Ok(())
    }
}

/// Which branch of the case table fixed the bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundCase {
    NotTreeLike,
    NonPlanar,
    BrokenFaces,
    PlanarRegularWithLines,
    PlanarRegular,
    /// All legs carry insertions; the global delta absorbs one of them.
    PlanarRegularAllKappa,
    /// No Moyal vertex at all.
    InsertionChain,
}

impl BoundCase {
    pub fn name(self) -> &'static str {
        match self {
            BoundCase::NotTreeLike => "not-tree-like",
            BoundCase::NonPlanar => "non-planar",
            BoundCase::BrokenFaces => "broken-faces",
            BoundCase::PlanarRegularWithLines => "planar-regular-with-lines",
            BoundCase::PlanarRegular => "planar-regular",
            BoundCase::PlanarRegularAllKappa => "planar-regular-all-kappa",
            BoundCase::InsertionChain => "insertion-chain",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Counterterm {
    #[serde(rename = "mass/wave/Ω")]
    MassWaveOmega,
    #[serde(rename = "lambda")]
    Lambda,
    #[serde(rename = "kappa²")]
    KappaSquared,
}

impl Counterterm {
    pub fn name(self) -> &'static str {
        match self {
            Counterterm::MassWaveOmega => "mass/wave/Ω",
            Counterterm::Lambda => "lambda",
            Counterterm::KappaSquared => "kappa²",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub case: BoundCase,
    /// Lower bound on the degree of convergence.
    pub bound: i64,
    pub divergent: bool,
    pub logarithmic: bool,
    pub counterterm: Option<Counterterm>,
}

fn verdict(case: BoundCase, bound: i64, counterterm: Option<Counterterm>) -> Classification {
    let divergent = bound <= 0;
    Classification {
        case,
        bound,
        divergent,
        logarithmic: bound == 0,
        counterterm: if divergent { counterterm } else { None },
    }
}

/// The case table for a node containing Moyal vertices.
pub fn classify_node(d: &NodeData) -> Result<Classification, PowerCountError> {
    d.check()?;
    let n = d.n as i64;
    let (case, bound) = if !d.tree_like {
        (BoundCase::NotTreeLike, n + 4 * d.loop_kappa as i64)
    } else if d.g >= 1 {
        (BoundCase::NonPlanar, n)
    } else if d.b >= 2 {
        (BoundCase::BrokenFaces, n - 2)
    } else if !d.e_kappa_empty {
        (BoundCase::PlanarRegularWithLines, n - 2)
    } else if d.n_kappa < d.n {
        (BoundCase::PlanarRegular, n - 4 + 2 * d.n_kappa as i64)
    } else {
        (
            BoundCase::PlanarRegularAllKappa,
            n - 4 + 2 * (d.n_kappa as i64 - 1),
        )
    };
    let counterterm = match d.n {
        4 => Some(Counterterm::Lambda),
        2 if d.b >= 2 || d.has_insertions() => Some(Counterterm::KappaSquared),
        2 => Some(Counterterm::MassWaveOmega),
        _ => None,
    };
    Ok(verdict(case, bound, counterterm))
}

/// Chains of insertions without a Moyal vertex diverge logarithmically and
/// renormalise `κ²`.
pub fn classify_insertion_chain() -> Classification {
    verdict(
        BoundCase::InsertionChain,
        0,
        Some(Counterterm::KappaSquared),
    )
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NodeReport {
    pub label: String,
    pub level: u32,
    pub k: usize,
    pub vertices: Vec<String>,
    pub edges: Vec<String>,
    pub data: NodeData,
    #[serde(flatten)]
    pub class: Classification,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DivergenceReport {
    pub nodes: Vec<NodeReport>,
    pub counterterms: BTreeSet<Counterterm>,
}

impl DivergenceReport {
    pub fn any_divergent(&self) -> bool {
        self.nodes.iter().any(|n| n.class.divergent)
    }
}

/// Node data read off the node as a stand-alone graph. Generalised lines
/// enter the node's spanning tree last, so a generalised line that is not a
/// bridge ends up among the loop lines.
pub fn node_data(g: &RibbonGraph, node: &GnNode) -> Result<NodeData, PowerCountError> {
    let sub = node.subgraph(g);
    let top = sub.topology()?;
    let simple_first: Vec<u32> = sub
        .edges()
        .iter()
        .map(|e| u32::from(!e.kind.is_generalised()))
        .collect();
    let tree = sub.spanning_tree(VertexId(0), &TreePreference::ScaleDescending(simple_first))?;
    let loop_kappa = tree
        .loop_edges
        .iter()
        .filter(|e| sub.edge(**e).kind.is_generalised())
        .count();
    Ok(NodeData {
        n: node.n,
        n_kappa: node.n_kappa,
        g: top.g,
        b: top.b,
        tree_like: top.tree_like,
        loop_kappa,
        e_kappa_empty: node.e_kappa == 0,
    })
}

/// Classifies every node of the inclusion tree of `g` under `mu`.
pub fn classify_graph(
    g: &RibbonGraph,
    mu: &ScaleAttribution,
) -> Result<DivergenceReport, PowerCountError> {
    let tree = gn_tree(g, mu);
    let mut nodes = Vec::with_capacity(tree.nodes.len());
    for node in &tree.nodes {
        let data = node_data(g, node)?;
        let moyal = node
            .vertices
            .iter()
            .any(|&v| g.vertex(v).kind == crate::graph::VertexKind::Moyal);
        let class = if moyal {
            classify_node(&data)?
        } else {
            classify_insertion_chain()
        };
        nodes.push(NodeReport {
            label: node.label(),
            level: node.level,
            k: node.k,
            vertices: node
                .vertices
                .iter()
                .map(|&v| g.vertex(v).id.clone())
                .collect(),
            edges: node.edges.iter().map(|&e| g.edge(e).id.clone()).collect(),
            data,
            class,
        });
    }
    let counterterms = nodes.iter().filter_map(|n| n.class.counterterm).collect();
    Ok(DivergenceReport {
        nodes,
        counterterms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn planar(n: usize, n_kappa: usize) -> NodeData {
        NodeData {
            n,
            n_kappa,
            g: 0,
            b: 1,
            tree_like: true,
            loop_kappa: 0,
            e_kappa_empty: true,
        }
    }

    #[test]
    fn kappa0_and_phi6_substitutions() {
        assert_eq!(omega_kappa0(2, 0, 2).unwrap(), 0);
        assert_eq!(omega_kappa0(4, 0, 1).unwrap(), 0);
        assert_eq!(omega_kappa0(2, 1, 1).unwrap(), 2);
        assert_eq!(omega_phi6(2, 0, 2, 0).unwrap(), Rational64::from_integer(0));
        assert_eq!(omega_phi6(6, 0, 1, 0).unwrap(), Rational64::from_integer(0));
        assert_eq!(
            omega_phi6(2, 0, 1, 1).unwrap(),
            Rational64::from_integer(-1)
        );
        assert!(omega_kappa0(3, 0, 1).is_err());
        assert!(omega_phi6(2, 0, 0, 0).is_err());
    }

    #[test]
    fn two_point_planar_regular_feeds_the_mass() {
        let c = classify_node(&planar(2, 0)).unwrap();
        assert_eq!((c.bound, c.divergent, c.logarithmic), (-2, true, false));
        assert_eq!(c.counterterm, Some(Counterterm::MassWaveOmega));
    }

    #[test]
    fn all_legs_kappa() {
        let c = classify_node(&planar(2, 2)).unwrap();
        assert_eq!(c.case, BoundCase::PlanarRegularAllKappa);
        assert_eq!(c.bound, 0);
        assert_eq!(c.counterterm, Some(Counterterm::KappaSquared));
    }

    #[test]
    fn inconsistent_data_is_rejected() {
        let mut d = planar(2, 0);
        d.loop_kappa = 1;
        assert!(matches!(
            classify_node(&d),
            Err(PowerCountError::InconsistentNode(_))
        ));
        assert!(classify_node(&planar(2, 3)).is_err());
        assert!(classify_node(&planar(3, 0)).is_err());
    }

    #[test]
    fn convergent_nodes_get_no_counterterm() {
        let c = classify_node(&planar(6, 0)).unwrap();
        assert_eq!(c.bound, 2);
        assert_eq!(c.counterterm, None);
    }
}
