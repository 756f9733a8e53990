//! Scale attributions, quasi-local subgraphs and the inclusion tree.
//!
//! Every line carries a slice index. A generalised line carries one index per
//! segment and behaves as a line of scale `i_m`, the smallest of them. The
//! quasi-local subgraphs at level `i` are the connected components of the
//! lines of scale `>= i`; nested over all levels they form the inclusion tree
//! (the Gallavotti–Nicolò tree).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{EdgeId, EdgeKind, RibbonGraph, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MultiscaleError {
    #[error("attribution parse error: {0}")]
    Parse(String),
    #[error("no scale given for edge {0}")]
    MissingScale(String),
    #[error("scale given for unknown edge {0}")]
    UnknownEdge(String),
    #[error("edge {edge} needs {expected} segment scales, got {got}")]
    LengthMismatch {
        edge: String,
        expected: usize,
        got: usize,
    },
    #[error("edge {0} is not a generalised line")]
    NotGeneralised(String),
}

/// One entry of an attribution file: a bare index for a simple line, a list
/// of segment indices for a generalised line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScaleEntry {
    Simple(u32),
    Segments(Vec<u32>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ScaleAttribution {
    /// Segment scales per edge, indexed by edge; simple lines have one segment.
    segments: Vec<Vec<u32>>,
}

impl ScaleAttribution {
    pub fn new(g: &RibbonGraph, segments: Vec<Vec<u32>>) -> Result<Self, MultiscaleError> {
        if segments.len() != g.num_edges() {
            return Err(MultiscaleError::MissingScale(format!(
                "{} of {} edges covered",
                segments.len(),
                g.num_edges()
            )));
        }
        for (e, segs) in g.edge_ids().zip(&segments) {
            let expected = segment_count(g, e);
            if segs.len() != expected {
                return Err(MultiscaleError::LengthMismatch {
                    edge: g.edge(e).id.clone(),
                    expected,
                    got: segs.len(),
                });
            }
        }
        Ok(ScaleAttribution { segments })
    }

    /// Every segment of every line at scale `i`.
    pub fn flat(g: &RibbonGraph, i: u32) -> Self {
        ScaleAttribution {
            segments: g.edge_ids().map(|e| vec![i; segment_count(g, e)]).collect(),
        }
    }

    pub fn from_map(
        g: &RibbonGraph,
        map: &BTreeMap<String, ScaleEntry>,
    ) -> Result<Self, MultiscaleError> {
        for name in map.keys() {
            if g.edge_by_name(name).is_err() {
                return Err(MultiscaleError::UnknownEdge(name.clone()));
            }
        }
        let mut segments = Vec::with_capacity(g.num_edges());
        for e in g.edge_ids() {
            let name = &g.edge(e).id;
            let segs = match map.get(name) {
                None => return Err(MultiscaleError::MissingScale(name.clone())),
                Some(ScaleEntry::Simple(i)) => vec![*i],
                Some(ScaleEntry::Segments(v)) => v.clone(),
            };
            segments.push(segs);
        }
        Self::new(g, segments)
    }

    pub fn from_json(g: &RibbonGraph, text: &str) -> Result<Self, MultiscaleError> {
        let map: BTreeMap<String, ScaleEntry> =
            serde_json::from_str(text).map_err(|e| MultiscaleError::Parse(e.to_string()))?;
        Self::from_map(g, &map)
    }

    pub fn to_map(&self, g: &RibbonGraph) -> BTreeMap<String, ScaleEntry> {
        g.edge_ids()
            .map(|e| {
                let segs = &self.segments[e.0];
                let entry = match g.edge(e).kind {
                    EdgeKind::Simple => ScaleEntry::Simple(segs[0]),
                    EdgeKind::Generalised { .. } => ScaleEntry::Segments(segs.clone()),
                };
                (g.edge(e).id.clone(), entry)
            })
            .collect()
    }

    pub fn segments(&self, e: EdgeId) -> &[u32] {
        &self.segments[e.0]
    }

    /// `i_m`, the effective scale of the line.
    pub fn effective(&self, e: EdgeId) -> u32 {
        *self.segments[e.0]
            .iter()
            .min()
            .expect("at least one segment")
    }

    /// `i_1`, the larger of the two end-segment scales.
    pub fn i1(&self, e: EdgeId) -> u32 {
        let s = &self.segments[e.0];
        s[0].max(s[s.len() - 1])
    }

    /// `i_2`, the smaller of the two end-segment scales.
    pub fn i2(&self, e: EdgeId) -> u32 {
        let s = &self.segments[e.0];
        s[0].min(s[s.len() - 1])
    }

    pub fn effective_all(&self) -> Vec<u32> {
        (0..self.segments.len())
            .map(|e| self.effective(EdgeId(e)))
            .collect()
    }

    pub fn max_effective(&self) -> u32 {
        self.effective_all().into_iter().max().unwrap_or(0)
    }

    /// All attributions with every segment scale in `0..=max`, in
    /// lexicographic order of the flattened segment list.
    pub fn enumerate(g: &RibbonGraph, max: u32) -> Vec<ScaleAttribution> {
        let shape: Vec<usize> = g.edge_ids().map(|e| segment_count(g, e)).collect();
        let slots: usize = shape.iter().sum();
        let base = max as usize + 1;
        let total = base
            .checked_pow(slots as u32)
            .expect("attribution count overflows");
        let mut out = Vec::with_capacity(total);
        let mut digits = vec![0u32; slots];
        for _ in 0..total {
            let mut it = digits.iter().copied();
            let segments = shape
                .iter()
                .map(|&n| it.by_ref().take(n).collect())
                .collect();
            out.push(ScaleAttribution { segments });
            for d in digits.iter_mut().rev() {
                if *d < max {
                    *d += 1;
                    break;
                }
                *d = 0;
            }
        }
        out
    }
}

fn segment_count(g: &RibbonGraph, e: EdgeId) -> usize {
    match g.edge(e).kind {
        EdgeKind::Simple => 1,
        EdgeKind::Generalised { insertions } => insertions as usize + 1,
    }
}

/// A quasi-local subgraph `G^i_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub level: u32,
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
}

/// Components of the lines of effective scale `>= i`. At level 0 these are
/// the components of the graph; above it only components holding at least
/// one line are returned.
pub fn quasi_local(g: &RibbonGraph, mu: &ScaleAttribution, i: u32) -> Vec<Component> {
    let eff = mu.effective_all();
    let keep = |e: EdgeId| eff[e.0] >= i;
    g.components_with(keep)
        .into_iter()
        .map(|vertices| {
            let edges: Vec<EdgeId> = g
                .edge_ids()
                .filter(|&e| keep(e) && vertices.contains(&g.endpoints(e).0))
                .collect();
            Component {
                level: i,
                vertices,
                edges,
            }
        })
        .filter(|c| i == 0 || !c.edges.is_empty())
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GnNode {
    pub level: u32,
    /// 1-based position among the components of its level.
    pub k: usize,
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    /// External legs of the graph at the node plus ends of lower-scale lines.
    pub n: usize,
    /// κ-flagged legs plus ends of lower-scale generalised lines.
    pub n_kappa: usize,
    /// Generalised lines inside the node.
    pub e_kappa: usize,
}

impl GnNode {
    pub fn label(&self) -> String {
        format!("({},{})", self.level, self.k)
    }

    /// The node as a stand-alone graph: lines leaving it become external legs.
    pub fn subgraph(&self, g: &RibbonGraph) -> RibbonGraph {
        g.subgraph(&self.vertices, &self.edges)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GnTree {
    /// Nodes by level, then by smallest vertex.
    pub nodes: Vec<GnNode>,
}

impl GnTree {
    pub fn roots(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.nodes.len()).filter(|&n| self.nodes[n].parent.is_none())
    }

    pub fn at_level(&self, i: u32) -> impl Iterator<Item = &GnNode> {
        self.nodes.iter().filter(move |n| n.level == i)
    }
}

pub fn gn_tree(g: &RibbonGraph, mu: &ScaleAttribution) -> GnTree {
    let eff = mu.effective_all();
    let mut nodes: Vec<GnNode> = Vec::new();
    let mut prev_level: Vec<usize> = Vec::new();
    for i in 0..=mu.max_effective() {
        let mut this_level = Vec::new();
        for (k, comp) in quasi_local(g, mu, i).into_iter().enumerate() {
            let mut n = 0;
            let mut n_kappa = 0;
            for &v in &comp.vertices {
                for &p in &g.vertex(v).ports {
                    match g.port(p).attachment {
                        crate::graph::Attachment::External(x) => {
                            n += 1;
                            n_kappa += usize::from(g.external(x).kappa);
                        }
                        crate::graph::Attachment::Edge(e, _) if eff[e.0] < i => {
                            n += 1;
                            n_kappa += usize::from(g.edge(e).kind.is_generalised());
                        }
                        crate::graph::Attachment::Edge(..) => {}
                    }
                }
            }
            let e_kappa = comp
                .edges
                .iter()
                .filter(|e| g.edge(**e).kind.is_generalised())
                .count();
            let parent = prev_level
                .iter()
                .copied()
                .find(|&pn| nodes[pn].vertices.contains(&comp.vertices[0]));
            let id = nodes.len();
            if let Some(pn) = parent {
                nodes[pn].children.push(id);
            }
            nodes.push(GnNode {
                level: i,
                k: k + 1,
                vertices: comp.vertices,
                edges: comp.edges,
                parent,
                children: Vec::new(),
                n,
                n_kappa,
                e_kappa,
            });
            this_level.push(id);
        }
        prev_level = this_level;
    }
    GnTree { nodes }
}

/// True iff the generalised line `l` is a bridge of the quasi-local
/// component holding it at its own effective scale.
pub fn is_admissible(
    g: &RibbonGraph,
    mu: &ScaleAttribution,
    l: EdgeId,
) -> Result<bool, MultiscaleError> {
    if !g.edge(l).kind.is_generalised() {
        return Err(MultiscaleError::NotGeneralised(g.edge(l).id.clone()));
    }
    let eff = mu.effective_all();
    let level = eff[l.0];
    Ok(g.bridges_with(|e| eff[e.0] >= level)[l.0])
}
