//! Ribbon-graph data model.
//!
//! A [`RibbonGraph`] is a combinatorial map: every vertex owns a cyclically
//! ordered list of ports, every port is either one end of an internal line or
//! carries an external leg. Generalised lines (chains of propagators joined by
//! κ-insertions) are single edges of the map; their insertion count only
//! matters for power counting and numerics.

mod file;
mod topology;
mod tree;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

pub use file::{EdgeDesc, EdgeKindDesc, ExternalDesc, GraphFile, VertexDesc, VertexKindDesc};
pub use topology::{ComponentTopology, Face, Faces, TopologyReport};
pub use tree::{SpanningTree, TreePreference};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("malformed graph: {0}")]
    MalformedGraph(String),
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("unknown edge {0}")]
    UnknownEdge(String),
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
}

macro_rules! index_type {
    ($(#[$m:meta])* $name:ident) => {
        $(#[$m])*
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub struct $name(pub usize);

        impl $name {
            pub fn index(self) -> usize {
                self.0
            }
        }
    };
}

index_type!(VertexId);
index_type!(
    /// Position of an edge in the description; also the tie-break order.
    EdgeId
);
index_type!(ExtId);
index_type!(PortId);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VertexKind {
    Moyal,
    Insertion,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeKind {
    Simple,
    Generalised { insertions: u32 },
}

impl EdgeKind {
    pub fn is_generalised(self) -> bool {
        matches!(self, EdgeKind::Generalised { .. })
    }
}

#[derive(Clone, Debug)]
pub struct Vertex {
    pub id: String,
    pub kind: VertexKind,
    pub ports: Vec<PortId>,
}

#[derive(Clone, Debug)]
pub struct Edge {
    pub id: String,
    pub kind: EdgeKind,
    pub ports: [PortId; 2],
}

#[derive(Clone, Debug)]
pub struct ExternalLeg {
    pub id: String,
    pub port: PortId,
    pub kappa: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Attachment {
    /// End `side` (0 or 1) of an internal line.
    Edge(EdgeId, usize),
    External(ExtId),
}

#[derive(Clone, Debug)]
pub struct Port {
    pub name: String,
    pub vertex: VertexId,
    /// Position in the vertex's cyclic order.
    pub slot: usize,
    pub attachment: Attachment,
}

#[derive(Clone, Debug)]
pub struct RibbonGraph {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    externals: Vec<ExternalLeg>,
    ports: Vec<Port>,
}

impl RibbonGraph {
    /// Validates a description and builds the indexed map.
    pub fn build(desc: &GraphFile) -> Result<Self, GraphError> {
        use GraphError::MalformedGraph as bad;

        if desc.vertices.is_empty() {
            return Err(bad("graph has no vertices".into()));
        }
        unique_ids(desc.vertices.iter().map(|v| v.id.as_str()), "vertex")?;
        unique_ids(desc.edges.iter().map(|e| e.id.as_str()), "edge")?;
        unique_ids(desc.externals.iter().map(|x| x.id.as_str()), "external")?;

        let mut ports: Vec<Port> = Vec::new();
        let mut port_index: HashMap<&str, PortId> = HashMap::new();
        let mut vertices = Vec::with_capacity(desc.vertices.len());
        let mut has_moyal = false;
        let mut has_insertion = false;
        for (vi, v) in desc.vertices.iter().enumerate() {
            let kind = match v.kind {
                VertexKindDesc::Moyal => {
                    has_moyal = true;
                    if v.ports.len() != 4 {
                        return Err(bad(format!(
                            "Moyal vertex {} has {} ports, expected 4",
                            v.id,
                            v.ports.len()
                        )));
                    }
                    VertexKind::Moyal
                }
                VertexKindDesc::Insertion => {
                    has_insertion = true;
                    if v.ports.len() != 2 {
                        return Err(bad(format!(
                            "insertion vertex {} has {} ports, expected 2",
                            v.id,
                            v.ports.len()
                        )));
                    }
                    VertexKind::Insertion
                }
            };
            let mut ids = Vec::with_capacity(v.ports.len());
            for (slot, name) in v.ports.iter().enumerate() {
                let pid = PortId(ports.len());
                if port_index.insert(name.as_str(), pid).is_some() {
                    return Err(bad(format!("port {name} declared twice")));
                }
                ports.push(Port {
                    name: name.clone(),
                    vertex: VertexId(vi),
                    slot,
                    // placeholder, every port is checked for an attachment below
                    attachment: Attachment::External(ExtId(usize::MAX)),
                });
                ids.push(pid);
            }
            vertices.push(Vertex {
                id: v.id.clone(),
                kind,
                ports: ids,
            });
        }
        if has_moyal && has_insertion {
            return Err(bad(
                "insertion vertices are only allowed in graphs without Moyal vertices; \
                 use generalised lines instead"
                    .into(),
            ));
        }

        let mut used = vec![false; ports.len()];
        let mut claim = |name: &str, att: Attachment, ports: &mut Vec<Port>| {
            let pid = *port_index
                .get(name)
                .ok_or_else(|| bad(format!("unknown port {name}")))?;
            if std::mem::replace(&mut used[pid.0], true) {
                return Err(bad(format!("port {name} used twice")));
            }
            ports[pid.0].attachment = att;
            Ok(pid)
        };

        let mut edges = Vec::with_capacity(desc.edges.len());
        for (ei, e) in desc.edges.iter().enumerate() {
            let kind = match (e.kind, e.insertions) {
                (EdgeKindDesc::Simple, None) => EdgeKind::Simple,
                (EdgeKindDesc::Simple, Some(_)) => {
                    return Err(bad(format!("simple edge {} carries insertions", e.id)))
                }
                (EdgeKindDesc::Generalised, Some(n)) if n >= 1 => {
                    EdgeKind::Generalised { insertions: n }
                }
                (EdgeKindDesc::Generalised, _) => {
                    return Err(bad(format!(
                        "generalised edge {} needs insertions >= 1",
                        e.id
                    )))
                }
            };
            if e.ports[0] == e.ports[1] {
                return Err(bad(format!("edge {} joins a port to itself", e.id)));
            }
            let a = claim(&e.ports[0], Attachment::Edge(EdgeId(ei), 0), &mut ports)?;
            let b = claim(&e.ports[1], Attachment::Edge(EdgeId(ei), 1), &mut ports)?;
            edges.push(Edge {
                id: e.id.clone(),
                kind,
                ports: [a, b],
            });
        }

        let mut externals = Vec::with_capacity(desc.externals.len());
        for (xi, x) in desc.externals.iter().enumerate() {
            let p = claim(&x.port, Attachment::External(ExtId(xi)), &mut ports)?;
            externals.push(ExternalLeg {
                id: x.id.clone(),
                port: p,
                kappa: x.kappa,
            });
        }

        if let Some(i) = used.iter().position(|u| !u) {
            return Err(bad(format!(
                "port {} is neither an edge end nor an external leg",
                ports[i].name
            )));
        }

        Ok(RibbonGraph {
            vertices,
            edges,
            externals,
            ports,
        })
    }

    pub fn from_json(text: &str) -> Result<Self, GraphError> {
        Self::build(&GraphFile::from_json(text)?)
    }

    /// Reconstructs the description this graph was built from.
    pub fn to_file(&self) -> GraphFile {
        GraphFile {
            vertices: self
                .vertices
                .iter()
                .map(|v| VertexDesc {
                    id: v.id.clone(),
                    kind: match v.kind {
                        VertexKind::Moyal => VertexKindDesc::Moyal,
                        VertexKind::Insertion => VertexKindDesc::Insertion,
                    },
                    ports: v
                        .ports
                        .iter()
                        .map(|p| self.ports[p.0].name.clone())
                        .collect(),
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeDesc {
                    id: e.id.clone(),
                    ports: e.ports.map(|p| self.ports[p.0].name.clone()),
                    kind: match e.kind {
                        EdgeKind::Simple => EdgeKindDesc::Simple,
                        EdgeKind::Generalised { .. } => EdgeKindDesc::Generalised,
                    },
                    insertions: match e.kind {
                        EdgeKind::Simple => None,
                        EdgeKind::Generalised { insertions } => Some(insertions),
                    },
                })
                .collect(),
            externals: self
                .externals
                .iter()
                .map(|x| ExternalDesc {
                    id: x.id.clone(),
                    port: self.ports[x.port.0].name.clone(),
                    kappa: x.kappa,
                })
                .collect(),
        }
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn externals(&self) -> &[ExternalLeg] {
        &self.externals
    }

    pub fn ports(&self) -> &[Port] {
        &self.ports
    }

    pub fn vertex(&self, v: VertexId) -> &Vertex {
        &self.vertices[v.0]
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.0]
    }

    pub fn external(&self, x: ExtId) -> &ExternalLeg {
        &self.externals[x.0]
    }

    pub fn port(&self, p: PortId) -> &Port {
        &self.ports[p.0]
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertices.len()).map(VertexId)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edges.len()).map(EdgeId)
    }

    pub fn external_ids(&self) -> impl Iterator<Item = ExtId> {
        (0..self.externals.len()).map(ExtId)
    }

    pub fn edge_by_name(&self, name: &str) -> Result<EdgeId, GraphError> {
        self.edges
            .iter()
            .position(|e| e.id == name)
            .map(EdgeId)
            .ok_or_else(|| GraphError::UnknownEdge(name.to_string()))
    }

    pub fn vertex_by_name(&self, name: &str) -> Result<VertexId, GraphError> {
        self.vertices
            .iter()
            .position(|v| v.id == name)
            .map(VertexId)
            .ok_or_else(|| GraphError::UnknownVertex(name.to_string()))
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// N, the number of external legs.
    pub fn num_externals(&self) -> usize {
        self.externals.len()
    }

    /// N_κ, the number of external legs carrying a κ-insertion.
    pub fn num_kappa_externals(&self) -> usize {
        self.externals.iter().filter(|x| x.kappa).count()
    }

    pub fn num_moyal_vertices(&self) -> usize {
        self.vertices
            .iter()
            .filter(|v| v.kind == VertexKind::Moyal)
            .count()
    }

    /// True for the propagator chains joined by bare insertions, which carry
    /// no Moyal vertex at all.
    pub fn is_insertion_chain(&self) -> bool {
        self.num_moyal_vertices() == 0
    }

    /// The vertices at the two ends of an edge, in port order.
    pub fn endpoints(&self, e: EdgeId) -> (VertexId, VertexId) {
        let [a, b] = self.edges[e.0].ports;
        (self.ports[a.0].vertex, self.ports[b.0].vertex)
    }

    pub fn is_self_loop(&self, e: EdgeId) -> bool {
        let (a, b) = self.endpoints(e);
        a == b
    }

    /// The port across the line, or the port itself for an external leg.
    pub fn alpha(&self, p: PortId) -> PortId {
        match self.ports[p.0].attachment {
            Attachment::Edge(e, side) => self.edges[e.0].ports[1 - side],
            Attachment::External(_) => p,
        }
    }

    /// The next port counterclockwise around the owning vertex.
    pub fn sigma(&self, p: PortId) -> PortId {
        let port = &self.ports[p.0];
        let ring = &self.vertices[port.vertex.0].ports;
        ring[(port.slot + 1) % ring.len()]
    }

    /// Ports of `v` in cyclic order starting right after `after`
    /// (or at the first listed port), `after` itself excluded.
    pub fn ports_after(&self, v: VertexId, after: Option<PortId>) -> Vec<PortId> {
        let ring = &self.vertices[v.0].ports;
        match after {
            None => ring.clone(),
            Some(p) => {
                let start = self.ports[p.0].slot;
                (1..ring.len())
                    .map(|k| ring[(start + k) % ring.len()])
                    .collect()
            }
        }
    }

    /// Connected components as sorted vertex lists, using the edges for which
    /// `keep` holds.
    pub fn components_with(&self, keep: impl Fn(EdgeId) -> bool) -> Vec<Vec<VertexId>> {
        let mut dsu = Dsu::new(self.vertices.len());
        for e in self.edge_ids().filter(|&e| keep(e)) {
            let (a, b) = self.endpoints(e);
            dsu.union(a.0, b.0);
        }
        let mut groups: HashMap<usize, Vec<VertexId>> = HashMap::new();
        for v in 0..self.vertices.len() {
            groups.entry(dsu.find(v)).or_default().push(VertexId(v));
        }
        let mut out: Vec<Vec<VertexId>> = groups.into_values().collect();
        out.sort();
        out
    }

    pub fn components(&self) -> Vec<Vec<VertexId>> {
        self.components_with(|_| true)
    }

    /// k, the number of connected components.
    pub fn num_components(&self) -> usize {
        self.components().len()
    }

    pub fn is_connected(&self) -> bool {
        self.num_components() == 1
    }

    /// The sub-map on `vertices` keeping only `edges`. Every port of a kept
    /// vertex that is not an end of a kept edge becomes an external leg; it is
    /// κ-flagged if it was a κ-flagged leg or an end of a generalised line.
    pub fn subgraph(&self, vertices: &[VertexId], edges: &[EdgeId]) -> RibbonGraph {
        let vset: BTreeSet<VertexId> = vertices.iter().copied().collect();
        let eset: BTreeSet<EdgeId> = edges.iter().copied().collect();
        let mut desc = GraphFile {
            vertices: Vec::new(),
            edges: Vec::new(),
            externals: Vec::new(),
        };
        for &v in &vset {
            let vert = &self.vertices[v.0];
            desc.vertices.push(VertexDesc {
                id: vert.id.clone(),
                kind: match vert.kind {
                    VertexKind::Moyal => VertexKindDesc::Moyal,
                    VertexKind::Insertion => VertexKindDesc::Insertion,
                },
                ports: vert
                    .ports
                    .iter()
                    .map(|p| self.ports[p.0].name.clone())
                    .collect(),
            });
            for &p in &vert.ports {
                let port = &self.ports[p.0];
                match port.attachment {
                    Attachment::External(x) => desc.externals.push(ExternalDesc {
                        id: self.externals[x.0].id.clone(),
                        port: port.name.clone(),
                        kappa: self.externals[x.0].kappa,
                    }),
                    Attachment::Edge(e, _) if !eset.contains(&e) => {
                        desc.externals.push(ExternalDesc {
                            id: format!("{}@{}", self.edges[e.0].id, port.name),
                            port: port.name.clone(),
                            kappa: self.edges[e.0].kind.is_generalised(),
                        })
                    }
                    Attachment::Edge(..) => {}
                }
            }
        }
        for &e in &eset {
            let edge = &self.edges[e.0];
            let (a, b) = self.endpoints(e);
            debug_assert!(vset.contains(&a) && vset.contains(&b));
            desc.edges.push(EdgeDesc {
                id: edge.id.clone(),
                ports: edge.ports.map(|p| self.ports[p.0].name.clone()),
                kind: match edge.kind {
                    EdgeKind::Simple => EdgeKindDesc::Simple,
                    EdgeKind::Generalised { .. } => EdgeKindDesc::Generalised,
                },
                insertions: match edge.kind {
                    EdgeKind::Simple => None,
                    EdgeKind::Generalised { insertions } => Some(insertions),
                },
            });
        }
        RibbonGraph::build(&desc).expect("sub-map of a valid graph is valid")
    }
}

impl fmt::Display for RibbonGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "RibbonGraph(v={}, e={}, N={})",
            self.vertices.len(),
            self.edges.len(),
            self.externals.len()
        )
    }
}

fn unique_ids<'a>(ids: impl Iterator<Item = &'a str>, what: &str) -> Result<(), GraphError> {
    let mut seen = BTreeSet::new();
    for id in ids {
        if !seen.insert(id) {
            return Err(GraphError::MalformedGraph(format!(
                "duplicate {what} id {id}"
            )));
        }
    }
    Ok(())
}

pub(crate) struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    pub(crate) fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when both were already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tadpole() -> &'static str {
        r#"{
          "vertices": [{"id": "v", "ports": ["a", "b", "c", "d"]}],
          "edges": [{"id": "l", "ports": ["a", "b"], "kind": "simple"}],
          "externals": [{"id": "e1", "port": "c"}, {"id": "e2", "port": "d"}]
        }"#
    }

    #[test]
    fn smallest_tadpole_builds() {
        let g = RibbonGraph::from_json(tadpole()).unwrap();
        assert_eq!(g.num_vertices(), 1);
        assert_eq!(g.num_edges(), 1);
        assert_eq!(g.num_externals(), 2);
        assert!(g.is_self_loop(EdgeId(0)));
    }

    #[test]
    fn empty_description_is_malformed() {
        let err = RibbonGraph::from_json(r#"{"vertices":[],"edges":[],"externals":[]}"#);
        assert!(matches!(err, Err(GraphError::MalformedGraph(_))));
    }

    #[test]
    fn port_used_twice_is_rejected() {
        let text = tadpole().replace(r#""port": "d""#, r#""port": "c""#);
        assert!(matches!(
            RibbonGraph::from_json(&text),
            Err(GraphError::MalformedGraph(_))
        ));
    }

    #[test]
    fn wrong_valence_is_rejected() {
        let text = tadpole().replace(r#""a", "b", "c", "d""#, r#""a", "b", "c""#);
        assert!(matches!(
            RibbonGraph::from_json(&text),
            Err(GraphError::MalformedGraph(_))
        ));
    }

    #[test]
    fn zero_insertions_is_rejected() {
        let text = tadpole().replace(
            r#""kind": "simple""#,
            r#""kind": "generalised", "insertions": 0"#,
        );
        assert!(matches!(
            RibbonGraph::from_json(&text),
            Err(GraphError::MalformedGraph(_))
        ));
    }

    #[test]
    fn syntax_error_is_a_parse_error() {
        assert!(matches!(
            RibbonGraph::from_json("{ nope"),
            Err(GraphError::Parse(_))
        ));
    }

    #[test]
    fn sigma_and_alpha() {
        let g = RibbonGraph::from_json(tadpole()).unwrap();
        let a = PortId(0);
        assert_eq!(g.alpha(a), PortId(1));
        assert_eq!(g.sigma(PortId(3)), a);
        assert_eq!(g.alpha(PortId(2)), PortId(2));
        assert_eq!(
            g.ports_after(VertexId(0), Some(PortId(2))),
            vec![PortId(3), a, PortId(1)]
        );
    }

    #[test]
    fn subgraph_turns_cut_lines_into_legs() {
        let g = RibbonGraph::from_json(tadpole()).unwrap();
        let s = g.subgraph(&[VertexId(0)], &[]);
        assert_eq!(s.num_edges(), 0);
        assert_eq!(s.num_externals(), 4);
        assert_eq!(s.num_kappa_externals(), 0);
    }
}
