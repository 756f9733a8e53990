//! Faces, genus and broken faces.
//!
//! Faces are the orbits of `φ = σ∘α`. External legs are fixed points of `α`,
//! so a face walk runs straight past a leg and the leg marks the face broken.

use serde::Serialize;

use super::{Attachment, EdgeId, GraphError, PortId, RibbonGraph, VertexId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    /// Ports in walk order, starting from the smallest port id of the orbit.
    pub ports: Vec<PortId>,
    pub broken: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Faces {
    pub faces: Vec<Face>,
    pub broken: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentTopology {
    pub vertices: Vec<String>,
    pub v: usize,
    pub e: usize,
    pub e0: usize,
    pub e_kappa: usize,
    pub f: usize,
    pub chi: i64,
    pub g: u32,
    pub b: usize,
    pub n: usize,
    pub n_kappa: usize,
    pub planar: bool,
    pub regular: bool,
    pub tree_like: bool,
}

/// Per-component invariants plus totals over the whole graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TopologyReport {
    pub v: usize,
    pub e: usize,
    pub e0: usize,
    pub e_kappa: usize,
    pub f: usize,
    pub k: usize,
    pub chi: i64,
    pub g: u32,
    pub b: usize,
    pub planar: bool,
    pub regular: bool,
    pub tree_like: bool,
    pub components: Vec<ComponentTopology>,
}

impl RibbonGraph {
    /// The face permutation `σ∘α`.
    pub fn phi(&self, p: PortId) -> PortId {
        self.sigma(self.alpha(p))
    }

    pub fn faces(&self) -> Faces {
        let mut seen = vec![false; self.ports().len()];
        let mut faces = Vec::new();
        for start in 0..self.ports().len() {
            if seen[start] {
                continue;
            }
            let mut ports = Vec::new();
            let mut broken = false;
            let mut p = PortId(start);
            while !seen[p.0] {
                seen[p.0] = true;
                broken |= matches!(self.port(p).attachment, Attachment::External(_));
                ports.push(p);
                p = self.phi(p);
            }
            debug_assert_eq!(p, PortId(start), "φ is a permutation");
            faces.push(Face { ports, broken });
        }
        let broken = faces.iter().filter(|f| f.broken).count();
        Faces { faces, broken }
    }

    pub fn topology(&self) -> Result<TopologyReport, GraphError> {
        let faces = self.faces();
        let comps = self.components();
        let mut comp_of = vec![0usize; self.num_vertices()];
        for (ci, c) in comps.iter().enumerate() {
            for v in c {
                comp_of[v.0] = ci;
            }
        }
        let mut components: Vec<ComponentTopology> = comps
            .iter()
            .map(|c| ComponentTopology {
                vertices: c.iter().map(|v| self.vertex(*v).id.clone()).collect(),
                v: c.len(),
                e: 0,
                e0: 0,
                e_kappa: 0,
                f: 0,
                chi: 0,
                g: 0,
                b: 0,
                n: 0,
                n_kappa: 0,
                planar: true,
                regular: true,
                tree_like: true,
            })
            .collect();
        for e in self.edge_ids() {
            let c = &mut components[comp_of[self.endpoints(e).0 .0]];
            c.e += 1;
            if self.edge(e).kind.is_generalised() {
                c.e_kappa += 1;
                if !self.is_bridge(e) {
                    c.tree_like = false;
                }
            } else {
                c.e0 += 1;
            }
        }
        for x in self.externals() {
            let c = &mut components[comp_of[self.port(x.port).vertex.0]];
            c.n += 1;
            c.n_kappa += usize::from(x.kappa);
        }
        for face in &faces.faces {
            let c = &mut components[comp_of[self.port(face.ports[0]).vertex.0]];
            c.f += 1;
            c.b += usize::from(face.broken);
        }
        for c in &mut components {
            c.chi = c.v as i64 - c.e as i64 + c.f as i64;
            let twice_g = 2 - c.chi;
            if twice_g < 0 || twice_g % 2 != 0 {
                return Err(GraphError::InvalidMap(format!(
                    "component {:?} has Euler characteristic {}, not of the form 2 - 2g",
                    c.vertices, c.chi
                )));
            }
            c.g = (twice_g / 2) as u32;
            c.planar = c.g == 0;
            c.regular = c.b == 1;
        }

        let sum = |f: fn(&ComponentTopology) -> usize| components.iter().map(f).sum::<usize>();
        let k = components.len();
        let chi: i64 = components.iter().map(|c| c.chi).sum();
        let g: u32 = components.iter().map(|c| c.g).sum();
        let b = sum(|c| c.b);
        Ok(TopologyReport {
            v: sum(|c| c.v),
            e: sum(|c| c.e),
            e0: sum(|c| c.e0),
            e_kappa: sum(|c| c.e_kappa),
            f: sum(|c| c.f),
            k,
            chi,
            g,
            b,
            planar: g == 0,
            regular: b == 1,
            tree_like: components.iter().all(|c| c.tree_like),
            components,
        })
    }

    /// Component index of every vertex, in the order of [`RibbonGraph::components`].
    pub fn component_index(&self) -> Vec<usize> {
        let mut out = vec![0; self.num_vertices()];
        for (ci, c) in self.components().iter().enumerate() {
            for v in c {
                out[v.0] = ci;
            }
        }
        out
    }

    /// Vertices reachable from `v`.
    pub fn component_of(&self, v: VertexId) -> Vec<VertexId> {
        self.components()
            .into_iter()
            .find(|c| c.contains(&v))
            .expect("every vertex lies in a component")
    }

    /// Edges with both ends in `vertices`.
    pub fn edges_within(&self, vertices: &[VertexId]) -> Vec<EdgeId> {
        self.edge_ids()
            .filter(|&e| {
                let (a, b) = self.endpoints(e);
                vertices.contains(&a) && vertices.contains(&b)
            })
            .collect()
    }
}
