//! Ribbon-graph analysis for a scalar model on a degenerate Moyal plane.
//!
//! The crate covers graph topology (faces, genus, broken faces, bridges),
//! multiscale bookkeeping (scale attributions and the inclusion tree of
//! quasi-local subgraphs), the vertex-oscillation phase of a graph, power
//! counting with counterterm assignment, and numerical checks of the sliced
//! propagator.

pub mod algebra;
pub mod graph;
pub mod multiscale;
pub mod numerics;
pub mod oscillation;
pub mod powercount;

pub use graph::{
    Attachment, ComponentTopology, Edge, EdgeId, EdgeKind, ExtId, ExternalLeg, Face, Faces,
    GraphError, GraphFile, Port, PortId, RibbonGraph, SpanningTree, TopologyReport, TreePreference,
    Vertex, VertexId, VertexKind,
};
pub use multiscale::{
    gn_tree, is_admissible, quasi_local, GnNode, GnTree, MultiscaleError, ScaleAttribution,
};
pub use numerics::{ModelParams, NumericsError};
pub use oscillation::{
    contour_order, momentum_routing, phase_oracle, rosette_factor, tree_reduce, ContourOrder,
    MomentumRouting, OscillationError, PhaseForm, Sym,
};
pub use powercount::{
    classify_graph, classify_node, omega_kappa0, omega_phi6, BoundCase, Classification,
    Counterterm, DivergenceReport, NodeData, NodeReport, PowerCountError,
};
