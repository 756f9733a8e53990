//! Vertex oscillations of a graph after contracting a spanning tree.
//!
//! Every Moyal vertex contributes `Σ_{i<j} q_i ∧ q_j` over its incoming
//! momenta together with a conservation delta. Contracting the tree lines
//! leaves a single rosette whose phase is a bilinear form over the external
//! momenta `p_k` and the line variables `p_ℓ = q_ℓ1 - q_ℓ2`,
//! `δp_ℓ = q_ℓ1 + q_ℓ2`, where `ℓ1` is the end met first on the
//! counterclockwise contour of the tree.
//!
//! Two independent constructions are provided: [`rosette_factor`] writes the
//! phase down in closed form from the contour relations, [`tree_reduce`]
//! contracts tree lines one at a time. [`phase_oracle`] evaluates the
//! uncontracted vertex phases directly and is the reference for both.

mod check;
mod contour;
mod oracle;
mod reduce;
mod rosette;
mod routing;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{BilinearForm, LinearForm};
use crate::graph::{EdgeId, ExtId, GraphError, RibbonGraph, SpanningTree};

pub use check::{oracle_check, rooted_trees, Mismatch, OracleCheck};
pub use contour::{contour_order, ContourItem, ContourOrder, Span};
pub use oracle::{phase_oracle, random_assignment, Assignment};
pub use reduce::tree_reduce;
pub use rosette::rosette_factor;
pub use routing::{momentum_routing, MomentumRouting};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OscillationError {
    #[error("graph is disconnected; the rosette needs a connected graph")]
    Disconnected,
    #[error("graph has bare insertion vertices and no Moyal vertex; it carries no oscillation")]
    InsertionVertices,
    #[error("inconsistent momentum assignment: {0}")]
    InconsistentAssignment(String),
    #[error("no value assigned to free symbol {0}")]
    MissingSymbol(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Momentum symbols of the contracted rosette.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sym {
    /// External momentum `p_k`.
    Ext(ExtId),
    /// Line variable `p_ℓ`.
    Line(EdgeId),
    /// Sum variable `δp_ℓ`.
    Delta(EdgeId),
}

impl Sym {
    pub fn name(&self, g: &RibbonGraph) -> String {
        match *self {
            Sym::Ext(x) => format!("p_{}", g.external(x).id),
            Sym::Line(e) => format!("pl_{}", g.edge(e).id),
            Sym::Delta(e) => format!("dpl_{}", g.edge(e).id),
        }
    }
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sym::Ext(x) => write!(f, "p{}", x.0),
            Sym::Line(e) => write!(f, "pl{}", e.0),
            Sym::Delta(e) => write!(f, "dpl{}", e.0),
        }
    }
}

/// A rosette phase `φ` together with the argument of its global delta.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhaseForm {
    pub phase: BilinearForm<Sym>,
    pub constraint: LinearForm<Sym>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PhaseTerm {
    pub a: String,
    pub b: String,
    pub coefficient: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PhaseFormReport {
    pub terms: Vec<PhaseTerm>,
    pub constraint: Vec<(String, String)>,
}

impl PhaseForm {
    /// Symbol names and exact fraction strings, in symbol order.
    pub fn report(&self, g: &RibbonGraph) -> PhaseFormReport {
        PhaseFormReport {
            terms: self
                .phase
                .terms()
                .map(|((a, b), c)| PhaseTerm {
                    a: a.name(g),
                    b: b.name(g),
                    coefficient: c.to_string(),
                })
                .collect(),
            constraint: self
                .constraint
                .terms()
                .map(|(s, c)| (s.name(g), c.to_string()))
                .collect(),
        }
    }

    /// The phase with the routing substituted, a form in free symbols only.
    pub fn reduced(&self, routing: &MomentumRouting) -> BilinearForm<Sym> {
        self.phase.substitute(&|s| routing.express(s))
    }
}

pub(crate) fn check_rosette_input(
    g: &RibbonGraph,
    t: &SpanningTree,
) -> Result<(), OscillationError> {
    if g.is_insertion_chain() {
        return Err(OscillationError::InsertionVertices);
    }
    if !g.is_connected() || t.roots.len() != 1 {
        return Err(OscillationError::Disconnected);
    }
    Ok(())
}
