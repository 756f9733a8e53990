//! JSON description of a ribbon graph.
//!
//! The on-disk layout is
//!
//! ```json
//! {
//!   "vertices": [{ "id": "v1", "ports": ["a", "b", "c", "d"] }],
//!   "edges": [{ "id": "l1", "ports": ["a", "b"], "kind": "simple" }],
//!   "externals": [{ "id": "e1", "port": "c", "kappa": false }]
//! }
//! ```
//!
//! Ports are listed counterclockwise. Generalised edges carry an
//! `"insertions"` count. Vertices default to the Moyal kind; the
//! `"insertion"` kind marks a bare two-valent κ-insertion and is only
//! accepted in graphs without Moyal vertices.

use serde::{Deserialize, Serialize};

use super::GraphError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub vertices: Vec<VertexDesc>,
    pub edges: Vec<EdgeDesc>,
    pub externals: Vec<ExternalDesc>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexKindDesc {
    #[default]
    Moyal,
    Insertion,
}

impl VertexKindDesc {
    fn is_moyal(&self) -> bool {
        matches!(self, VertexKindDesc::Moyal)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexDesc {
    pub id: String,
    #[serde(default, skip_serializing_if = "VertexKindDesc::is_moyal")]
    pub kind: VertexKindDesc,
    pub ports: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKindDesc {
    Simple,
    Generalised,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDesc {
    pub id: String,
    pub ports: [String; 2],
    pub kind: EdgeKindDesc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub insertions: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExternalDesc {
    pub id: String,
    pub port: String,
    #[serde(default)]
    pub kappa: bool,
}

impl GraphFile {
    pub fn from_json(text: &str) -> Result<Self, GraphError> {
        serde_json::from_str(text).map_err(|e| GraphError::Parse(e.to_string()))
    }

    /// Canonical text form: two-space indented JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("graph description serializes");
        out.push('\n');
        out
    }
}
