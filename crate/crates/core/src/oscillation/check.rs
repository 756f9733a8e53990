//! Cross-check of both rosette constructions against the vertex phases.

use num_rational::Rational64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::graph::{RibbonGraph, SpanningTree};

use super::{
    momentum_routing, phase_oracle, random_assignment, rosette_factor, tree_reduce,
    OscillationError,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    /// `"closed-form"`, `"tree-reduce"` or `"symbolic"`.
    pub construction: String,
    pub root: String,
    pub tree_edges: Vec<String>,
    /// Free symbol and its value as two exact fractions.
    pub assignment: Vec<(String, String, String)>,
    pub expected: String,
    pub found: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleCheck {
    pub trees: usize,
    pub trials: usize,
    pub checks: usize,
    pub matches: usize,
    pub mismatches: Vec<Mismatch>,
}

impl OracleCheck {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Every rooted spanning tree of a connected graph, at most `max_trees`.
pub fn rooted_trees(
    g: &RibbonGraph,
    max_trees: usize,
) -> Result<Vec<SpanningTree>, OscillationError> {
    let mut out = Vec::new();
    for edges in g.all_spanning_edge_sets(max_trees) {
        for root in g.vertex_ids() {
            if out.len() == max_trees {
                return Ok(out);
            }
            out.push(SpanningTree::from_edges(g, root, edges.clone())?);
        }
    }
    Ok(out)
}

/// Compares [`rosette_factor`] and [`tree_reduce`] with [`phase_oracle`] on
/// `trials` random assignments per rooted tree, and with each other after
/// substituting the routing. `perturb` is added to the first coefficient of
/// the closed form and exists to exercise the failure path.
pub fn oracle_check(
    g: &RibbonGraph,
    trials: usize,
    max_trees: usize,
    seed: u64,
    perturb: Option<Rational64>,
) -> Result<OracleCheck, OscillationError> {
    let trees = rooted_trees(g, max_trees)?;
    if let Some(t) = trees.first() {
        super::check_rosette_input(g, t)?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = OracleCheck {
        trees: trees.len(),
        trials,
        checks: 0,
        matches: 0,
        mismatches: Vec::new(),
    };
    for t in &trees {
        let routing = momentum_routing(g, t)?;
        let mut closed = rosette_factor(g, t)?;
        if let Some(d) = perturb {
            let first = closed.phase.terms().next().map(|(k, _)| *k);
            if let Some((a, b)) = first {
                closed.phase.add_wedge(a, b, d);
            }
        }
        let reduced = tree_reduce(g, t)?;
        let describe = |construction: &str,
                        assignment: Vec<(String, String, String)>,
                        expected: String,
                        found: String| Mismatch {
            construction: construction.to_string(),
            root: g.vertex(t.root).id.clone(),
            tree_edges: t.tree_edges.iter().map(|&e| g.edge(e).id.clone()).collect(),
            assignment,
            expected,
            found,
        };
        for _ in 0..trials {
            let a = random_assignment(&routing, &mut rng);
            let expected = phase_oracle(g, t, &a)?;
            let shown = || {
                a.iter()
                    .map(|(s, v)| (s.name(g), v[0].to_string(), v[1].to_string()))
                    .collect::<Vec<_>>()
            };
            for (name, form) in [("closed-form", &closed), ("tree-reduce", &reduced)] {
                report.checks += 1;
                let found = form.evaluate(&routing, &a);
                if found == expected {
                    report.matches += 1;
                } else {
                    report.mismatches.push(describe(
                        name,
                        shown(),
                        expected.to_string(),
                        found.to_string(),
                    ));
                }
            }
        }
        report.checks += 1;
        let (x, y) = (closed.reduced(&routing), reduced.reduced(&routing));
        if x == y && closed.constraint == reduced.constraint {
            report.matches += 1;
        } else {
            report.mismatches.push(describe(
                "symbolic",
                Vec::new(),
                format!("{y}"),
                format!("{x}"),
            ));
        }
    }
    Ok(report)
}
