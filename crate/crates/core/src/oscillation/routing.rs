//! Momentum routing along a rooted tree.
//!
//! The vertex deltas are traded for branch deltas: the momenta entering the
//! branch `b(l)` below a tree line sum to zero, which fixes the momentum at
//! the lower end of `l`. Loop ends stay free through `p_ℓ` and `δp_ℓ`, every
//! line keeps its `δp_ℓ`, and the root delta becomes the global constraint,
//! solved for the last external momentum (or the last `δp` when there are no
//! externals).

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Rational64;

use crate::algebra::LinearForm;
use crate::graph::{EdgeId, PortId, RibbonGraph, SpanningTree};

use super::{contour_order, OscillationError, Sym};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentumRouting {
    /// Every port's momentum in free symbols.
    pub port_momenta: Vec<LinearForm<Sym>>,
    /// `p_l` of each tree line in free symbols.
    pub tree_momenta: BTreeMap<EdgeId, LinearForm<Sym>>,
    /// The symbol eliminated by the global constraint and its value.
    pub solved: (Sym, LinearForm<Sym>),
    pub free: BTreeSet<Sym>,
}

impl MomentumRouting {
    /// A symbol in free symbols.
    pub fn express(&self, s: &Sym) -> LinearForm<Sym> {
        if *s == self.solved.0 {
            return self.solved.1.clone();
        }
        match s {
            Sym::Line(e) if self.tree_momenta.contains_key(e) => self.tree_momenta[e].clone(),
            _ => LinearForm::symbol(*s),
        }
    }

    pub fn port(&self, p: PortId) -> &LinearForm<Sym> {
        &self.port_momenta[p.0]
    }
}

pub fn momentum_routing(
    g: &RibbonGraph,
    t: &SpanningTree,
) -> Result<MomentumRouting, OscillationError> {
    let order = contour_order(g, t)?;
    let one = Rational64::from_integer(1);
    let half = Rational64::new(1, 2);

    let solved_sym = match g.external_ids().last() {
        Some(x) => Sym::Ext(x),
        None => Sym::Delta(g.edge_ids().last().ok_or(OscillationError::Disconnected)?),
    };
    let mut solved_value: LinearForm<Sym> = g
        .external_ids()
        .map(Sym::Ext)
        .chain(g.edge_ids().map(Sym::Delta))
        .filter(|s| *s != solved_sym)
        .collect();
    solved_value = solved_value.scaled(-one);
    let resolve = |s: Sym| -> LinearForm<Sym> {
        if s == solved_sym {
            solved_value.clone()
        } else {
            LinearForm::symbol(s)
        }
    };

    let mut port_momenta: Vec<Option<LinearForm<Sym>>> = vec![None; g.ports().len()];
    for x in g.external_ids() {
        port_momenta[g.external(x).port.0] = Some(resolve(Sym::Ext(x)));
    }
    for &e in &t.loop_edges {
        let (first, second) = order.ends(e);
        let dp = resolve(Sym::Delta(e));
        let pl = LinearForm::symbol(Sym::Line(e));
        port_momenta[first.0] = Some((&dp + &pl).scaled(half));
        port_momenta[second.0] = Some((&dp - &pl).scaled(half));
    }

    // Deepest tree lines first so that every branch is already resolved.
    let mut tree: Vec<EdgeId> = t.tree_edges.iter().copied().collect();
    tree.sort_by_key(|&e| std::cmp::Reverse(t.depth[t.child_of(g, e).0]));
    let mut tree_momenta = BTreeMap::new();
    for l in tree {
        let branch = t.branch(g, l);
        let (parent_port, child_port) = order.ends(l);
        let mut inflow = LinearForm::new();
        for &v in &branch {
            for &p in &g.vertex(v).ports {
                if p == child_port {
                    continue;
                }
                let q = port_momenta[p.0]
                    .as_ref()
                    .expect("ports below a tree line are routed first");
                inflow.add_scaled(q, one);
            }
        }
        let q_child = inflow.scaled(-one);
        let dp = resolve(Sym::Delta(l));
        let q_parent = &dp - &q_child;
        tree_momenta.insert(l, &q_parent - &q_child);
        port_momenta[child_port.0] = Some(q_child);
        port_momenta[parent_port.0] = Some(q_parent);
    }

    let port_momenta: Vec<LinearForm<Sym>> = port_momenta
        .into_iter()
        .map(|q| q.expect("every port is routed"))
        .collect();
    let free = g
        .external_ids()
        .map(Sym::Ext)
        .chain(t.loop_edges.iter().map(|&e| Sym::Line(e)))
        .chain(g.edge_ids().map(Sym::Delta))
        .filter(|s| *s != solved_sym)
        .collect();
    debug_assert!(branch_sums_vanish(g, &port_momenta));
    Ok(MomentumRouting {
        port_momenta,
        tree_momenta,
        solved: (solved_sym, solved_value),
        free,
    })
}

/// Momentum conservation at every vertex, identically in the free symbols.
pub(crate) fn branch_sums_vanish(g: &RibbonGraph, port_momenta: &[LinearForm<Sym>]) -> bool {
    g.vertices().iter().all(|v| {
        let mut sum = LinearForm::new();
        for p in &v.ports {
            sum.add_scaled(&port_momenta[p.0], Rational64::from_integer(1));
        }
        sum.is_zero()
    })
}
