//! Tree lines contracted one at a time.
//!
//! The state is a rosette: a sequence of open ports and already contracted
//! tree lines, a phase over raw port momenta and tree sums `δp_l`, and the
//! argument of its delta. Joining the vertex `q1 q2 q3 q4` through the tree
//! line `l0 = (p, q1)` substitutes `p = Q + δp_l0` with `Q = q2 + q3 + q4`
//! everywhere and adds the joined vertex's own `Σ_{2≤a<b≤4} q_a ∧ q_b`; its
//! `q1 ∧ Q` term vanishes because `q1 = -Q`. The ports `q2 q3 q4` take the
//! place of `p` in the sequence, after the contracted line.
//!
//! The result is exact, not only modulo the global delta. Rewriting it into a
//! sum over ordered pairs plus `Σ_{i<l} p_i ∧ δp_l` alone is not: externals
//! after a tree line pick up `δp_l ∧ p_k` terms as well.
//!
//! Once every tree line is gone the two ends of each loop line are rewritten
//! as `½(δp_ℓ ± p_ℓ)`.

use num_rational::Rational64;

use crate::algebra::{BilinearForm, LinearForm};
use crate::graph::{Attachment, EdgeId, PortId, RibbonGraph, SpanningTree};

use super::{check_rosette_input, OscillationError, PhaseForm, Sym};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Raw {
    Port(PortId),
    TreeSum(EdgeId),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Slot {
    Open(PortId),
    Tree(EdgeId),
}

pub fn tree_reduce(g: &RibbonGraph, t: &SpanningTree) -> Result<PhaseForm, OscillationError> {
    check_rosette_input(g, t)?;
    let one = Rational64::from_integer(1);
    let minus = Rational64::from_integer(-1);

    let root_ports = g.ports_after(t.root, None);
    let mut seq: Vec<Slot> = root_ports.iter().map(|&p| Slot::Open(p)).collect();
    let mut phase: BilinearForm<Raw> = BilinearForm::new();
    for (i, &a) in root_ports.iter().enumerate() {
        for &b in &root_ports[i + 1..] {
            phase.add_wedge(Raw::Port(a), Raw::Port(b), one);
        }
    }
    let mut delta: LinearForm<Raw> = root_ports.iter().map(|&p| Raw::Port(p)).collect();
    let mut contracted = vec![false; g.num_vertices()];
    contracted[t.root.0] = true;

    while let Some((i0, p, l0)) = next_contraction(g, t, &seq, &contracted) {
        let q1 = g.alpha(p);
        let w = g.port(q1).vertex;
        contracted[w.0] = true;
        let qs = g.ports_after(w, Some(q1));
        let big_q: LinearForm<Raw> = qs.iter().map(|&q| Raw::Port(q)).collect();
        let dp0 = LinearForm::symbol(Raw::TreeSum(l0));

        // p = Q + δp_l0 on the support of the joined vertex's delta.
        let mut p_value = big_q.clone();
        p_value.add_scaled(&dp0, one);
        let subst = |r: &Raw| {
            if *r == Raw::Port(p) {
                p_value.clone()
            } else {
                LinearForm::symbol(*r)
            }
        };
        phase = phase.substitute(&subst);
        for (a, &qa) in qs.iter().enumerate() {
            for &qb in &qs[a + 1..] {
                phase.add_wedge(Raw::Port(qa), Raw::Port(qb), one);
            }
        }
        delta = delta.substitute(&subst);

        let mut replacement = vec![Slot::Tree(l0)];
        replacement.extend(qs.iter().map(|&q| Slot::Open(q)));
        seq.splice(i0..=i0, replacement);
    }

    // Loop ends: the end met first is ℓ1.
    let mut seen_loop = std::collections::BTreeSet::new();
    let mut port_value: std::collections::BTreeMap<PortId, LinearForm<Sym>> = Default::default();
    let half = Rational64::new(1, 2);
    for slot in &seq {
        let Slot::Open(q) = *slot else { continue };
        let value = match g.port(q).attachment {
            Attachment::External(x) => LinearForm::symbol(Sym::Ext(x)),
            Attachment::Edge(e, _) => {
                let sign = if seen_loop.insert(e) { one } else { minus };
                let mut v = LinearForm::new();
                v.add_term(Sym::Delta(e), half);
                v.add_term(Sym::Line(e), half * sign);
                v
            }
        };
        port_value.insert(q, value);
    }
    let lower = |r: &Raw| match *r {
        Raw::Port(q) => port_value[&q].clone(),
        Raw::TreeSum(l) => LinearForm::symbol(Sym::Delta(l)),
    };
    Ok(PhaseForm {
        phase: phase.substitute(&lower),
        constraint: delta.substitute(&lower),
    })
}

fn next_contraction(
    g: &RibbonGraph,
    t: &SpanningTree,
    seq: &[Slot],
    contracted: &[bool],
) -> Option<(usize, PortId, EdgeId)> {
    seq.iter().enumerate().find_map(|(i, slot)| {
        let Slot::Open(p) = *slot else { return None };
        match g.port(p).attachment {
            Attachment::Edge(e, _)
                if t.is_tree_edge(e) && !contracted[g.port(g.alpha(p)).vertex.0] =>
            {
                Some((i, p, e))
            }
            _ => None,
        }
    })
}
