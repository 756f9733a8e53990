//! Closed-form rosette phase read off the contour relations.
//!
//! `φ = φ_E + φ_m + φ_∩ + φ_⋉⋊ + φ_J` with
//!
//! * `φ_E = Σ_{k<j} p_k ∧ p_j` over externals in contour order,
//! * `φ_m = ½ Σ p_ℓ ∧ δp_ℓ + Σ_{ℓ ⊂ ℓ'} p_ℓ' ∧ δp_ℓ + ½ Σ_{ℓ⋉ℓ'} (p_ℓ ∧ δp_ℓ' + p_ℓ' ∧ δp_ℓ)`,
//! * `φ_∩ = Σ_{ℓ ⊃ k} p_ℓ ∧ p_k`,
//! * `φ_⋉⋊ = ½ Σ_{ℓ⋉ℓ'} p_ℓ ∧ p_ℓ'`,
//! * `φ_J = Σ_{ℓ<k} δp_ℓ ∧ p_k + Σ_{ℓ>k} p_k ∧ δp_ℓ + Σ_{ℓ<ℓ'} δp_ℓ ∧ δp_ℓ' + ½ Σ_{ℓ⋉ℓ'} δp_ℓ ∧ δp_ℓ'`.
//!
//! Tree lines take part through the single contour position at which the walk
//! descends through them; they can be nested inside a loop line but never
//! cross one.

use num_rational::Rational64;

use crate::algebra::{BilinearForm, LinearForm};
use crate::graph::{RibbonGraph, SpanningTree};

use super::{contour_order, OscillationError, PhaseForm, Sym};

pub fn rosette_factor(g: &RibbonGraph, t: &SpanningTree) -> Result<PhaseForm, OscillationError> {
    let order = contour_order(g, t)?;
    let one = Rational64::from_integer(1);
    let half = Rational64::new(1, 2);
    let mut phase = BilinearForm::new();

    let externals: Vec<_> = order.externals().collect();
    for (i, &k) in externals.iter().enumerate() {
        for &j in &externals[i + 1..] {
            phase.add_wedge(Sym::Ext(k), Sym::Ext(j), one);
        }
    }

    let lines: Vec<_> = order.lines().collect();
    for &(l, s) in &lines {
        phase.add_wedge(Sym::Line(l), Sym::Delta(l), half);
        for &k in &externals {
            let pos = order.external_position(k);
            if s.end < pos {
                phase.add_wedge(Sym::Delta(l), Sym::Ext(k), one);
            } else if pos < s.start {
                phase.add_wedge(Sym::Ext(k), Sym::Delta(l), one);
            } else {
                phase.add_wedge(Sym::Line(l), Sym::Ext(k), one);
            }
        }
    }

    for (i, &(a, sa)) in lines.iter().enumerate() {
        for &(b, sb) in &lines[i + 1..] {
            if sa.before(&sb) {
                phase.add_wedge(Sym::Delta(a), Sym::Delta(b), one);
            } else if sb.before(&sa) {
                phase.add_wedge(Sym::Delta(b), Sym::Delta(a), one);
            } else if sa.nested_in(&sb) {
                phase.add_wedge(Sym::Line(b), Sym::Delta(a), one);
            } else if sb.nested_in(&sa) {
                phase.add_wedge(Sym::Line(a), Sym::Delta(b), one);
            } else {
                let (l, m) = if sa.crosses_left(&sb) { (a, b) } else { (b, a) };
                debug_assert!(order.span(l).crosses_left(&order.span(m)));
                phase.add_wedge(Sym::Line(l), Sym::Delta(m), half);
                phase.add_wedge(Sym::Line(m), Sym::Delta(l), half);
                phase.add_wedge(Sym::Line(l), Sym::Line(m), half);
                phase.add_wedge(Sym::Delta(l), Sym::Delta(m), half);
            }
        }
    }

    Ok(PhaseForm {
        phase,
        constraint: global_constraint(g),
    })
}

/// `Σ_k p_k + Σ_ℓ δp_ℓ` over all externals and all lines.
pub(crate) fn global_constraint(g: &RibbonGraph) -> LinearForm<Sym> {
    g.external_ids()
        .map(Sym::Ext)
        .chain(g.edge_ids().map(Sym::Delta))
        .collect()
}
