//! Direct accumulation of the vertex phases.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;

use crate::algebra::{qzero, QVec};
use crate::graph::{RibbonGraph, SpanningTree};

use super::{momentum_routing, MomentumRouting, OscillationError, PhaseForm, Sym};

pub type Assignment = BTreeMap<Sym, QVec>;

/// `Σ_v Σ_{i<j} q_i × q_j` over the uncontracted vertices, without the
/// common `θ/2`. The assignment must give every free symbol of the routing;
/// values for solved symbols are accepted only if they agree with it.
pub fn phase_oracle(
    g: &RibbonGraph,
    t: &SpanningTree,
    assignment: &Assignment,
) -> Result<BigRational, OscillationError> {
    let routing = momentum_routing(g, t)?;
    let lookup = |s: &Sym| assignment.get(s).cloned().unwrap_or_else(qzero);
    for s in &routing.free {
        if !assignment.contains_key(s) {
            return Err(OscillationError::MissingSymbol(s.name(g)));
        }
    }
    for (s, v) in assignment {
        if !routing.free.contains(s) && routing.express(s).evaluate(&lookup) != *v {
            return Err(OscillationError::InconsistentAssignment(format!(
                "{} is fixed by momentum conservation",
                s.name(g)
            )));
        }
    }
    let momenta: Vec<QVec> = routing
        .port_momenta
        .iter()
        .map(|q| q.evaluate(&lookup))
        .collect();

    let mut total = BigRational::zero();
    for v in g.vertices() {
        let mut sum = qzero();
        for p in &v.ports {
            sum[0] += &momenta[p.0][0];
            sum[1] += &momenta[p.0][1];
        }
        if !sum[0].is_zero() || !sum[1].is_zero() {
            return Err(OscillationError::InconsistentAssignment(format!(
                "momentum not conserved at vertex {}",
                v.id
            )));
        }
        for (i, a) in v.ports.iter().enumerate() {
            for b in &v.ports[i + 1..] {
                let (s, u) = (&momenta[a.0], &momenta[b.0]);
                total += &s[0] * &u[1] - &s[1] * &u[0];
            }
        }
    }
    Ok(total)
}

/// Small random fractions for every free symbol of the routing.
pub fn random_assignment(routing: &MomentumRouting, rng: &mut impl Rng) -> Assignment {
    let mut draw = || {
        BigRational::new(
            BigInt::from(rng.random_range(-9i64..=9)),
            BigInt::from(rng.random_range(1i64..=6)),
        )
    };
    routing
        .free
        .iter()
        .map(|&s| (s, [draw(), draw()]))
        .collect()
}

impl PhaseForm {
    /// Exact value on an assignment of free symbols, without the `θ/2`.
    pub fn evaluate(&self, routing: &MomentumRouting, assignment: &Assignment) -> BigRational {
        let lookup = |s: &Sym| assignment.get(s).cloned().unwrap_or_else(qzero);
        self.phase
            .evaluate(&|s: &Sym| routing.express(s).evaluate(&lookup))
    }

    /// The constraint evaluated on an assignment; zero when it holds.
    pub fn constraint_value(&self, routing: &MomentumRouting, assignment: &Assignment) -> QVec {
        let lookup = |s: &Sym| assignment.get(s).cloned().unwrap_or_else(qzero);
        self.constraint
            .evaluate(&|s: &Sym| routing.express(s).evaluate(&lookup))
    }
}
