//! Sliced propagators of the harmonic model and numerical checks of their
//! bounds.
//!
//! Momenta are plane vectors `[f64; 2]`. `p` is the commutative momentum of
//! a line, `p̊` and `q̊` are the noncommutative momenta at its two ends. A
//! line at slice `i` has Schwinger parameter `α ∈ [M^{-2i}, M^{-2(i-1)}]`,
//! slice 0 takes `α ∈ [1, ∞)`.

mod bounds;
mod propagator;
mod quadrature;
mod scan;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::GraphError;
use crate::oscillation::OscillationError;

pub use bounds::{
    default_grid, generalised_line_bound, verify_slice_bound, BoundConstants, GridPoint,
    SliceBoundReport, SliceEvaluation,
};
pub use propagator::{generalised_line_value, propagator_slice, slice_range};
pub use quadrature::{integrate, Quadrature};
pub use scan::{
    chain_scan, fit_slope, scaling_scan, ScanPoint, ScanReport, ScanVariant, SlopeFit, VariantScan,
    DEFAULT_SMEARING,
};

pub type V2 = [f64; 2];

pub fn norm2(v: V2) -> f64 {
    v[0] * v[0] + v[1] * v[1]
}

pub fn add(a: V2, b: V2) -> V2 {
    [a[0] + b[0], a[1] + b[1]]
}

pub fn sub(a: V2, b: V2) -> V2 {
    [a[0] - b[0], a[1] - b[1]]
}

#[derive(Debug, Error)]
pub enum NumericsError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("quadrature did not reach relative accuracy {target:e} (estimate {estimate:e} after {intervals} intervals)")]
    QuadratureFailure {
        target: f64,
        estimate: f64,
        intervals: usize,
    },
    #[error("bound ratio grows with the slice: K_{i} = {k:e} after K_{prev_i} = {prev:e}")]
    UnboundedRatio {
        i: u32,
        k: f64,
        prev_i: u32,
        prev: f64,
    },
    #[error("Monte Carlo variance too high at slice {i}: value {value:e} ± {stderr:e}")]
    MCVarianceTooHigh { i: u32, value: f64, stderr: f64 },
    #[error("unsupported graph for this scan: {0}")]
    UnsupportedGraph(String),
    #[error(transparent)]
    Oscillation(#[from] OscillationError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Couplings and scales of the model.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub theta: f64,
    pub omega: f64,
    pub mass: f64,
    pub kappa: f64,
    pub lambda: f64,
    /// Slicing ratio `M > 1`.
    pub big_m: f64,
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams {
            theta: 1.0,
            omega: 1.0,
            mass: 1.0,
            kappa: 1.0,
            lambda: 1.0,
            big_m: 2.0,
        }
    }
}

impl ModelParams {
    /// `Ω̃ = 2Ω/θ`.
    pub fn omega_tilde(&self) -> f64 {
        2.0 * self.omega / self.theta
    }

    pub fn validate(&self) -> Result<(), NumericsError> {
        let bad = |m: &str| Err(NumericsError::InvalidParams(m.into()));
        if !(self.theta > 0.0 && self.theta.is_finite()) {
            return bad("theta must be positive");
        }
        if !(self.omega > 0.0 && self.omega.is_finite()) {
            return bad("omega must be positive");
        }
        if !(self.mass >= 0.0 && self.mass.is_finite()) {
            return bad("mass must be nonnegative");
        }
        if !(self.big_m > 1.0 && self.big_m.is_finite()) {
            return bad("M must exceed 1");
        }
        if !self.kappa.is_finite() || !self.lambda.is_finite() {
            return bad("couplings must be finite");
        }
        Ok(())
    }
}
