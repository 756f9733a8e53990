//! Gaussian bounds on single slices and on generalised lines.
//!
//! On slice `i` the integrand obeys `α ≥ M^{-2i}`, `(Ω̃/4)coth(Ω̃α) ≥
//! M^{2i}/(4M²)` (and `≥ Ω̃/4` on slice 0) and `(Ω̃/4)tanh(Ω̃α) ≥
//! (Ω̃ tanh Ω̃/4) M^{-2i}`. Hence
//!
//! ```text
//! Ĉ^i(p, p̊; p, q̊) ≤ K_i e^{-c_p M^{-2i} p²} e^{-c_s M^{2i} (p̊+q̊)² - c_l M^{-2i} (p̊-q̊)²}
//! ```
//!
//! with `K_i = Ĉ^i(0, 0; 0, 0)`. Unit constants in the exponents do not
//! bound the integrand: the short-variable decay on slice `i` is only
//! `M^{2i}/(4M²)`.

use rayon::prelude::*;
use serde::Serialize;

use super::propagator::propagator_slice;
use super::{add, norm2, sub, ModelParams, NumericsError, V2};

/// Exponent constants of the slice bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundConstants {
    pub c_p: f64,
    pub c_short: f64,
    pub c_long: f64,
}

impl BoundConstants {
    pub fn new(params: &ModelParams) -> Self {
        let wt = params.omega_tilde();
        let m2 = params.big_m * params.big_m;
        BoundConstants {
            c_p: 1.0,
            c_short: (0.25 / m2).min(0.25 * wt),
            c_long: 0.25 * wt * wt.tanh(),
        }
    }

    /// `e^{-c_p M^{-2i} p² - c_s M^{2i} (p̊+q̊)² - c_l M^{-2i} (p̊-q̊)²}`.
    pub fn factor(&self, params: &ModelParams, i: u32, p: V2, pr: V2, qr: V2) -> f64 {
        let up = params.big_m.powi(2 * i as i32);
        let down = 1.0 / up;
        (-self.c_p * down * norm2(p)
            - self.c_short * up * norm2(add(pr, qr))
            - self.c_long * down * norm2(sub(pr, qr)))
        .exp()
    }
}

pub type GridPoint = [V2; 3];

/// The default grid: `p = (a, 0)`, `p̊ = (b, 0)`, `q̊ = (0, c)` with
/// `a, b, c ∈ {-4, -2, 0, 2, 4}`.
pub fn default_grid() -> Vec<GridPoint> {
    let values = [-4.0, -2.0, 0.0, 2.0, 4.0];
    let mut out = Vec::with_capacity(125);
    for &a in &values {
        for &b in &values {
            for &c in &values {
                out.push([[a, 0.0], [b, 0.0], [0.0, c]]);
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SliceEvaluation {
    pub i: u32,
    pub p: V2,
    pub pr: V2,
    pub qr: V2,
    pub value: f64,
    /// `K` times the Gaussian factor.
    pub bound: f64,
    pub k: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SliceBoundReport {
    pub constants: BoundConstants,
    /// `(i, K_i)`: the largest ratio value/factor on each slice.
    pub per_slice: Vec<(u32, f64)>,
    /// `K = max_i K_i`.
    pub k: f64,
    /// Largest value/bound over the grid; at most 1 by construction.
    pub max_ratio: f64,
    /// `(max - min)/max` of `K_i` over the slices `2..=6` present.
    pub variation: f64,
    pub evaluations: Vec<SliceEvaluation>,
}

/// Fits `K` over `slices` and `grid`. Fails when `K_i` more than doubles
/// between consecutive slices from slice 2 on; slices 0 and 1 are cut off by
/// the mass and by `1/sinh` and legitimately sit lower.
pub fn verify_slice_bound(
    params: &ModelParams,
    slices: &[u32],
    grid: &[GridPoint],
) -> Result<SliceBoundReport, NumericsError> {
    params.validate()?;
    let constants = BoundConstants::new(params);
    let jobs: Vec<(u32, GridPoint)> = slices
        .iter()
        .flat_map(|&i| grid.iter().map(move |&pt| (i, pt)))
        .collect();
    let raw: Vec<(u32, GridPoint, f64, f64)> = jobs
        .par_iter()
        .map(|&(i, [p, pr, qr])| {
            let value = propagator_slice(params, i, p, pr, qr)?;
            let factor = constants.factor(params, i, p, pr, qr);
            Ok((i, [p, pr, qr], value, factor))
        })
        .collect::<Result<_, NumericsError>>()?;

    let mut per_slice: Vec<(u32, f64)> = Vec::new();
    for &i in slices {
        let k_i = raw
            .iter()
            .filter(|r| r.0 == i && r.3 > 0.0)
            .map(|r| r.2 / r.3)
            .fold(0.0, f64::max);
        if !k_i.is_finite() {
            return Err(NumericsError::UnboundedRatio {
                i,
                k: k_i,
                prev_i: i,
                prev: k_i,
            });
        }
        if let Some(&(prev_i, prev)) = per_slice.last() {
            if prev_i >= 2 && k_i > 2.0 * prev {
                return Err(NumericsError::UnboundedRatio {
                    i,
                    k: k_i,
                    prev_i,
                    prev,
                });
            }
        }
        per_slice.push((i, k_i));
    }
    let k = per_slice.iter().map(|s| s.1).fold(0.0, f64::max);
    let evaluations: Vec<SliceEvaluation> = raw
        .iter()
        .map(|&(i, [p, pr, qr], value, factor)| SliceEvaluation {
            i,
            p,
            pr,
            qr,
            value,
            bound: k * factor,
            k,
        })
        .collect();
    let max_ratio = evaluations
        .iter()
        .filter(|e| e.bound > 0.0)
        .map(|e| e.value / e.bound)
        .fold(0.0, f64::max);
    let stable: Vec<f64> = per_slice
        .iter()
        .filter(|s| (2..=6).contains(&s.0))
        .map(|s| s.1)
        .collect();
    let variation = if stable.is_empty() {
        0.0
    } else {
        let hi = stable.iter().copied().fold(f64::MIN, f64::max);
        let lo = stable.iter().copied().fold(f64::MAX, f64::min);
        (hi - lo) / hi
    };
    Ok(SliceBoundReport {
        constants,
        per_slice,
        k,
        max_ratio,
        variation,
        evaluations,
    })
}

/// Bound on a generalised line with slices `segments`:
/// `κ^{2n} K^{n+1} e^{-c_p M^{-2 i_m} p²} e^{-c_s (M^{2 i_1} a² + M^{2 i_2} b²)}`,
/// where `i_m` is the smallest slice, `i_1 ≥ i_2` are the end slices and `a`
/// is the end momentum sitting at `i_1`. Only the segment at `i_m` is kept in
/// the commutative factor; the others are bounded by 1.
pub fn generalised_line_bound(
    params: &ModelParams,
    k: f64,
    segments: &[u32],
    p: V2,
    pr: V2,
    qr: V2,
) -> f64 {
    let c = BoundConstants::new(params);
    let n = segments.len() - 1;
    let i_m = *segments.iter().min().expect("at least two segments");
    let (first, last) = (segments[0], segments[n]);
    let (i1, a, i2, b) = if first >= last {
        (first, pr, last, qr)
    } else {
        (last, qr, first, pr)
    };
    let m2 = params.big_m * params.big_m;
    let exponent = -c.c_p * m2.powi(-(i_m as i32)) * norm2(p)
        - c.c_short * (m2.powi(i1 as i32) * norm2(a) + m2.powi(i2 as i32) * norm2(b));
    params.kappa.powi(2 * n as i32) * k.powi(n as i32 + 1) * exponent.exp()
}
