//! Growth of one-loop two-point amplitudes with the slice index.
//!
//! The amplitude of a single-vertex tadpole at slice `i` is
//!
//! ```text
//! A_i = ∫ d²p d²p̊ d²q̊ d²p₁ d²p₂ ρ(p₁) ρ(p₂) δ(p₁ + p₂ + p̊ + q̊) Ĉ^i(p, p̊; p, q̊) e^{iφ}
//! ```
//!
//! with `ρ(k) = e^{-k²/s²}/(πs²)` a Gaussian smearing of the external
//! momenta and `φ` the rosette phase. The delta fixes `p₂`; the commutative
//! `p` and the remaining leg `p₁` enter through Gaussians and are integrated
//! in closed form. What is left, `α` and the short and long variables
//! `u = p̊ + q̊`, `w = p̊ - q̊`, is sampled: `α` uniformly in `ln α` (slice 0:
//! exponentially above 1), `u` and `w` from the Gaussians of the propagator
//! widened by the smearing.
//!
//! Without smearing, at zero external momenta, the phase of a loop arching
//! over a leg vanishes and both tadpoles grow alike.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use super::propagator::{integrand, propagator_slice, slice_range};
use super::{ModelParams, NumericsError, V2};
use crate::graph::{EdgeId, RibbonGraph, TreePreference, VertexId};
use crate::oscillation::{momentum_routing, rosette_factor, Sym};

/// Width `s` of the external smearing.
pub const DEFAULT_SMEARING: f64 = 4.0;

const BATCH: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScanVariant {
    /// Real part of the oscillating integrand.
    Oscillating,
    /// Phase dropped.
    Absolute,
    /// A single slice at fixed momenta, no integration.
    Fixed,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScanPoint {
    pub i: u32,
    pub value: f64,
    pub stderr: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SlopeFit {
    pub slope: f64,
    pub stderr: f64,
    pub ci95: (f64, f64),
    pub from: u32,
    pub to: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VariantScan {
    pub variant: ScanVariant,
    pub points: Vec<ScanPoint>,
    pub fit: SlopeFit,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanReport {
    pub samples: usize,
    pub seed: u64,
    pub scans: Vec<VariantScan>,
}

impl ScanReport {
    pub fn variant(&self, v: ScanVariant) -> Option<&VariantScan> {
        self.scans.iter().find(|s| s.variant == v)
    }
}

/// Least-squares slope of `log_M value` against `i` over `from..=to`,
/// weighted by the standard errors when they are all positive.
pub fn fit_slope(points: &[ScanPoint], big_m: f64, from: u32, to: u32) -> SlopeFit {
    let ln_m = big_m.ln();
    let used: Vec<(f64, f64, f64)> = points
        .iter()
        .filter(|p| (from..=to).contains(&p.i) && p.value > 0.0)
        .map(|p| {
            let sigma = p.stderr / (p.value * ln_m);
            (f64::from(p.i), p.value.ln() / ln_m, sigma)
        })
        .collect();
    let n = used.len() as f64;
    let weighted = used.iter().all(|u| u.2 > 0.0);
    let w = |u: &(f64, f64, f64)| if weighted { 1.0 / (u.2 * u.2) } else { 1.0 };
    let s: f64 = used.iter().map(w).sum();
    let sx: f64 = used.iter().map(|u| w(u) * u.0).sum();
    let sy: f64 = used.iter().map(|u| w(u) * u.1).sum();
    let sxx: f64 = used.iter().map(|u| w(u) * u.0 * u.0).sum();
    let sxy: f64 = used.iter().map(|u| w(u) * u.0 * u.1).sum();
    let delta = s * sxx - sx * sx;
    let slope = if delta > 0.0 {
        (s * sxy - sx * sy) / delta
    } else {
        f64::NAN
    };
    let stderr = if delta.is_nan() || delta <= 0.0 {
        f64::NAN
    } else if weighted {
        (s / delta).sqrt()
    } else if n > 2.0 {
        let icpt = (sy - slope * sx) / s;
        let rss: f64 = used
            .iter()
            .map(|u| (u.1 - icpt - slope * u.0).powi(2))
            .sum();
        (rss / (n - 2.0) * s / delta).sqrt()
    } else {
        0.0
    };
    SlopeFit {
        slope,
        stderr,
        ci95: (slope - 1.96 * stderr, slope + 1.96 * stderr),
        from,
        to,
    }
}

/// Phase coefficients of a tadpole in its free symbols `p₁`, `w`, `u`:
/// `φ = (θ/2)(c_w p₁×w + c_u p₁×u + c_wu w×u)`.
#[derive(Clone, Copy, Debug)]
struct TadpolePhase {
    c_w: f64,
    c_u: f64,
    c_wu: f64,
}

fn tadpole_phase(g: &RibbonGraph) -> Result<TadpolePhase, NumericsError> {
    let unsupported = |m: &str| Err(NumericsError::UnsupportedGraph(m.into()));
    if g.num_vertices() != 1 || g.num_moyal_vertices() != 1 {
        return unsupported("the scan needs a single Moyal vertex");
    }
    if g.num_edges() != 1 || g.num_externals() != 2 {
        return unsupported("the scan needs one loop line and two external legs");
    }
    let t = g.spanning_tree(VertexId(0), &TreePreference::Default)?;
    let routing = momentum_routing(g, &t)?;
    let reduced = rosette_factor(g, &t)?.reduced(&routing);
    let line = EdgeId(0);
    let p1 = routing
        .free
        .iter()
        .find(|s| matches!(s, Sym::Ext(_)))
        .copied()
        .expect("one of two legs stays free");
    let (w, u) = (Sym::Line(line), Sym::Delta(line));
    let c = |a: &Sym, b: &Sym| {
        let r = reduced.coefficient(a, b);
        *r.numer() as f64 / *r.denom() as f64
    };
    Ok(TadpolePhase {
        c_w: c(&p1, &w),
        c_u: c(&p1, &u),
        c_wu: c(&w, &u),
    })
}

fn cross(a: V2, b: V2) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

fn normal2(rng: &mut impl Rng, sigma: f64) -> V2 {
    let x: f64 = rng.sample(StandardNormal);
    let y: f64 = rng.sample(StandardNormal);
    [sigma * x, sigma * y]
}

/// One sample of `A_i`, drawn from `rng`.
fn tadpole_sample(
    params: &ModelParams,
    i: u32,
    phase: Option<&TadpolePhase>,
    smear: f64,
    rng: &mut impl Rng,
) -> f64 {
    use std::f64::consts::PI;
    let wt = params.omega_tilde();
    let (alpha, jac) = if i == 0 {
        let rate = params.mass * params.mass + 2.0 * wt;
        let e: f64 = rng.sample(rand_distr::Exp1);
        (1.0 + e / rate, e.exp() / rate)
    } else {
        let (lo, hi) = slice_range(params, i);
        let (l0, l1) = (lo.ln(), hi.ln());
        let alpha = rng.random_range(l0..l1).exp();
        (alpha, (l1 - l0) * alpha)
    };
    // propagator at zero short and long variables times ∫d²p e^{-αp²}
    let base = integrand(params, alpha, 0.0, 0.0, 0.0) * (PI / alpha) * 0.25 * jac;
    let x = wt * alpha;
    let a = 0.25 * wt / x.tanh();
    let b = 0.25 * wt * x.tanh();
    let smear2 = smear * smear;
    // ∫d²p₁ ρ(p₁) ρ(p₁ + u) = e^{-u²/(2s²)}/(2πs²)
    let norm = 1.0 / (2.0 * PI * smear2);
    let a_e = a + 0.5 / smear2;
    let u = normal2(rng, (0.5 / a_e).sqrt());
    let Some(ph) = phase else {
        return base * norm * (PI / a_e) * (PI / b);
    };
    let th = params.theta;
    let damp = th * th * smear2 / 32.0;
    let b_e = b + damp * ph.c_w * ph.c_w;
    let w = normal2(rng, (0.5 / b_e).sqrt());
    let v = [ph.c_w * w[0] + ph.c_u * u[0], ph.c_w * w[1] + ph.c_u * u[1]];
    let v2 = v[0] * v[0] + v[1] * v[1];
    let w2 = w[0] * w[0] + w[1] * w[1];
    let gauss = (-damp * (v2 - ph.c_w * ph.c_w * w2)).exp();
    let half_u = [0.5 * u[0], 0.5 * u[1]];
    let phi = 0.5 * th * (ph.c_wu * cross(w, u) - cross(half_u, v));
    base * norm * (PI / a_e) * (PI / b_e) * gauss * phi.cos()
}

/// Pairwise sum, so the result does not depend on thread scheduling.
fn pairwise(xs: &[(f64, f64)]) -> (f64, f64) {
    match xs.len() {
        0 => (0.0, 0.0),
        1 => xs[0],
        n => {
            let (l, r) = xs.split_at(n / 2);
            let (a, b) = (pairwise(l), pairwise(r));
            (a.0 + b.0, a.1 + b.1)
        }
    }
}

fn mc_slice(
    params: &ModelParams,
    i: u32,
    phase: Option<&TadpolePhase>,
    smear: f64,
    samples: usize,
    seed: u64,
) -> ScanPoint {
    let batches = samples.div_ceil(BATCH);
    let sums: Vec<(f64, f64)> = (0..batches)
        .into_par_iter()
        .map(|batch| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream((u64::from(i) << 40) | batch as u64);
            let len = BATCH.min(samples - batch * BATCH);
            let mut xs = Vec::with_capacity(len);
            for _ in 0..len {
                let x = tadpole_sample(params, i, phase, smear, &mut rng);
                xs.push((x, x * x));
            }
            pairwise(&xs)
        })
        .collect();
    let (s, s2) = pairwise(&sums);
    let n = samples as f64;
    let mean = s / n;
    let var = (s2 / n - mean * mean).max(0.0) * n / (n - 1.0).max(1.0);
    ScanPoint {
        i,
        value: mean,
        stderr: (var / n).sqrt(),
    }
}

/// Monte Carlo scan of a single-vertex tadpole over `slices`, with and
/// without the phase, and slopes fitted over `fit_from..=fit_to`.
#[allow(clippy::too_many_arguments)]
pub fn scaling_scan(
    params: &ModelParams,
    g: &RibbonGraph,
    slices: &[u32],
    samples: usize,
    seed: u64,
    smear: f64,
    fit_from: u32,
    fit_to: u32,
) -> Result<ScanReport, NumericsError> {
    params.validate()?;
    if samples < 2 {
        return Err(NumericsError::InvalidParams(
            "at least two samples per slice".into(),
        ));
    }
    let phase = tadpole_phase(g)?;
    let mut scans = Vec::new();
    for (variant, ph) in [
        (ScanVariant::Oscillating, Some(&phase)),
        (ScanVariant::Absolute, None),
    ] {
        let points: Vec<ScanPoint> = slices
            .iter()
            .map(|&i| mc_slice(params, i, ph, smear, samples, seed))
            .collect();
        for p in &points {
            let in_fit = (fit_from..=fit_to).contains(&p.i);
            if in_fit && (p.value.is_nan() || p.value <= 0.0 || p.stderr > 0.25 * p.value) {
                return Err(NumericsError::MCVarianceTooHigh {
                    i: p.i,
                    value: p.value,
                    stderr: p.stderr,
                });
            }
        }
        let fit = fit_slope(&points, params.big_m, fit_from, fit_to);
        scans.push(VariantScan {
            variant,
            points,
            fit,
        });
    }
    Ok(ScanReport {
        samples,
        seed,
        scans,
    })
}

/// `Ĉ^i(p, 0; p, 0)` at fixed `p` over `slices`: the line of a chain of
/// insertions, which carries no loop integral.
pub fn chain_scan(
    params: &ModelParams,
    p: V2,
    slices: &[u32],
    fit_from: u32,
    fit_to: u32,
) -> Result<VariantScan, NumericsError> {
    let zero = [0.0; 2];
    let points = slices
        .iter()
        .map(|&i| {
            Ok(ScanPoint {
                i,
                value: propagator_slice(params, i, p, zero, zero)?,
                stderr: 0.0,
            })
        })
        .collect::<Result<Vec<_>, NumericsError>>()?;
    let fit = fit_slope(&points, params.big_m, fit_from, fit_to);
    Ok(VariantScan {
        variant: ScanVariant::Fixed,
        points,
        fit,
    })
}
