//! The sliced propagator `Ĉ^i(p, p̊; p, q̊)` and generalised-line products.

use super::quadrature::integrate;
use super::{add, norm2, sub, ModelParams, NumericsError, V2};

/// Relative accuracy of every slice integral.
pub const SLICE_ACCURACY: f64 = 1e-8;

/// Schwinger-parameter range of slice `i`; slice 0 is unbounded above.
pub fn slice_range(params: &ModelParams, i: u32) -> (f64, f64) {
    if i == 0 {
        (1.0, f64::INFINITY)
    } else {
        let m2 = params.big_m * params.big_m;
        (m2.powi(-(i as i32)), m2.powi(1 - i as i32))
    }
}

/// Integrand in `α` for squared commutative momentum `p2`, squared short
/// variable `s2 = (p̊ + q̊)²` and squared long variable `l2 = (p̊ - q̊)²`.
pub(crate) fn integrand(params: &ModelParams, alpha: f64, p2: f64, s2: f64, l2: f64) -> f64 {
    let wt = params.omega_tilde();
    let x = wt * alpha;
    let (coth, tanh) = (1.0 / x.tanh(), x.tanh());
    let exponent = -alpha * (p2 + params.mass * params.mass) - 0.25 * wt * (coth * s2 + tanh * l2);
    let prefactor = params.omega / (std::f64::consts::PI * params.theta);
    // 1/sinh(2x) = 2e^{-2x}/(1 - e^{-4x}), safe for large x
    let inv_sinh = 2.0 * (-2.0 * x).exp() / -(-4.0 * x).exp_m1();
    prefactor * inv_sinh * exponent.exp()
}

/// `Ĉ^i(p, p̊; p, q̊)` by adaptive quadrature. Slice 0 maps `[1, ∞)` onto
/// `[0, 1)` through `α = 1 + t/(1 - t)`; the other slices integrate over
/// `ln α`.
pub fn propagator_slice(
    params: &ModelParams,
    i: u32,
    p: V2,
    pr: V2,
    qr: V2,
) -> Result<f64, NumericsError> {
    params.validate()?;
    let (p2, s2, l2) = (norm2(p), norm2(add(pr, qr)), norm2(sub(pr, qr)));
    let q = if i == 0 {
        integrate(
            |t| {
                if t >= 1.0 {
                    return 0.0;
                }
                let u = 1.0 - t;
                let alpha = 1.0 + t / u;
                integrand(params, alpha, p2, s2, l2) / (u * u)
            },
            0.0,
            1.0,
            SLICE_ACCURACY,
        )?
    } else {
        let (lo, hi) = slice_range(params, i);
        integrate(
            |u| {
                let alpha = u.exp();
                alpha * integrand(params, alpha, p2, s2, l2)
            },
            lo.ln(),
            hi.ln(),
            SLICE_ACCURACY,
        )?
    };
    Ok(q.value.max(0.0))
}

/// A generalised line of `n` insertions: `κ^{2n}` times the first segment
/// carrying `p̊`, the interior segments at zero noncommutative momentum and
/// the last segment carrying `q̊`. `segments` holds the `n + 1` slices.
pub fn generalised_line_value(
    params: &ModelParams,
    segments: &[u32],
    p: V2,
    pr: V2,
    qr: V2,
) -> Result<f64, NumericsError> {
    let n = segments
        .len()
        .checked_sub(1)
        .filter(|&n| n >= 1)
        .ok_or_else(|| {
            NumericsError::InvalidParams("a generalised line has at least two segments".into())
        })?;
    let zero = [0.0; 2];
    let mut value = params.kappa.powi(2 * n as i32);
    value *= propagator_slice(params, segments[0], p, pr, zero)?;
    for &i in &segments[1..n] {
        value *= propagator_slice(params, i, p, zero, zero)?;
    }
    value *= propagator_slice(params, segments[n], p, zero, qr)?;
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slices_tile_the_half_line() {
        let params = ModelParams::default();
        assert_eq!(slice_range(&params, 0), (1.0, f64::INFINITY));
        assert_eq!(slice_range(&params, 1), (0.25, 1.0));
        assert_eq!(slice_range(&params, 2), (0.0625, 0.25));
    }

    #[test]
    fn large_alpha_does_not_overflow() {
        let params = ModelParams::default();
        let v = integrand(&params, 1e6, 0.0, 0.0, 0.0);
        assert_eq!(v, 0.0);
        assert!(integrand(&params, 1.0, 0.0, 0.0, 0.0) > 0.0);
    }

    #[test]
    fn momenta_only_damp() {
        let params = ModelParams::default();
        let zero = [0.0; 2];
        for i in 0..4 {
            let at_zero = propagator_slice(&params, i, zero, zero, zero).unwrap();
            let moved = propagator_slice(&params, i, [1.0, 0.5], [0.3, 0.0], [0.0, -0.2]).unwrap();
            assert!(at_zero > 0.0 && moved <= at_zero);
        }
    }
}
