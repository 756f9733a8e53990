//! Globally adaptive Gauss–Kronrod (7, 15) quadrature.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::NumericsError;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728,
];

/// Gauss weights for the odd Kronrod nodes `XGK[1], XGK[3], XGK[5], XGK[7]`.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_INTERVALS: usize = 4000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
}

#[derive(Clone, Copy, Debug)]
struct Piece {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Piece {}

impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn rule(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> Piece {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        kronrod += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    Piece {
        a,
        b,
        value: kronrod * h,
        error: ((kronrod - gauss) * h).abs(),
    }
}

fn converged(value: f64, error: f64, rel: f64) -> bool {
    value.is_finite() && (error <= rel * value.abs() || error <= f64::MIN_POSITIVE)
}

fn resum(heap: &BinaryHeap<Piece>) -> (f64, f64) {
    heap.iter()
        .fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.error))
}

/// Integrates `f` over `[a, b]` until the summed error estimate drops below
/// `rel` times the magnitude of the result.
pub fn integrate(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    rel: f64,
) -> Result<Quadrature, NumericsError> {
    let first = rule(&f, a, b);
    let (mut value, mut error) = (first.value, first.error);
    let mut heap = BinaryHeap::from([first]);
    loop {
        if converged(value, error, rel) {
            // the running sums drift; confirm on a fresh sum
            (value, error) = resum(&heap);
            if converged(value, error, rel) {
                break;
            }
        }
        if heap.len() >= MAX_INTERVALS || !value.is_finite() || !error.is_finite() {
            return Err(NumericsError::QuadratureFailure {
                target: rel,
                estimate: error / value.abs(),
                intervals: heap.len(),
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        let left = rule(&f, worst.a, mid);
        let right = rule(&f, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    Ok(Quadrature {
        value,
        error,
        intervals: heap.len(),
    })
}
