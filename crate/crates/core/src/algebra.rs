//! Exact linear and antisymmetric bilinear forms over momentum symbols.
//!
//! A [`BilinearForm`] stores `Σ c_ab s_a ∧ s_b` with `a < b` and rational
//! coefficients. The wedge of two plane vectors is `s ∧ t = (θ/2)(s_x t_y -
//! s_y t_x)`; exact evaluation drops the common `θ/2` factor and returns the
//! bare cross-product sum.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{Signed, Zero};

/// An exact plane vector.
pub type QVec = [BigRational; 2];

pub fn qvec(x: (i64, i64), y: (i64, i64)) -> QVec {
    [
        BigRational::new(x.0.into(), x.1.into()),
        BigRational::new(y.0.into(), y.1.into()),
    ]
}

pub fn qzero() -> QVec {
    [BigRational::zero(), BigRational::zero()]
}

fn big(c: Rational64) -> BigRational {
    BigRational::new(BigInt::from(*c.numer()), BigInt::from(*c.denom()))
}

fn cross(s: &QVec, t: &QVec) -> BigRational {
    &s[0] * &t[1] - &s[1] * &t[0]
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearForm<S: Ord> {
    terms: BTreeMap<S, Rational64>,
}

impl<S: Ord> Default for LinearForm<S> {
    fn default() -> Self {
        LinearForm {
            terms: BTreeMap::new(),
        }
    }
}

impl<S: Ord + Clone> LinearForm<S> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn symbol(s: S) -> Self {
        let mut f = Self::new();
        f.add_term(s, Rational64::from_integer(1));
        f
    }

    pub fn add_term(&mut self, s: S, c: Rational64) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(s.clone()).or_insert_with(Rational64::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&s);
        }
    }

    pub fn add_scaled(&mut self, other: &Self, c: Rational64) {
        for (s, v) in &other.terms {
            self.add_term(s.clone(), *v * c);
        }
    }

    pub fn scaled(&self, c: Rational64) -> Self {
        let mut out = Self::new();
        out.add_scaled(self, c);
        out
    }

    pub fn coefficient(&self, s: &S) -> Rational64 {
        self.terms.get(s).copied().unwrap_or_else(Rational64::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&S, &Rational64)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn contains(&self, s: &S) -> bool {
        self.terms.contains_key(s)
    }

    pub fn substitute<T: Ord + Clone>(&self, map: &impl Fn(&S) -> LinearForm<T>) -> LinearForm<T> {
        let mut out = LinearForm::new();
        for (s, c) in &self.terms {
            out.add_scaled(&map(s), *c);
        }
        out
    }

    pub fn evaluate(&self, values: &impl Fn(&S) -> QVec) -> QVec {
        let mut out = qzero();
        for (s, c) in &self.terms {
            let v = values(s);
            let c = big(*c);
            out[0] += &v[0] * &c;
            out[1] += &v[1] * &c;
        }
        out
    }

    pub fn evaluate_f64(&self, values: &impl Fn(&S) -> [f64; 2]) -> [f64; 2] {
        let mut out = [0.0; 2];
        for (s, c) in &self.terms {
            let v = values(s);
            let c = *c.numer() as f64 / *c.denom() as f64;
            out[0] += c * v[0];
            out[1] += c * v[1];
        }
        out
    }
}

impl<S: Ord + Clone> std::ops::Add for &LinearForm<S> {
    type Output = LinearForm<S>;
    fn add(self, rhs: Self) -> LinearForm<S> {
        let mut out = self.clone();
        out.add_scaled(rhs, Rational64::from_integer(1));
        out
    }
}

impl<S: Ord + Clone> std::ops::Sub for &LinearForm<S> {
    type Output = LinearForm<S>;
    fn sub(self, rhs: Self) -> LinearForm<S> {
        let mut out = self.clone();
        out.add_scaled(rhs, Rational64::from_integer(-1));
        out
    }
}

impl<S: Ord + Clone> FromIterator<S> for LinearForm<S> {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        let mut out = Self::new();
        for s in iter {
            out.add_term(s, Rational64::from_integer(1));
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BilinearForm<S: Ord> {
    terms: BTreeMap<(S, S), Rational64>,
}

impl<S: Ord> Default for BilinearForm<S> {
    fn default() -> Self {
        BilinearForm {
            terms: BTreeMap::new(),
        }
    }
}

impl<S: Ord + Clone> BilinearForm<S> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `c · a ∧ b`.
    pub fn add_wedge(&mut self, a: S, b: S, c: Rational64) {
        if c.is_zero() || a == b {
            return;
        }
        let (key, c) = if a < b { ((a, b), c) } else { ((b, a), -c) };
        let entry = self
            .terms
            .entry(key.clone())
            .or_insert_with(Rational64::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    /// Adds `c · x ∧ y` expanded bilinearly.
    pub fn add_forms(&mut self, x: &LinearForm<S>, y: &LinearForm<S>, c: Rational64) {
        for (a, ca) in x.terms() {
            for (b, cb) in y.terms() {
                self.add_wedge(a.clone(), b.clone(), *ca * *cb * c);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Self, c: Rational64) {
        for ((a, b), v) in &other.terms {
            self.add_wedge(a.clone(), b.clone(), *v * c);
        }
    }

    /// Coefficient of `a ∧ b`, antisymmetric in its arguments.
    pub fn coefficient(&self, a: &S, b: &S) -> Rational64 {
        if a < b {
            self.terms
                .get(&(a.clone(), b.clone()))
                .copied()
                .unwrap_or_else(Rational64::zero)
        } else if b < a {
            -self.coefficient(b, a)
        } else {
            Rational64::zero()
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(S, S), &Rational64)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn remove_symbol(&mut self, s: &S) {
        self.terms.retain(|(a, b), _| a != s && b != s);
    }

    pub fn substitute<T: Ord + Clone>(
        &self,
        map: &impl Fn(&S) -> LinearForm<T>,
    ) -> BilinearForm<T> {
        let mut out = BilinearForm::new();
        for ((a, b), c) in &self.terms {
            out.add_forms(&map(a), &map(b), *c);
        }
        out
    }

    pub fn map_symbols<T: Ord + Clone>(&self, f: impl Fn(&S) -> T) -> BilinearForm<T> {
        let mut out = BilinearForm::new();
        for ((a, b), c) in &self.terms {
            out.add_wedge(f(a), f(b), *c);
        }
        out
    }

    /// `Σ c_ab (s_a × t_b)` without the `θ/2` factor.
    pub fn evaluate(&self, values: &impl Fn(&S) -> QVec) -> BigRational {
        let mut out = BigRational::zero();
        for ((a, b), c) in &self.terms {
            out += cross(&values(a), &values(b)) * big(*c);
        }
        out
    }

    /// The phase `Σ c_ab s_a ∧ t_b` in floating point, `θ/2` included.
    pub fn evaluate_f64(&self, values: &impl Fn(&S) -> [f64; 2], theta: f64) -> f64 {
        let mut out = 0.0;
        for ((a, b), c) in &self.terms {
            let (s, t) = (values(a), values(b));
            let c = *c.numer() as f64 / *c.denom() as f64;
            out += c * (s[0] * t[1] - s[1] * t[0]);
        }
        0.5 * theta * out
    }

    pub fn max_abs_coefficient(&self) -> Rational64 {
        self.terms
            .values()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(Rational64::zero)
    }
}

impl<S: Ord + fmt::Display> fmt::Display for BilinearForm<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, ((a, b), c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c}) {a}∧{b}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn wedge_is_antisymmetric() {
        let mut f = BilinearForm::new();
        f.add_wedge("b", "a", r(1, 2));
        assert_eq!(f.coefficient(&"a", &"b"), r(-1, 2));
        assert_eq!(f.coefficient(&"b", &"a"), r(1, 2));
        f.add_wedge("a", "b", r(1, 2));
        assert!(f.is_empty());
        f.add_wedge("a", "a", r(1, 1));
        assert!(f.is_empty());
    }

    #[test]
    fn substitution_expands_bilinearly() {
        let mut f = BilinearForm::new();
        f.add_wedge("x", "y", r(1, 1));
        // x = a + b, y = a - b  =>  x∧y = -a∧b + b∧a = -2 a∧b
        let g = f.substitute(&|s: &&str| match *s {
            "x" => ["a", "b"].into_iter().collect(),
            _ => {
                let mut l = LinearForm::symbol("a");
                l.add_term("b", r(-1, 1));
                l
            }
        });
        assert_eq!(g.coefficient(&"a", &"b"), r(-2, 1));
    }

    fn small() -> impl Strategy<Value = (i64, i64)> {
        (-9i64..=9, 1i64..=5)
    }

    proptest! {
        #[test]
        fn evaluation_commutes_with_substitution(
            c in -4i64..=4,
            xa in small(), xb in small(), ya in small(), yb in small(),
        ) {
            let mut f = BilinearForm::new();
            f.add_wedge(0u8, 1u8, r(c, 2));
            let a = qvec(xa, xb);
            let b = qvec(ya, yb);
            let sub = |s: &u8| -> LinearForm<u8> {
                let mut l = LinearForm::symbol(2u8);
                l.add_term(3, r(i64::from(*s) + 1, 1));
                l
            };
            let vals = |s: &u8| if *s == 2 { a.clone() } else { b.clone() };
            let direct = f.evaluate(&|s: &u8| sub(s).evaluate(&vals));
            let substituted = f.substitute(&sub).evaluate(&vals);
            prop_assert_eq!(direct, substituted);
        }
    }
}
