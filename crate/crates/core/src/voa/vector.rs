//! Finitely supported vectors in a graded space with per-weight bases.

use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

use crate::scalar::Scalar;

/// Coordinates keyed by `(weight, basis index)`; zeros are never stored.
///
/// For modules the first key component is the level rather than the weight.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedVector<S> {
    coords: BTreeMap<(usize, usize), S>,
}

impl<S: Scalar> GradedVector<S> {
    pub fn zero() -> Self {
        Self { coords: BTreeMap::new() }
    }

    pub fn basis(weight: usize, index: usize) -> Self {
        Self::term(weight, index, S::one())
    }

    pub fn term(weight: usize, index: usize, c: S) -> Self {
        let mut v = Self::zero();
        v.add_term(weight, index, c);
        v
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ((usize, usize), S)>) -> Self {
        let mut v = Self::zero();
        for ((w, i), c) in terms {
            v.add_term(w, i, c);
        }
        v
    }

    pub fn add_term(&mut self, weight: usize, index: usize, c: S) {
        if c.is_zero() {
            return;
        }
        let key = (weight, index);
        match self.coords.get_mut(&key) {
            Some(x) => {
                *x = x.clone() + c;
                if x.is_zero() {
                    self.coords.remove(&key);
                }
            }
            None => {
                self.coords.insert(key, c);
            }
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &Self, c: &S) {
        if c.is_zero() {
            return;
        }
        for (&(w, i), x) in &other.coords {
            self.add_term(w, i, x.clone() * c.clone());
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { coords: self.coords.iter().map(|(k, x)| (*k, x.clone() * c.clone())).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coeff(&self, weight: usize, index: usize) -> S {
        self.coords.get(&(weight, index)).cloned().unwrap_or_else(S::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &S)> {
        self.coords.iter().map(|(&(w, i), c)| (w, i, c))
    }

    pub fn top_weight(&self) -> Option<usize> {
        self.coords.keys().next_back().map(|k| k.0)
    }

    pub fn bottom_weight(&self) -> Option<usize> {
        self.coords.keys().next().map(|k| k.0)
    }

    /// The common weight of a nonzero homogeneous vector.
    pub fn weight(&self) -> Option<usize> {
        match (self.bottom_weight(), self.top_weight()) {
            (Some(a), Some(b)) if a == b => Some(a),
            _ => None,
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.weight().is_some()
    }

    pub fn component(&self, weight: usize) -> Self {
        Self { coords: self.coords.range((weight, 0)..(weight + 1, 0)).map(|(k, c)| (*k, c.clone())).collect() }
    }

    /// Homogeneous components, keyed by weight.
    pub fn components(&self) -> BTreeMap<usize, Self> {
        let mut out: BTreeMap<usize, Self> = BTreeMap::new();
        for (&(w, i), c) in &self.coords {
            out.entry(w).or_default().coords.insert((w, i), c.clone());
        }
        out
    }

    /// Applies a linear map given on basis vectors.
    pub fn map_linear<E>(&self, mut f: impl FnMut(usize, usize) -> Result<Self, E>) -> Result<Self, E> {
        let mut out = Self::zero();
        for (&(w, i), c) in &self.coords {
            out.add_scaled(&f(w, i)?, c);
        }
        Ok(out)
    }
}

impl<S> Default for GradedVector<S> {
    fn default() -> Self {
        Self { coords: BTreeMap::new() }
    }
}

impl<S: Scalar> Add for &GradedVector<S> {
    type Output = GradedVector<S>;
    fn add(self, rhs: Self) -> GradedVector<S> {
        let mut out = self.clone();
        out.add_scaled(rhs, &S::one());
        out
    }
}

impl<S: Scalar> Sub for &GradedVector<S> {
    type Output = GradedVector<S>;
    fn sub(self, rhs: Self) -> GradedVector<S> {
        let mut out = self.clone();
        out.add_scaled(rhs, &-S::one());
        out
    }
}

impl<S: Scalar> Neg for &GradedVector<S> {
    type Output = GradedVector<S>;
    fn neg(self) -> GradedVector<S> {
        self.scale(&-S::one())
    }
}
