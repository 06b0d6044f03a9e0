//! Virasoro highest-weight modules in the PBW basis, and their simple
//! quotients via the radical of the Shapovalov form.

use std::collections::HashMap;
use std::sync::Arc;

use parking_lot::RwLock;

use crate::error::{Error, Result};
use crate::linalg::{Elimination, SpanBasis};
use crate::scalar::Scalar;
use crate::voa::basis::{size, LevelBasis, Partition};
use crate::voa::vector::GradedVector;

/// Universal module generated by a lowest vector `v` with `L(0)v = h v`.
///
/// With `vacuum` set, `L(-1)v = 0` as well and the basis uses parts `>= 2`.
#[derive(Debug)]
pub struct VirasoroPbw<S> {
    c: S,
    h: S,
    vacuum: bool,
    basis: LevelBasis,
    memo: RwLock<HashMap<(i64, usize, usize), Arc<GradedVector<S>>>>,
}

impl<S: Scalar> VirasoroPbw<S> {
    pub fn new(c: S, h: S, vacuum: bool, max_level: usize) -> Self {
        let basis = LevelBasis::new(if vacuum { 2 } else { 1 }, max_level);
        Self { c, h, vacuum, basis, memo: RwLock::new(HashMap::new()) }
    }

    pub fn c(&self) -> &S {
        &self.c
    }

    pub fn h(&self) -> &S {
        &self.h
    }

    pub fn basis(&self) -> &LevelBasis {
        &self.basis
    }

    fn monomial(&self, word: Partition, c: S) -> Result<GradedVector<S>> {
        let level = size(&word);
        if level > self.basis.max_level() {
            return Err(Error::LevelRange { needed: level, max: self.basis.max_level() });
        }
        let idx = self.basis.index_of(&word).expect("admissible PBW word");
        Ok(GradedVector::term(level, idx, c))
    }

    /// `L(n)` on a PBW basis monomial.
    pub fn apply(&self, n: i64, level: usize, index: usize) -> Result<Arc<GradedVector<S>>> {
        if let Some(v) = self.memo.read().get(&(n, level, index)) {
            return Ok(v.clone());
        }
        let v = Arc::new(self.compute(n, level, index)?);
        self.memo.write().insert((n, level, index), v.clone());
        Ok(v)
    }

    pub fn apply_vec(&self, n: i64, v: &GradedVector<S>) -> Result<GradedVector<S>> {
        v.map_linear(|l, i| self.apply(n, l, i).map(|x| (*x).clone()))
    }

    fn compute(&self, n: i64, level: usize, index: usize) -> Result<GradedVector<S>> {
        let target = level as i64 - n;
        if target < 0 {
            return Ok(GradedVector::zero());
        }
        if target as usize > self.basis.max_level() {
            return Err(Error::LevelRange { needed: target as usize, max: self.basis.max_level() });
        }
        let word = self.basis.label(level, index).clone();
        let Some((&n1, rest)) = word.split_first() else {
            return match n {
                0 => Ok(GradedVector::term(0, 0, self.h.clone())),
                -1 if self.vacuum => Ok(GradedVector::zero()),
                n if n < 0 => self.monomial(vec![(-n) as u32], S::one()),
                _ => Ok(GradedVector::zero()),
            };
        };
        let n1 = n1 as i64;
        if n < 0 && -n >= n1 {
            let mut w = vec![(-n) as u32];
            w.extend_from_slice(&word);
            return self.monomial(w, S::one());
        }
        // L(n) L(-n1) R = L(-n1) L(n) R + (n + n1) L(n - n1) R + δ_{n,n1} c/12 (n³ - n) R
        let rest_level = level - n1 as usize;
        let rest_idx = self.basis.index_of(rest).expect("suffix of a PBW word is a PBW word");
        let inner = self.apply(n, rest_level, rest_idx)?;
        let mut out = self.apply_vec(-n1, &inner)?;
        let shifted = self.apply(n - n1, rest_level, rest_idx)?;
        out.add_scaled(&shifted, &S::from_i64(n + n1));
        if n == n1 {
            let central = self.c.clone() * S::from_i64(n * n * n - n) / S::from_i64(12);
            out.add_term(rest_level, rest_idx, central);
        }
        Ok(out)
    }

    /// Shapovalov form on one level: `G[I][J]` is the coefficient of the
    /// lowest vector in `L(i_r)…L(i_1) L(-J) v`.
    pub fn gram(&self, level: usize) -> Result<Vec<Vec<S>>> {
        let labels = self.basis.labels(level);
        let mut g = vec![vec![S::zero(); labels.len()]; labels.len()];
        for (word, row) in labels.iter().zip(g.iter_mut()) {
            for (b, cell) in row.iter_mut().enumerate() {
                let mut v = GradedVector::basis(level, b);
                for &part in word {
                    v = self.apply_vec(part as i64, &v)?;
                }
                *cell = v.coeff(0, 0);
            }
        }
        Ok(g)
    }
}

/// Projection of one level onto the quotient by the radical.
#[derive(Clone, Debug)]
pub struct LevelQuotient<S> {
    /// Universal indices whose images form the quotient basis.
    pub reps: Vec<usize>,
    /// `rows[t]` gives quotient coordinate `t` as a functional on the level.
    pub rows: Vec<Vec<(usize, S)>>,
}

impl<S: Scalar> LevelQuotient<S> {
    fn from_gram(gram: &[Vec<S>]) -> Self {
        let n = gram.len();
        let mut span = SpanBasis::new(n, Elimination::Exact);
        for row in gram {
            span.insert(row);
        }
        // RREF pivots come out in insertion order; sort by pivot column.
        let mut pairs: Vec<(usize, Vec<(usize, S)>)> =
            span.pivots().iter().copied().zip(span.rows().iter().cloned()).collect();
        pairs.sort_by_key(|p| p.0);
        let (reps, rows) = pairs.into_iter().unzip();
        Self { reps, rows }
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    fn project(&self, level: usize, v: &GradedVector<S>) -> GradedVector<S> {
        let mut out = GradedVector::zero();
        for (t, row) in self.rows.iter().enumerate() {
            let mut acc = S::zero();
            for (j, c) in row {
                let x = v.coeff(level, *j);
                if !x.is_zero() {
                    acc = acc + x * c.clone();
                }
            }
            out.add_term(level, t, acc);
        }
        out
    }
}

/// A Virasoro highest-weight space, universal or simple.
#[derive(Debug)]
pub struct VirasoroSpace<S> {
    pbw: VirasoroPbw<S>,
    quotient: Option<Vec<LevelQuotient<S>>>,
}

impl<S: Scalar> VirasoroSpace<S> {
    pub fn universal(c: S, h: S, vacuum: bool, max_level: usize) -> Self {
        Self { pbw: VirasoroPbw::new(c, h, vacuum, max_level), quotient: None }
    }

    pub fn simple(c: S, h: S, vacuum: bool, max_level: usize) -> Result<Self> {
        let pbw = VirasoroPbw::new(c, h, vacuum, max_level);
        let levels =
            (0..=max_level).map(|k| pbw.gram(k).map(|g| LevelQuotient::from_gram(&g))).collect::<Result<Vec<_>>>()?;
        Ok(Self { pbw, quotient: Some(levels) })
    }

    pub fn pbw(&self) -> &VirasoroPbw<S> {
        &self.pbw
    }

    pub fn is_simple(&self) -> bool {
        self.quotient.is_some()
    }

    pub fn max_level(&self) -> usize {
        self.pbw.basis.max_level()
    }

    pub fn dim(&self, level: usize) -> usize {
        match &self.quotient {
            Some(q) => q.get(level).map_or(0, LevelQuotient::dim),
            None => self.pbw.basis.dim(level),
        }
    }

    /// PBW word of a basis element.
    pub fn label(&self, level: usize, index: usize) -> &Partition {
        match &self.quotient {
            Some(q) => self.pbw.basis.label(level, q[level].reps[index]),
            None => self.pbw.basis.label(level, index),
        }
    }

    /// Coordinates of a universal vector in this space.
    pub fn from_universal(&self, v: &GradedVector<S>) -> GradedVector<S> {
        match &self.quotient {
            None => v.clone(),
            Some(q) => {
                let mut out = GradedVector::zero();
                for (level, part) in v.components() {
                    out.add_scaled(&q[level].project(level, &part), &S::one());
                }
                out
            }
        }
    }

    /// Universal index of a basis element.
    pub fn universal_index(&self, level: usize, index: usize) -> usize {
        match &self.quotient {
            Some(q) => q[level].reps[index],
            None => index,
        }
    }

    /// `L(n)` on a basis element.
    pub fn virasoro(&self, n: i64, level: usize, index: usize) -> Result<GradedVector<S>> {
        let u = self.universal_index(level, index);
        let v = self.pbw.apply(n, level, u)?;
        Ok(self.from_universal(&v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    #[test]
    fn bracket_holds_on_low_levels() {
        let c = Rational::from_ratio(1, 2);
        let vir = VirasoroPbw::new(c.clone(), Rational::from_ratio(1, 16), false, 8);
        for (m, n) in [(1i64, -1i64), (2, -2), (2, -1), (3, -1), (-1, -2), (1, -3)] {
            for level in 0..=3 {
                for idx in 0..vir.basis().dim(level) {
                    let e = GradedVector::basis(level, idx);
                    let mn = vir.apply_vec(m, &vir.apply_vec(n, &e).unwrap()).unwrap();
                    let nm = vir.apply_vec(n, &vir.apply_vec(m, &e).unwrap()).unwrap();
                    let mut rhs = vir.apply_vec(m + n, &e).unwrap().scale(&q(m - n));
                    if m + n == 0 {
                        rhs.add_scaled(&e, &(c.clone() * q(m * m * m - m) / q(12)));
                    }
                    assert_eq!(&mn - &nm, rhs, "[L({m}), L({n})] at level {level}");
                }
            }
        }
    }

    #[test]
    fn conformal_vector_is_primary() {
        let vir = VirasoroPbw::new(q(3), q(0), true, 6);
        let omega = vir.basis().index_of(&[2]).unwrap();
        assert!(vir.apply(1, 2, omega).unwrap().is_zero());
        assert_eq!(*vir.apply(0, 2, omega).unwrap(), GradedVector::term(2, omega, q(2)));
        let half_c = vir.apply(2, 2, omega).unwrap();
        assert_eq!(*half_c, GradedVector::term(0, 0, Rational::from_ratio(3, 2)));
    }

    #[test]
    fn ising_vacuum_quotient_dims() {
        let s = VirasoroSpace::simple(Rational::from_ratio(1, 2), q(0), true, 8).unwrap();
        let dims: Vec<usize> = (0..=8).map(|k| s.dim(k)).collect();
        assert_eq!(dims, vec![1, 0, 1, 1, 2, 2, 3, 3, 5]);
        assert_eq!(s.pbw().basis().dim(6), 4);
    }
}
