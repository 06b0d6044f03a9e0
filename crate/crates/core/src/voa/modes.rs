//! Modes of composite states from the modes of a single strong generator.

use std::collections::HashMap;
use std::sync::Arc;

use parking_lot::RwLock;

use crate::error::{Error, Result};
use crate::formal::binom::binom;
use crate::scalar::{sign, Scalar};
use crate::voa::basis::{size, Partition};
use crate::voa::fock::FockSpace;
use crate::voa::vector::GradedVector;
use crate::voa::virasoro::VirasoroSpace;

/// A graded space carrying the modes of the Heisenberg field or of the
/// Virasoro field.
#[derive(Debug)]
pub enum StateSpace<S> {
    Fock(FockSpace<S>),
    Virasoro(VirasoroSpace<S>),
}

impl<S: Scalar> StateSpace<S> {
    pub fn max_level(&self) -> usize {
        match self {
            StateSpace::Fock(f) => f.basis().max_level(),
            StateSpace::Virasoro(v) => v.max_level(),
        }
    }

    pub fn dim(&self, level: usize) -> usize {
        match self {
            StateSpace::Fock(f) => f.basis().dim(level),
            StateSpace::Virasoro(v) => v.dim(level),
        }
    }

    pub fn dims(&self) -> Vec<usize> {
        (0..=self.max_level()).map(|k| self.dim(k)).collect()
    }

    /// PBW word labelling a basis element.
    pub fn label(&self, level: usize, index: usize) -> &Partition {
        match self {
            StateSpace::Fock(f) => f.basis().label(level, index),
            StateSpace::Virasoro(v) => v.label(level, index),
        }
    }

    /// Smallest part of a word; the word `[g]` is the generator itself.
    pub fn generator_part(&self) -> u32 {
        match self {
            StateSpace::Fock(_) => 1,
            StateSpace::Virasoro(_) => 2,
        }
    }

    /// Mode index `p` with `x(-n) = a_p` for the generator `a`.
    fn head_mode(&self, n: u32) -> i64 {
        match self {
            StateSpace::Fock(_) => -(n as i64),
            StateSpace::Virasoro(_) => 1 - n as i64,
        }
    }

    /// `a_k` on a basis element: `α(k)`, or `ω_k = L(k-1)`.
    pub fn generator_mode(&self, k: i64, level: usize, index: usize) -> Result<GradedVector<S>> {
        match self {
            StateSpace::Fock(f) => f.alpha(k, level, index),
            StateSpace::Virasoro(v) => v.virasoro(k - 1, level, index),
        }
    }

    /// `L(0)` eigenvalue on level 0.
    pub fn lowest_weight(&self) -> S {
        match self {
            StateSpace::Fock(f) => f.lowest_weight(),
            StateSpace::Virasoro(v) => v.pbw().h().clone(),
        }
    }
}

type ModeKey = (Partition, i64, usize, usize);

/// Memoized action of `(x(-n_1)…x(-n_r)·vac)_q` on a state space.
///
/// Composite modes come from the iterate formula
/// `(a_p b)_q = Σ_{i≥0} (-1)^i C(p,i) (a_{p-i} b_{q+i} - (-1)^p b_{p+q-i} a_i)`,
/// where the sum is finite on each state because modes that would land below
/// level 0 vanish.
#[derive(Debug)]
pub struct ModeEngine<S> {
    space: Arc<StateSpace<S>>,
    memo: RwLock<HashMap<ModeKey, Arc<GradedVector<S>>>>,
}

impl<S: Scalar> ModeEngine<S> {
    pub fn new(space: Arc<StateSpace<S>>) -> Self {
        Self { space, memo: RwLock::new(HashMap::new()) }
    }

    pub fn space(&self) -> &Arc<StateSpace<S>> {
        &self.space
    }

    pub fn cache_len(&self) -> usize {
        self.memo.read().len()
    }

    /// `u_q` on a basis state, for the word `u`.
    pub fn word_mode(&self, word: &[u32], q: i64, level: usize, index: usize) -> Result<Arc<GradedVector<S>>> {
        let target = level as i64 + size(word) as i64 - q - 1;
        if target < 0 {
            return Ok(Arc::new(GradedVector::zero()));
        }
        let max = self.space.max_level();
        if target as usize > max {
            return Err(Error::WeightRange { needed: target as usize, max });
        }
        let key = (word.to_vec(), q, level, index);
        if let Some(v) = self.memo.read().get(&key) {
            return Ok(v.clone());
        }
        let v = Arc::new(self.compute(word, q, level, index)?);
        self.memo.write().insert(key, v.clone());
        Ok(v)
    }

    pub fn word_mode_vec(&self, word: &[u32], q: i64, w: &GradedVector<S>) -> Result<GradedVector<S>> {
        w.map_linear(|l, i| self.word_mode(word, q, l, i).map(|x| (*x).clone()))
    }

    fn generator_vec(&self, k: i64, w: &GradedVector<S>) -> Result<GradedVector<S>> {
        w.map_linear(|l, i| self.space.generator_mode(k, l, i))
    }

    fn compute(&self, word: &[u32], q: i64, level: usize, index: usize) -> Result<GradedVector<S>> {
        let Some((&head, rest)) = word.split_first() else {
            return Ok(if q == -1 { GradedVector::basis(level, index) } else { GradedVector::zero() });
        };
        if rest.is_empty() && head == self.space.generator_part() {
            return self.space.generator_mode(q, level, index);
        }
        let p = self.space.head_mode(head);
        let wg = self.space.generator_part() as i64;
        let wb = size(rest) as i64;
        let l = level as i64;
        let w = GradedVector::basis(level, index);
        let sp = sign::<S>(p);
        let i_max = (l + wb - q - 1).max(l + wg - 1);
        let mut out = GradedVector::zero();
        for i in 0..=i_max.max(-1) {
            let c = sign::<S>(i) * binom::<S>(p, i);
            if c.is_zero() {
                continue;
            }
            if l + wb - q - i > 0 {
                let bw = self.word_mode(rest, q + i, level, index)?;
                if !bw.is_zero() {
                    out.add_scaled(&self.generator_vec(p - i, &bw)?, &c);
                }
            }
            if l + wg - i > 0 {
                let aw = self.generator_vec(i, &w)?;
                if !aw.is_zero() {
                    let t = self.word_mode_vec(rest, p + q - i, &aw)?;
                    out.add_scaled(&t, &-(c.clone() * sp.clone()));
                }
            }
        }
        Ok(out)
    }
}
