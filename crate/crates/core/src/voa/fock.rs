//! The rank-one Fock space `M(1, λ)` with the free-boson action.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::formal::binom::binom;
use crate::scalar::Scalar;
use crate::voa::basis::{canonical, size, LevelBasis, Partition};
use crate::voa::vector::GradedVector;

/// Fock space on which `α(0)` acts by `lambda`, truncated at `max_level`.
#[derive(Clone, Debug)]
pub struct FockSpace<S> {
    lambda: S,
    basis: LevelBasis,
}

fn remove_part(p: &[u32], k: u32) -> Option<(Partition, usize)> {
    let mult = p.iter().filter(|&&x| x == k).count();
    let pos = p.iter().position(|&x| x == k)?;
    let mut out = p.to_vec();
    out.remove(pos);
    Some((out, mult))
}

impl<S: Scalar> FockSpace<S> {
    pub fn new(lambda: S, max_level: usize) -> Self {
        Self { lambda, basis: LevelBasis::new(1, max_level) }
    }

    pub fn lambda(&self) -> &S {
        &self.lambda
    }

    pub fn basis(&self) -> &LevelBasis {
        &self.basis
    }

    /// `L(0)` eigenvalue on the lowest state.
    pub fn lowest_weight(&self) -> S {
        self.lambda.clone() * self.lambda.clone() / S::from_i64(2)
    }

    fn vector_of(&self, p: Partition, c: S) -> Result<GradedVector<S>> {
        let level = size(&p);
        if level > self.basis.max_level() {
            return Err(Error::LevelRange { needed: level, max: self.basis.max_level() });
        }
        let idx = self.basis.index_of(&p).expect("partition with positive parts");
        Ok(GradedVector::term(level, idx, c))
    }

    /// `α(k)` on a basis state.
    pub fn alpha(&self, k: i64, level: usize, index: usize) -> Result<GradedVector<S>> {
        let p = self.basis.label(level, index);
        match k {
            0 => self.vector_of(p.clone(), self.lambda.clone()),
            k if k < 0 => {
                let mut q = p.clone();
                q.push((-k) as u32);
                self.vector_of(canonical(q), S::one())
            }
            k => match remove_part(p, k as u32) {
                Some((q, mult)) => self.vector_of(q, S::from_i64(k * mult as i64)),
                None => Ok(GradedVector::zero()),
            },
        }
    }

    /// Mode `u_q` of `u = α(-n_1)…α(-n_r)·vac` on a basis state, from the
    /// normal-ordered product of derivative fields:
    /// `u_q = Σ_{k_1+…+k_r = q+1-wt u} Π_t C(-k_t-1, n_t-1) :α(k_1)…α(k_r):`.
    pub fn normal_ordered_mode(&self, word: &[u32], q: i64, level: usize, index: usize) -> Result<GradedVector<S>> {
        let wt = size(word) as i64;
        let target = level as i64 + wt - q - 1;
        if target < 0 {
            return Ok(GradedVector::zero());
        }
        if target as usize > self.basis.max_level() {
            return Err(Error::LevelRange { needed: target as usize, max: self.basis.max_level() });
        }
        let total = q + 1 - wt;
        let state = self.basis.label(level, index).clone();
        if word.is_empty() {
            return Ok(if total == 0 { GradedVector::basis(level, index) } else { GradedVector::zero() });
        }
        let hi = level as i64;
        let lo = (total - hi).min(0);
        // (running sum, remaining state, created parts) -> coefficient
        let mut layer: HashMap<(i64, Partition, Partition), S> = HashMap::new();
        layer.insert((0, state, Vec::new()), S::one());
        let r = word.len() as i64;
        for (t, &n) in word.iter().enumerate() {
            let left = r - t as i64 - 1;
            let mut next: HashMap<(i64, Partition, Partition), S> = HashMap::new();
            for ((sum, st, created), c) in layer {
                for k in lo..=hi {
                    let s2 = sum + k;
                    if total - s2 < left * lo || total - s2 > left * hi {
                        continue;
                    }
                    let mut coef = binom::<S>(-k - 1, n as i64 - 1);
                    if coef.is_zero() {
                        continue;
                    }
                    let (st2, cr2) = match k {
                        0 => {
                            coef = coef * self.lambda.clone();
                            (st.clone(), created.clone())
                        }
                        k if k > 0 => match remove_part(&st, k as u32) {
                            Some((q, mult)) => {
                                coef = coef * S::from_i64(k * mult as i64);
                                (q, created.clone())
                            }
                            None => continue,
                        },
                        k => {
                            let mut cr = created.clone();
                            cr.push((-k) as u32);
                            (st.clone(), canonical(cr))
                        }
                    };
                    if coef.is_zero() {
                        continue;
                    }
                    let e = next.entry((s2, st2, cr2)).or_insert_with(S::zero);
                    *e = e.clone() + c.clone() * coef;
                }
            }
            layer = next;
        }
        let mut out = GradedVector::zero();
        let mut entries: Vec<_> = layer.into_iter().filter(|((s, _, _), _)| *s == total).collect();
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        for ((_, st, created), c) in entries {
            let mut parts = st;
            parts.extend(created);
            let v = self.vector_of(canonical(parts), c)?;
            out.add_scaled(&v, &S::one());
        }
        Ok(out)
    }
}
