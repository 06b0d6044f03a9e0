//! Seeded sampling of homogeneous elements.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::scalar::Scalar;
use crate::voa::{GradedVector, Voa};

/// Draws coefficients `a/b` with `a` uniform in `-2..=2` and `b` in `1..=3`.
#[derive(Debug, Clone)]
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn range(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn index(&mut self, len: usize) -> usize {
        self.rng.gen_range(0..len)
    }

    pub fn coefficient<S: Scalar>(&mut self) -> S {
        let a = self.rng.gen_range(-2i64..=2);
        let b = self.rng.gen_range(1i64..=3);
        S::from_ratio(a, b)
    }

    /// A nonzero element of `V_weight`, or `None` when that space is zero.
    pub fn homogeneous<S: Scalar>(&mut self, voa: &Voa<S>, weight: usize) -> Option<GradedVector<S>> {
        let dim = voa.dim(weight);
        if dim == 0 {
            return None;
        }
        loop {
            let mut v = GradedVector::zero();
            for i in 0..dim {
                v.add_term(weight, i, self.coefficient());
            }
            if !v.is_zero() {
                return Some(v);
            }
        }
    }

    /// A nonzero homogeneous element of weight at most `max_weight`.
    pub fn element<S: Scalar>(&mut self, voa: &Voa<S>, max_weight: usize) -> GradedVector<S> {
        loop {
            let w = self.range(0, max_weight as i64) as usize;
            if let Some(v) = self.homogeneous(voa, w) {
                return v;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::voa::VoaKind;
    use crate::Rational;

    #[test]
    fn deterministic_and_homogeneous() {
        let voa = Voa::<Rational>::new(VoaKind::Heisenberg, 4).unwrap();
        let mut a = Sampler::new(7);
        let mut b = Sampler::new(7);
        for _ in 0..20 {
            let x = a.element(&voa, 3);
            assert_eq!(x, b.element(&voa, 3));
            assert!(x.weight().is_some());
        }
        let ising = Voa::<Rational>::new(VoaKind::Ising, 6).unwrap();
        assert!(Sampler::new(1).homogeneous(&ising, 1).is_none());
    }
}
