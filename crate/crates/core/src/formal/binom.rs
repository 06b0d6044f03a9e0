//! Generalized binomial coefficients.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::One;
use parking_lot::RwLock;

use crate::scalar::Scalar;

fn binom_small(alpha: i64, k: i64) -> Option<i128> {
    let mut acc: i128 = 1;
    for j in 0..k {
        acc = acc.checked_mul((alpha - j) as i128)?;
        acc /= (j + 1) as i128;
    }
    Some(acc)
}

/// `alpha (alpha-1) ... (alpha-k+1) / k!` for `k >= 0`, and 0 for `k < 0`.
///
/// For integer `alpha` the value is always an integer; the running product is
/// divisible by `(j+1)!` at every step so the division is exact.
pub fn binom_int(alpha: i64, k: i64) -> BigInt {
    if k < 0 {
        return BigInt::from(0);
    }
    if let Some(v) = binom_small(alpha, k) {
        return BigInt::from(v);
    }
    let mut acc = BigInt::one();
    for j in 0..k {
        acc *= alpha - j;
        acc /= j + 1;
    }
    acc
}

/// The binomial coefficient as a field element.
pub fn binom<S: Scalar>(alpha: i64, k: i64) -> S {
    if k < 0 {
        return S::zero();
    }
    match binom_small(alpha, k) {
        Some(v) if i64::try_from(v).is_ok() => S::from_i64(v as i64),
        _ => S::from_bigint(&binom_int(alpha, k)),
    }
}

/// Insert-once memo of binomial coefficients, safe for concurrent readers.
#[derive(Debug, Default)]
pub struct BinomialTable<S> {
    memo: RwLock<HashMap<(i64, i64), S>>,
}

impl<S: Scalar> BinomialTable<S> {
    pub fn new() -> Self {
        Self { memo: RwLock::new(HashMap::new()) }
    }

    pub fn get(&self, alpha: i64, k: i64) -> S {
        if let Some(v) = self.memo.read().get(&(alpha, k)) {
            return v.clone();
        }
        let v = binom::<S>(alpha, k);
        self.memo.write().entry((alpha, k)).or_insert(v).clone()
    }

    pub fn len(&self) -> usize {
        self.memo.read().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
