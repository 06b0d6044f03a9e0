//! Coefficient fields the engine is generic over.

use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{Num, One, ToPrimitive, Zero};

/// A field of coefficients.
///
/// Exact fields (`Rational`, `Ratio<i64>`) support modular screening through
/// [`Scalar::residue`]; `f64` is provided for quick numerics only and never
/// takes part in membership decisions.
pub trait Scalar: Clone + Debug + Display + PartialEq + Num + Neg<Output = Self> + Send + Sync + 'static {
    const EXACT: bool;

    fn from_i64(n: i64) -> Self;

    fn from_bigint(n: &BigInt) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    /// Image under reduction modulo the prime `p`, or `None` when the
    /// denominator vanishes mod `p` or the field is not exact.
    fn residue(&self, p: u64) -> Option<u64>;

    /// Parses `n` or `n/d`.
    fn parse_scalar(s: &str) -> Option<Self>;
}

fn mod_big(n: &BigInt, p: u64) -> u64 {
    let r = n.mod_floor(&BigInt::from(p));
    r.to_u64().expect("reduced value fits")
}

pub(crate) fn mod_mul(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn mod_pow(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            r = mod_mul(r, a, p);
        }
        a = mod_mul(a, a, p);
        e >>= 1;
    }
    r
}

pub(crate) fn mod_inv(a: u64, p: u64) -> u64 {
    mod_pow(a, p - 2, p)
}

fn split_ratio(s: &str) -> Option<(&str, Option<&str>)> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    match s.split_once('/') {
        Some((a, b)) => Some((a.trim(), Some(b.trim()))),
        None => Some((s, None)),
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn from_bigint(n: &BigInt) -> Self {
        BigRational::from_integer(n.clone())
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn residue(&self, p: u64) -> Option<u64> {
        let d = mod_big(self.denom(), p);
        if d == 0 {
            return None;
        }
        Some(mod_mul(mod_big(self.numer(), p), mod_inv(d, p), p))
    }

    fn parse_scalar(s: &str) -> Option<Self> {
        let (a, b) = split_ratio(s)?;
        let n: BigInt = a.parse().ok()?;
        let d: BigInt = match b {
            Some(b) => b.parse().ok()?,
            None => BigInt::one(),
        };
        if d.is_zero() {
            return None;
        }
        Some(BigRational::new(n, d))
    }
}

impl Scalar for Ratio<i64> {
    const EXACT: bool = true;

    fn from_i64(n: i64) -> Self {
        Ratio::from_integer(n)
    }

    fn from_bigint(n: &BigInt) -> Self {
        Ratio::from_integer(n.to_i64().expect("integer fits in i64"))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Ratio::new(num, den)
    }

    fn residue(&self, p: u64) -> Option<u64> {
        let m = |x: i64| x.rem_euclid(p as i64) as u64;
        let d = m(*self.denom());
        if d == 0 {
            return None;
        }
        Some(mod_mul(m(*self.numer()), mod_inv(d, p), p))
    }

    fn parse_scalar(s: &str) -> Option<Self> {
        let (a, b) = split_ratio(s)?;
        let n: i64 = a.parse().ok()?;
        let d: i64 = match b {
            Some(b) => b.parse().ok()?,
            None => 1,
        };
        (d != 0).then(|| Ratio::new(n, d))
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_i64(n: i64) -> Self {
        n as f64
    }

    fn from_bigint(n: &BigInt) -> Self {
        n.to_f64().unwrap_or(f64::NAN)
    }

    fn residue(&self, _p: u64) -> Option<u64> {
        None
    }

    fn parse_scalar(s: &str) -> Option<Self> {
        let (a, b) = split_ratio(s)?;
        let n: f64 = a.parse().ok()?;
        let d: f64 = match b {
            Some(b) => b.parse().ok()?,
            None => 1.0,
        };
        Some(n / d)
    }
}

/// `(-1)^k` as a scalar.
pub fn sign<S: Scalar>(k: i64) -> S {
    if k.rem_euclid(2) == 0 {
        S::one()
    } else {
        -S::one()
    }
}

/// True when a rational is an integer.
pub fn is_integral(q: &BigRational) -> bool {
    q.denom().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residues_agree_across_exact_fields() {
        let p = 1_000_000_007;
        for (n, d) in [(3, 4), (-7, 3), (0, 5), (12, -9)] {
            let a = BigRational::from_ratio(n, d).residue(p);
            let b = Ratio::<i64>::from_ratio(n, d).residue(p);
            assert_eq!(a, b);
        }
        assert_eq!(BigRational::from_ratio(1, 7).residue(7), None);
        assert_eq!(1.5f64.residue(7), None);
    }

    #[test]
    fn parsing() {
        assert_eq!(BigRational::parse_scalar("3/2"), Some(BigRational::from_ratio(3, 2)));
        assert_eq!(BigRational::parse_scalar("-4"), Some(BigRational::from_i64(-4)));
        assert_eq!(BigRational::parse_scalar("1/0"), None);
        assert_eq!(f64::parse_scalar("1/4"), Some(0.25));
        assert_eq!(Ratio::<i64>::parse_scalar("6/4"), Some(Ratio::new(3, 2)));
    }

    #[test]
    fn inverse_mod_p() {
        let p = (1u64 << 61) - 1;
        for a in [2u64, 3, 12345678901] {
            assert_eq!(mod_mul(a, mod_inv(a, p), p), 1);
        }
    }
}
