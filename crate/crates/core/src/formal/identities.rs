//! Verifiers for the formal-variable identities behind the product calculus.
//!
//! Each verifier assembles its expression term by term as an exact Laurent
//! polynomial and compares coefficient maps with the claimed right side.

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::formal::binom::binom;
use crate::formal::laurent::{expand_binomial_power, LaurentPoly};
use crate::scalar::{sign, Scalar};

/// Outcome of an identity check together with the computed expression.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityCheck<S> {
    pub holds: bool,
    pub witness: LaurentPoly<S>,
}

/// `Σ_{i≤m} (-1)^i C(n+i,i) (1+z)^{n+1} z^{-(n+i+1)} - Σ_{i≤n} (-1)^m C(m+i,i) (1+z)^i z^{-(m+i+1)}`,
/// expected to equal 1.
pub fn binomial_sum_a<S: Scalar>(m: u32, n: u32) -> LaurentPoly<S> {
    let (m, n) = (m as i64, n as i64);
    let mut acc = LaurentPoly::zero(&["z"]);
    for i in 0..=m {
        let c = sign::<S>(i) * binom::<S>(n + i, i);
        acc = &acc + &expand_binomial_power::<S>("z", -(n + i + 1), n + 1, 0).scale(&c);
    }
    for i in 0..=n {
        let c = sign::<S>(m) * binom::<S>(m + i, i);
        acc = &acc - &expand_binomial_power::<S>("z", -(m + i + 1), i, 0).scale(&c);
    }
    acc
}

pub fn verify_unit_sum<S: Scalar>(m: u32, n: u32) -> IdentityCheck<S> {
    let witness = binomial_sum_a::<S>(m, n);
    let holds = witness == LaurentPoly::constant(&["z"], S::one());
    IdentityCheck { holds, witness }
}

/// The two-variable expression whose vanishing is checked by [`verify_two_variable_cancellation`].
pub fn binomial_sum_d<S: Scalar>(n: u32, m: u32) -> LaurentPoly<S> {
    let (n, m) = (n as i64, m as i64);
    let vars = ["z1", "z2"];
    let mut acc = LaurentPoly::zero(&vars);
    for i in 0..=n {
        let outer = sign::<S>(i) * binom::<S>(m + i, i);
        let mut inner = LaurentPoly::zero(&vars);
        for j in 0..=(n - i) {
            let cj = sign::<S>(j) * binom::<S>(-m - i - 1, j);
            for l in 0..=i {
                let c = cj.clone() * binom::<S>(i, l);
                inner.add_term(vec![-(j + i), j + l], c);
            }
        }
        inner.add_term(vec![-i, 0], -S::one());
        acc = &acc + &inner.scale(&outer);
    }
    acc
}

pub fn verify_two_variable_cancellation<S: Scalar>(n: u32, m: u32) -> IdentityCheck<S> {
    let witness = binomial_sum_d::<S>(n, m);
    IdentityCheck { holds: witness.is_zero(), witness }
}

/// `Σ_j (-1)^j C(-l,j) Σ_i (-1)^i C(l+i+j-1,i) z^{-(i+j+l)}` over
/// `0 ≤ j ≤ k+1-l`, `0 ≤ i ≤ k+1-l-j`, expected to equal `z^{-l}`.
pub fn verify_reciprocal_power<S: Scalar>(k: u32, l: u32) -> Result<IdentityCheck<S>> {
    if l < 1 || k + 1 < l {
        return Err(Error::Precondition(format!("need l >= 1 and k + 1 - l >= 0, got k={k}, l={l}")));
    }
    let (k, l) = (k as i64, l as i64);
    let mut witness = LaurentPoly::zero(&["z"]);
    for j in 0..=(k + 1 - l) {
        let cj = sign::<S>(j) * binom::<S>(-l, j);
        for i in 0..=(k + 1 - l - j) {
            let c = cj.clone() * sign::<S>(i) * binom::<S>(l + i + j - 1, i);
            witness.add_term(vec![-(i + j + l)], c);
        }
    }
    let holds = witness == LaurentPoly::monomial(&["z"], &[-l], S::one());
    Ok(IdentityCheck { holds, witness })
}

/// `Σ_{i=0}^{k} C(n+m-p+i, i) C(-n-m+p-i-1, k-i) = 0` for `1 ≤ k ≤ p`.
pub fn verify_vandermonde_vanishing<S: Scalar>(n: u32, m: u32, p: u32, k: u32) -> Result<bool> {
    if k < 1 || k > p {
        return Err(Error::Precondition(format!("need 1 <= k <= p, got k={k}, p={p}")));
    }
    let s = n as i64 + m as i64 - p as i64;
    let k = k as i64;
    let total = (0..=k).fold(S::zero(), |acc, i| acc + binom::<S>(s + i, i) * binom::<S>(-s - i - 1, k - i));
    Ok(total.is_zero())
}

/// Ranges swept by [`identity_grid`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityBounds {
    /// `0 <= m, n <= unit_sum`.
    pub unit_sum: u32,
    /// `0 <= n, m <= cancellation`.
    pub cancellation: u32,
    /// `1 <= l <= reciprocal_l`, `l - 1 <= k <= reciprocal_k`.
    pub reciprocal_l: u32,
    pub reciprocal_k: u32,
    /// `0 <= n, m, p <= convolution`, `1 <= k <= p`.
    pub convolution: u32,
}

impl Default for IdentityBounds {
    fn default() -> Self {
        Self { unit_sum: 8, cancellation: 6, reciprocal_l: 6, reciprocal_k: 12, convolution: 4 }
    }
}

/// One identity family swept over its grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FamilyReport {
    pub family: String,
    pub cases: usize,
    pub passed: usize,
    /// Parameters and the computed expression of every failing case.
    pub failures: Vec<Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityGridReport {
    pub bounds: IdentityBounds,
    pub families: Vec<FamilyReport>,
}

impl IdentityGridReport {
    pub fn all_passed(&self) -> bool {
        self.families.iter().all(|f| f.failures.is_empty() && f.cases == f.passed)
    }

    pub fn cases(&self) -> usize {
        self.families.iter().map(|f| f.cases).sum()
    }
}

fn sweep<T, F>(family: &str, params: Vec<T>, check: F) -> Result<FamilyReport>
where
    T: Sync + Serialize,
    F: Fn(&T) -> Result<Option<String>> + Sync,
{
    let outcomes: Vec<Option<Value>> = params
        .par_iter()
        .map(|p| Ok(check(p)?.map(|witness| json!({"params": p, "witness": witness}))))
        .collect::<Result<_>>()?;
    let cases = outcomes.len();
    let failures: Vec<Value> = outcomes.into_iter().flatten().collect();
    Ok(FamilyReport { family: family.into(), cases, passed: cases - failures.len(), failures })
}

/// Runs all four identity families over `bounds`, in parallel per family.
pub fn identity_grid<S: Scalar>(bounds: IdentityBounds) -> Result<IdentityGridReport> {
    let square = |b: u32| -> Vec<(u32, u32)> { (0..=b).flat_map(|x| (0..=b).map(move |y| (x, y))).collect() };
    let unit = sweep("unit_sum", square(bounds.unit_sum), |&(m, n)| {
        let c = verify_unit_sum::<S>(m, n);
        Ok((!c.holds).then(|| c.witness.to_string()))
    })?;
    let cancel = sweep("two_variable_cancellation", square(bounds.cancellation), |&(n, m)| {
        let c = verify_two_variable_cancellation::<S>(n, m);
        Ok((!c.holds).then(|| c.witness.to_string()))
    })?;
    let recip_params: Vec<(u32, u32)> =
        (1..=bounds.reciprocal_l).flat_map(|l| ((l - 1)..=bounds.reciprocal_k).map(move |k| (k, l))).collect();
    let recip = sweep("reciprocal_power", recip_params, |&(k, l)| {
        let c = verify_reciprocal_power::<S>(k, l)?;
        Ok((!c.holds).then(|| c.witness.to_string()))
    })?;
    let b = bounds.convolution;
    let conv_params: Vec<(u32, u32, u32, u32)> = (0..=b)
        .flat_map(|n| (0..=b).flat_map(move |m| (1..=b).flat_map(move |p| (1..=p).map(move |k| (n, m, p, k)))))
        .collect();
    let conv = sweep("binomial_convolution", conv_params, |&(n, m, p, k)| {
        Ok((!verify_vandermonde_vanishing::<S>(n, m, p, k)?).then(|| "nonzero sum".to_string()))
    })?;
    Ok(IdentityGridReport { bounds, families: vec![unit, cancel, recip, conv] })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    #[test]
    fn binomial_sum_a_equals_one() {
        assert!(verify_unit_sum::<Rational>(0, 0).holds);
        assert!(verify_unit_sum::<Rational>(3, 5).holds);
        assert!(verify_unit_sum::<Rational>(8, 8).holds);
    }

    #[test]
    fn binomial_sum_d_vanishes() {
        assert!(verify_two_variable_cancellation::<Rational>(0, 0).holds);
        assert!(verify_two_variable_cancellation::<Rational>(2, 3).holds);
        assert!(verify_two_variable_cancellation::<Rational>(6, 6).holds);
    }

    #[test]
    fn reciprocal_power_identity() {
        assert!(verify_reciprocal_power::<Rational>(0, 1).unwrap().holds);
        assert!(verify_reciprocal_power::<Rational>(5, 3).unwrap().holds);
        assert!(verify_reciprocal_power::<Rational>(12, 6).unwrap().holds);
        assert!(verify_reciprocal_power::<Rational>(1, 3).is_err());
        assert!(verify_reciprocal_power::<Rational>(4, 0).is_err());
    }

    #[test]
    fn small_grid_counts_every_case() {
        let bounds = IdentityBounds { unit_sum: 1, cancellation: 1, reciprocal_l: 2, reciprocal_k: 2, convolution: 1 };
        let r = identity_grid::<Rational>(bounds).unwrap();
        let counts: Vec<usize> = r.families.iter().map(|f| f.cases).collect();
        // reciprocal: l=1 gives k=0..2, l=2 gives k=1..2; convolution: (n,m) in 2x2, p=k=1.
        assert_eq!(counts, vec![4, 4, 5, 4]);
        assert!(r.all_passed());
    }

    #[test]
    fn convolution_vanishes() {
        assert!(verify_vandermonde_vanishing::<Rational>(0, 0, 1, 1).unwrap());
        assert!(verify_vandermonde_vanishing::<Rational>(2, 3, 2, 1).unwrap());
        assert!(verify_vandermonde_vanishing::<Rational>(4, 4, 4, 4).unwrap());
        assert!(verify_vandermonde_vanishing::<Rational>(1, 1, 2, 3).is_err());
    }

    #[test]
    fn perturbed_sums_are_detected() {
        // Dropping the last term of the first sum must break the identity.
        let good = binomial_sum_a::<Rational>(2, 2);
        let broken = &good - &expand_binomial_power::<Rational>("z", -5, 3, 0).scale(&binom(4, 2));
        assert_ne!(broken, LaurentPoly::constant(&["z"], Rational::from_i64(1)));
    }

    #[test]
    fn float_field_agrees_on_small_cases() {
        assert!(verify_unit_sum::<f64>(3, 2).holds);
        assert!(verify_two_variable_cancellation::<f64>(2, 2).holds);
    }
}
