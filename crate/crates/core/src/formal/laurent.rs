//! Sparse Laurent polynomials in one or two named variables.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::formal::binom::binom;
use crate::scalar::Scalar;

/// A finitely supported Laurent polynomial with exact coefficients.
///
/// Keys are exponent tuples aligned with `vars`; zero coefficients are never
/// stored, so structural equality is polynomial equality.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentPoly<S> {
    vars: Vec<String>,
    terms: BTreeMap<Vec<i64>, S>,
}

impl<S: Scalar> LaurentPoly<S> {
    pub fn zero(vars: &[&str]) -> Self {
        Self { vars: vars.iter().map(|v| v.to_string()).collect(), terms: BTreeMap::new() }
    }

    pub fn constant(vars: &[&str], c: S) -> Self {
        let mut p = Self::zero(vars);
        p.add_term(vec![0; vars.len()], c);
        p
    }

    pub fn monomial(vars: &[&str], exps: &[i64], c: S) -> Self {
        assert_eq!(vars.len(), exps.len(), "exponent tuple must match the variables");
        let mut p = Self::zero(vars);
        p.add_term(exps.to_vec(), c);
        p
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[i64], &S)> {
        self.terms.iter().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, exps: &[i64]) -> S {
        self.terms.get(exps).cloned().unwrap_or_else(S::zero)
    }

    /// The value of a polynomial in no variables (or a constant one).
    pub fn as_constant(&self) -> Option<S> {
        match self.terms.len() {
            0 => Some(S::zero()),
            1 => {
                let (k, v) = self.terms.iter().next().unwrap();
                k.iter().all(|&e| e == 0).then(|| v.clone())
            }
            _ => None,
        }
    }

    pub fn add_term(&mut self, exps: Vec<i64>, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exps) {
            Some(v) => {
                *v = v.clone() + c;
                if v.is_zero() {
                    self.terms.remove(&exps);
                }
            }
            None => {
                self.terms.insert(exps, c);
            }
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self { vars: self.vars.clone(), terms: BTreeMap::new() };
        }
        Self {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v.clone() * c.clone())).collect(),
        }
    }

    /// Multiplies by the monomial with the given exponents.
    pub fn shift(&self, exps: &[i64]) -> Self {
        Self {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.iter().zip(exps).map(|(a, b)| a + b).collect(), v.clone()))
                .collect(),
        }
    }

    fn var_index(&self, var: &str) -> Result<usize> {
        self.vars.iter().position(|v| v == var).ok_or_else(|| Error::UnknownVariable(var.to_string()))
    }

    /// Coefficient of `var^{-1}`, as a polynomial in the remaining variables.
    pub fn residue(&self, var: &str) -> Result<Self> {
        let idx = self.var_index(var)?;
        let vars: Vec<&str> =
            self.vars.iter().enumerate().filter(|&(i, _)| i != idx).map(|(_, v)| v.as_str()).collect();
        let mut out = Self::zero(&vars);
        for (k, v) in &self.terms {
            if k[idx] == -1 {
                let mut rest = k.clone();
                rest.remove(idx);
                out.add_term(rest, v.clone());
            }
        }
        Ok(out)
    }

    pub fn derivative(&self, var: &str) -> Result<Self> {
        let idx = self.var_index(var)?;
        let mut out = Self { vars: self.vars.clone(), terms: BTreeMap::new() };
        for (k, v) in &self.terms {
            if k[idx] != 0 {
                let mut e = k.clone();
                e[idx] -= 1;
                out.add_term(e, v.clone() * S::from_i64(k[idx]));
            }
        }
        Ok(out)
    }

    /// Lowest and highest exponent of `var` in the support.
    pub fn degree_bounds(&self, var: &str) -> Result<Option<(i64, i64)>> {
        let idx = self.var_index(var)?;
        let mut it = self.terms.keys().map(|k| k[idx]);
        Ok(it.next().map(|first| it.fold((first, first), |(lo, hi), e| (lo.min(e), hi.max(e)))))
    }

    fn check_vars(&self, other: &Self) {
        assert_eq!(self.vars, other.vars, "Laurent polynomials over different variables");
    }
}

impl<S: Scalar> Add for &LaurentPoly<S> {
    type Output = LaurentPoly<S>;
    fn add(self, rhs: Self) -> LaurentPoly<S> {
        self.check_vars(rhs);
        let mut out = self.clone();
        for (k, v) in &rhs.terms {
            out.add_term(k.clone(), v.clone());
        }
        out
    }
}

impl<S: Scalar> Sub for &LaurentPoly<S> {
    type Output = LaurentPoly<S>;
    fn sub(self, rhs: Self) -> LaurentPoly<S> {
        self.check_vars(rhs);
        let mut out = self.clone();
        for (k, v) in &rhs.terms {
            out.add_term(k.clone(), -v.clone());
        }
        out
    }
}

impl<S: Scalar> Neg for &LaurentPoly<S> {
    type Output = LaurentPoly<S>;
    fn neg(self) -> LaurentPoly<S> {
        self.scale(&-S::one())
    }
}

impl<S: Scalar> Mul for &LaurentPoly<S> {
    type Output = LaurentPoly<S>;
    // Monomials multiply by adding exponents.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: Self) -> LaurentPoly<S> {
        self.check_vars(rhs);
        let mut out = LaurentPoly { vars: self.vars.clone(), terms: BTreeMap::new() };
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                let e = a.iter().zip(b).map(|(p, q)| p + q).collect();
                out.add_term(e, x.clone() * y.clone());
            }
        }
        out
    }
}

impl<S: Scalar> fmt::Display for LaurentPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (k, v)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({v})")?;
            for (name, e) in self.vars.iter().zip(k) {
                match e {
                    0 => {}
                    1 => write!(f, "*{name}")?,
                    _ => write!(f, "*{name}^{e}")?,
                }
            }
        }
        Ok(())
    }
}

/// `var^{base_offset} (1 + var)^{exponent}`.
///
/// Nonnegative exponents give the exact polynomial; negative exponents give
/// the expansion in nonnegative powers of `var`, keeping powers
/// `var^{base_offset + k}` for `k <= truncation_order`.
pub fn expand_binomial_power<S: Scalar>(
    var: &str,
    base_offset: i64,
    exponent: i64,
    truncation_order: usize,
) -> LaurentPoly<S> {
    let top = if exponent >= 0 { exponent } else { truncation_order as i64 };
    let mut p = LaurentPoly::zero(&[var]);
    for k in 0..=top {
        p.add_term(vec![base_offset + k], binom::<S>(exponent, k));
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;
    use proptest::prelude::*;

    fn q(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    fn poly(coeffs: &[(i64, i64)]) -> LaurentPoly<Rational> {
        let mut p = LaurentPoly::zero(&["z"]);
        for &(e, c) in coeffs {
            p.add_term(vec![e], q(c));
        }
        p
    }

    #[test]
    fn residues() {
        assert_eq!(poly(&[(-1, 1)]).residue("z").unwrap().as_constant(), Some(q(1)));
        let p = expand_binomial_power::<Rational>("z", -2, 3, 0);
        assert_eq!(p.residue("z").unwrap().as_constant(), Some(q(3)));
        assert_eq!(poly(&[(2, 1)]).residue("z").unwrap().as_constant(), Some(q(0)));
        assert!(matches!(poly(&[(0, 1)]).residue("w"), Err(Error::UnknownVariable(_))));
    }

    #[test]
    fn bivariate_residue_keeps_the_other_variable() {
        let p = LaurentPoly::monomial(&["z1", "z2"], &[-1, 3], q(5));
        let r = p.residue("z1").unwrap();
        assert_eq!(r.vars(), &["z2".to_string()]);
        assert_eq!(r.coefficient(&[3]), q(5));
        assert!(p.residue("z2").unwrap().is_zero());
    }

    #[test]
    fn binomial_powers() {
        assert_eq!(expand_binomial_power::<Rational>("z", 0, 2, 7), poly(&[(0, 1), (1, 2), (2, 1)]));
        assert_eq!(expand_binomial_power::<Rational>("z", 0, -1, 3), poly(&[(0, 1), (1, -1), (2, 1), (3, -1)]));
        assert_eq!(expand_binomial_power::<Rational>("z", 0, -3, 2), poly(&[(0, 1), (1, -3), (2, 6)]));
    }

    #[test]
    fn inverse_powers_multiply_to_one_up_to_truncation() {
        let a = expand_binomial_power::<Rational>("z", 0, 4, 0);
        let b = expand_binomial_power::<Rational>("z", 0, -4, 10);
        let prod = &a * &b;
        for e in 1..=10 {
            assert_eq!(prod.coefficient(&[e]), q(0));
        }
        assert_eq!(prod.coefficient(&[0]), q(1));
    }

    #[test]
    fn degree_bounds_and_display() {
        let p = poly(&[(-3, 2), (4, -1)]);
        assert_eq!(p.degree_bounds("z").unwrap(), Some((-3, 4)));
        assert_eq!(poly(&[]).degree_bounds("z").unwrap(), None);
        assert_eq!(poly(&[]).to_string(), "0");
        assert_eq!(poly(&[(1, 3)]).to_string(), "(3)*z");
    }

    proptest! {
        #[test]
        fn derivative_has_no_residue(
            coeffs in proptest::collection::vec((-6i64..6, -5i64..5), 0..10)
        ) {
            let p = poly(&coeffs);
            prop_assert!(p.derivative("z").unwrap().residue("z").unwrap().is_zero());
        }

        #[test]
        fn product_commutes(
            a in proptest::collection::vec((-4i64..4, -3i64..3), 0..6),
            b in proptest::collection::vec((-4i64..4, -3i64..3), 0..6),
        ) {
            let (a, b) = (poly(&a), poly(&b));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a + &b) - &b, a);
        }
    }
}
