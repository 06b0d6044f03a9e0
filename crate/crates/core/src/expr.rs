//! Text syntax for elements of a vertex operator algebra.
//!
//! ```text
//! element := term ( ('+' | '-') term )*
//! term    := [rational] gen* 'vac'
//! gen     := 'a(' -int ')' | 'L(' -int ')'
//! ```
//!
//! A leading sign is allowed on the first term. Generators act from the
//! right, so `a(-1)a(-2)vac` means `a(-1)(a(-2)vac)`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::voa::{GradedVector, StateSpace, Voa};
use crate::Rational;

/// A generator mode `a(n)` or `L(n)` with `n < 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Gen {
    pub symbol: char,
    pub index: i64,
    /// Byte offset of the generator in the source text.
    pub pos: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub coeff: Rational,
    pub gens: Vec<Gen>,
}

/// Parse tree of an element; equality ignores source positions.
#[derive(Clone, Debug, Default)]
pub struct ElementExpr {
    pub terms: Vec<Term>,
}

impl PartialEq for ElementExpr {
    fn eq(&self, other: &Self) -> bool {
        let key = |t: &Term| (t.coeff.clone(), t.gens.iter().map(|g| (g.symbol, g.index)).collect::<Vec<_>>());
        self.terms.len() == other.terms.len() && self.terms.iter().zip(&other.terms).all(|(a, b)| key(a) == key(b))
    }
}

impl Eq for ElementExpr {}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { pos: self.pos, msg: msg.into() })
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn eat(&mut self, s: &str) -> bool {
        if self.rest().starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Option<&'a str> {
        let len = self.rest().bytes().take_while(u8::is_ascii_digit).count();
        (len > 0).then(|| {
            let d = &self.rest()[..len];
            self.pos += len;
            d
        })
    }

    fn rational(&mut self) -> Result<Option<Rational>> {
        let Some(num) = self.digits() else { return Ok(None) };
        let num: BigInt = num.parse().expect("ascii digits");
        self.skip_ws();
        if self.eat("/") {
            self.skip_ws();
            let Some(den) = self.digits() else { return self.err("expected a denominator after `/`") };
            let den: BigInt = den.parse().expect("ascii digits");
            if den.is_zero() {
                return self.err("zero denominator");
            }
            return Ok(Some(Rational::new(num, den)));
        }
        Ok(Some(Rational::from_integer(num)))
    }

    fn term(&mut self, sign: Rational) -> Result<Term> {
        self.skip_ws();
        let coeff = match self.rational()? {
            Some(c) => c * sign,
            None => sign,
        };
        let mut gens = Vec::new();
        loop {
            self.skip_ws();
            if self.eat("vac") {
                return Ok(Term { coeff, gens });
            }
            let start = self.pos;
            let symbol = match self.peek() {
                Some(c @ ('a' | 'L')) => c,
                Some(c) => return self.err(format!("expected a generator or `vac`, found `{c}`")),
                None => return self.err("expected a generator or `vac`, found end of input"),
            };
            self.pos += 1;
            if !self.eat("(") {
                return self.err("expected `(`");
            }
            self.skip_ws();
            if !self.eat("-") {
                return self.err("mode index must be a negative integer");
            }
            let Some(d) = self.digits() else { return self.err("expected digits") };
            let index: i64 = match d.parse::<i64>() {
                Ok(v) if v > 0 => -v,
                _ => return self.err("mode index must be a negative integer"),
            };
            self.skip_ws();
            if !self.eat(")") {
                return self.err("expected `)`");
            }
            gens.push(Gen { symbol, index, pos: start });
        }
    }
}

/// Parses an element; errors carry the byte offset of the problem.
pub fn parse_element(src: &str) -> Result<ElementExpr> {
    let mut p = Parser { src, pos: 0 };
    p.skip_ws();
    let mut sign = Rational::one();
    if p.eat("-") {
        sign = -sign;
    } else {
        p.eat("+");
    }
    let mut terms = vec![p.term(sign)?];
    loop {
        p.skip_ws();
        if p.pos == src.len() {
            return Ok(ElementExpr { terms });
        }
        let sign = if p.eat("+") {
            Rational::one()
        } else if p.eat("-") {
            -Rational::one()
        } else {
            return p.err("expected `+`, `-` or end of input");
        };
        terms.push(p.term(sign)?);
    }
}

impl fmt::Display for ElementExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, t) in self.terms.iter().enumerate() {
            let neg = t.coeff.is_negative();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let c = t.coeff.abs();
            if !c.is_one() {
                write!(f, "{c} ")?;
            }
            for g in &t.gens {
                write!(f, "{}({})", g.symbol, g.index)?;
            }
            write!(f, "vac")?;
        }
        Ok(())
    }
}

impl ElementExpr {
    /// Largest weight among the terms; every generator raises weight by `-index`.
    pub fn weight(&self) -> usize {
        self.terms.iter().map(|t| t.gens.iter().map(|g| (-g.index) as usize).sum()).max().unwrap_or(0)
    }

    /// Evaluates in `voa`, failing on generators the algebra lacks.
    pub fn evaluate<S: Scalar>(&self, voa: &Voa<S>) -> Result<GradedVector<S>> {
        let expected = match voa.space().as_ref() {
            StateSpace::Fock(_) => 'a',
            StateSpace::Virasoro(_) => 'L',
        };
        let mut out = GradedVector::zero();
        for t in &self.terms {
            let mut v = voa.vacuum();
            for g in t.gens.iter().rev() {
                if g.symbol != expected {
                    return Err(Error::UnknownGenerator {
                        generator: format!("{}({}) at offset {}", g.symbol, g.index, g.pos),
                        algebra: voa.id(),
                    });
                }
                v = voa.generator(g.index, &v)?;
            }
            let c = S::from_bigint(t.coeff.numer()) / S::from_bigint(t.coeff.denom());
            out.add_scaled(&v, &c);
        }
        Ok(out)
    }
}

/// Parses and evaluates in one step.
pub fn element<S: Scalar>(voa: &Voa<S>, src: &str) -> Result<GradedVector<S>> {
    parse_element(src)?.evaluate(voa)
}
