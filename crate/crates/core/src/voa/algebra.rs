//! The concrete vertex operator algebras.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::{sign, Scalar};
use crate::voa::basis::Partition;
use crate::voa::fock::FockSpace;
use crate::voa::modes::{ModeEngine, StateSpace};
use crate::voa::vector::GradedVector;
use crate::voa::virasoro::VirasoroSpace;

/// Which algebra to build.
#[derive(Clone, Debug, PartialEq)]
pub enum VoaKind<S> {
    /// Rank-one Heisenberg VOA `M(1)`, generated by `a = α(-1)·vac`.
    Heisenberg,
    /// Universal Virasoro VOA of central charge `c`.
    Virasoro(S),
    /// Simple Virasoro VOA at `c = 1/2`.
    Ising,
}

impl<S: Scalar> VoaKind<S> {
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "heisenberg" => Ok(VoaKind::Heisenberg),
            "ising" => Ok(VoaKind::Ising),
            _ => {
                let c = s.strip_prefix("virasoro:").ok_or_else(|| Error::Config(format!("unknown algebra `{s}`")))?;
                S::parse_scalar(c)
                    .map(VoaKind::Virasoro)
                    .ok_or_else(|| Error::Config(format!("bad central charge `{c}`")))
            }
        }
    }

    pub fn id(&self) -> String {
        match self {
            VoaKind::Heisenberg => "heisenberg".into(),
            VoaKind::Virasoro(c) => format!("virasoro:{c}"),
            VoaKind::Ising => "ising".into(),
        }
    }

    pub fn central_charge(&self) -> S {
        match self {
            VoaKind::Heisenberg => S::one(),
            VoaKind::Virasoro(c) => c.clone(),
            VoaKind::Ising => S::from_ratio(1, 2),
        }
    }

    pub fn is_heisenberg(&self) -> bool {
        matches!(self, VoaKind::Heisenberg)
    }
}

fn as_weight_error(e: Error) -> Error {
    match e {
        Error::LevelRange { needed, max } => Error::WeightRange { needed, max },
        e => e,
    }
}

/// A VOA truncated at a maximal weight, with memoized exact modes.
#[derive(Debug)]
pub struct Voa<S = crate::Rational> {
    kind: VoaKind<S>,
    engine: ModeEngine<S>,
}

impl<S: Scalar> Voa<S> {
    pub fn new(kind: VoaKind<S>, max_weight: usize) -> Result<Self> {
        let space = match &kind {
            VoaKind::Heisenberg => StateSpace::Fock(FockSpace::new(S::zero(), max_weight)),
            VoaKind::Virasoro(c) => {
                StateSpace::Virasoro(VirasoroSpace::universal(c.clone(), S::zero(), true, max_weight))
            }
            VoaKind::Ising => {
                if max_weight < 6 {
                    return Err(Error::Precondition(format!(
                        "the simple quotient needs max weight at least 6, got {max_weight}"
                    )));
                }
                StateSpace::Virasoro(VirasoroSpace::simple(S::from_ratio(1, 2), S::zero(), true, max_weight)?)
            }
        };
        Ok(Self { kind, engine: ModeEngine::new(Arc::new(space)) })
    }

    /// Simple quotient of the universal Virasoro VOA; only `c = 1/2` is supported.
    pub fn simple_quotient(c: S, max_weight: usize) -> Result<Self> {
        if c != S::from_ratio(1, 2) {
            return Err(Error::UnsupportedCentralCharge(c.to_string()));
        }
        Self::new(VoaKind::Ising, max_weight)
    }

    pub fn kind(&self) -> &VoaKind<S> {
        &self.kind
    }

    pub fn id(&self) -> String {
        self.kind.id()
    }

    pub fn max_weight(&self) -> usize {
        self.engine.space().max_level()
    }

    pub fn space(&self) -> &Arc<StateSpace<S>> {
        self.engine.space()
    }

    pub fn engine(&self) -> &ModeEngine<S> {
        &self.engine
    }

    pub fn dim(&self, weight: usize) -> usize {
        self.space().dim(weight)
    }

    pub fn dims(&self, max_weight: usize) -> Vec<usize> {
        (0..=max_weight).map(|w| self.dim(w)).collect()
    }

    /// All basis keys `(weight, index)` with weight at most `max_weight`.
    pub fn basis_keys(&self, max_weight: usize) -> Vec<(usize, usize)> {
        (0..=max_weight.min(self.max_weight())).flat_map(|w| (0..self.dim(w)).map(move |i| (w, i))).collect()
    }

    pub fn label(&self, weight: usize, index: usize) -> &Partition {
        self.space().label(weight, index)
    }

    pub fn generator_symbol(&self) -> &'static str {
        if self.kind.is_heisenberg() {
            "a"
        } else {
            "L"
        }
    }

    /// Basis element in the element grammar, e.g. `a(-2)a(-1)vac`.
    pub fn format_basis(&self, weight: usize, index: usize) -> String {
        let g = self.generator_symbol();
        let mut s: String = self.label(weight, index).iter().map(|n| format!("{g}(-{n})")).collect();
        s.push_str("vac");
        s
    }

    /// A vector in the element grammar; parses back to itself.
    pub fn format(&self, v: &GradedVector<S>) -> String {
        if v.is_zero() {
            return "0 vac".into();
        }
        let mut out = String::new();
        for (k, (w, i, c)) in v.iter().enumerate() {
            let text = c.to_string();
            let (neg, mag) = match text.strip_prefix('-') {
                Some(m) => (true, m.to_string()),
                None => (false, text),
            };
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if mag != "1" {
                out.push_str(&mag);
                out.push(' ');
            }
            out.push_str(&self.format_basis(w, i));
        }
        out
    }

    pub fn vacuum(&self) -> GradedVector<S> {
        GradedVector::basis(0, 0)
    }

    /// The conformal vector `ω`.
    pub fn conformal(&self) -> GradedVector<S> {
        match self.space().as_ref() {
            StateSpace::Fock(f) => {
                let idx = f.basis().index_of(&[1, 1]).expect("max weight at least 2");
                GradedVector::term(2, idx, S::from_ratio(1, 2))
            }
            StateSpace::Virasoro(v) => {
                let omega = v.pbw().basis().index_of(&[2]).expect("max weight at least 2");
                v.from_universal(&GradedVector::basis(2, omega))
            }
        }
    }

    fn check_range(&self, v: &GradedVector<S>) -> Result<()> {
        match v.top_weight() {
            Some(w) if w > self.max_weight() => Err(Error::WeightRange { needed: w, max: self.max_weight() }),
            _ => Ok(()),
        }
    }

    /// `u_k v`.
    pub fn mode(&self, u: &GradedVector<S>, k: i64, v: &GradedVector<S>) -> Result<GradedVector<S>> {
        self.check_range(u)?;
        self.check_range(v)?;
        let mut out = GradedVector::zero();
        for (w, i, c) in u.iter() {
            let word = self.label(w, i).clone();
            let t = self.engine.word_mode_vec(&word, k, v).map_err(as_weight_error)?;
            out.add_scaled(&t, c);
        }
        Ok(out)
    }

    /// `u_k v` for basis elements.
    pub fn mode_basis(&self, u: (usize, usize), k: i64, v: (usize, usize)) -> Result<Arc<GradedVector<S>>> {
        let word = self.label(u.0, u.1).clone();
        self.engine.word_mode(&word, k, v.0, v.1).map_err(as_weight_error)
    }

    /// `L(n) v`.
    pub fn virasoro(&self, n: i64, v: &GradedVector<S>) -> Result<GradedVector<S>> {
        match self.space().as_ref() {
            StateSpace::Virasoro(space) => {
                self.check_range(v)?;
                v.map_linear(|w, i| space.virasoro(n, w, i)).map_err(as_weight_error)
            }
            StateSpace::Fock(_) => self.mode(&self.conformal(), n + 1, v),
        }
    }

    /// Applies a generator `a(n)` (Heisenberg) or `L(n)` (Virasoro).
    pub fn generator(&self, n: i64, v: &GradedVector<S>) -> Result<GradedVector<S>> {
        self.check_range(v)?;
        match self.space().as_ref() {
            StateSpace::Fock(f) => v.map_linear(|w, i| f.alpha(n, w, i)).map_err(as_weight_error),
            StateSpace::Virasoro(_) => self.virasoro(n, v),
        }
    }

    /// `L(0)` acts on weight components by their weight.
    pub fn l0(&self, v: &GradedVector<S>) -> GradedVector<S> {
        GradedVector::from_terms(v.iter().map(|(w, i, c)| ((w, i), c.clone() * S::from_i64(w as i64))))
    }

    /// `e^{L(1)} (-1)^{L(0)} v`.
    pub fn phi(&self, v: &GradedVector<S>) -> Result<GradedVector<S>> {
        let mut term = GradedVector::from_terms(v.iter().map(|(w, i, c)| ((w, i), c.clone() * sign::<S>(w as i64))));
        let mut out = term.clone();
        let mut j = 1i64;
        while !term.is_zero() {
            term = self.virasoro(1, &term)?.scale(&(S::one() / S::from_i64(j)));
            out.add_scaled(&term, &S::one());
            j += 1;
        }
        Ok(out)
    }

    /// Checks `u_k v = Σ_j (-1)^{k+j+1} L(-1)^j / j! · v_{k+j} u` for every `k`
    /// in `ks`; homogeneous `u`, `v`.
    pub fn skew_symmetry_check(
        &self,
        u: &GradedVector<S>,
        v: &GradedVector<S>,
        ks: impl IntoIterator<Item = i64>,
    ) -> Result<bool> {
        let wsum = (u.top_weight().unwrap_or(0) + v.top_weight().unwrap_or(0)) as i64;
        for k in ks {
            let lhs = self.mode(u, k, v)?;
            let mut rhs = GradedVector::zero();
            let mut j = 0i64;
            while k + j < wsum {
                let mut t = self.mode(v, k + j, u)?;
                let mut fact = S::one();
                for step in 1..=j {
                    t = self.virasoro(-1, &t)?;
                    fact = fact * S::from_i64(step);
                }
                rhs.add_scaled(&t, &(sign::<S>(k + j + 1) / fact));
                j += 1;
            }
            if lhs != rhs {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl<S: Scalar> fmt::Display for Voa<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (max weight {})", self.id(), self.max_weight())
    }
}
