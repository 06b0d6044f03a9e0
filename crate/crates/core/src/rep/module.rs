//! Admissible test modules and the level-changing operators on them.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::voa::basis::{size, Partition};
use crate::voa::fock::FockSpace;
use crate::voa::virasoro::VirasoroSpace;
use crate::voa::{GradedVector, ModeEngine, StateSpace, Voa};

/// Levels built beyond the advertised range, so that the mode recursion can
/// pass through states above the target level.
const LEVEL_SLACK: usize = 4;

#[derive(Clone, Debug, PartialEq)]
pub enum ModuleKind<S> {
    /// Heisenberg Fock module on which `α(0)` acts by `lambda`.
    Fock { lambda: S },
    /// Irreducible Virasoro module of central charge `c` and lowest weight `h`.
    Virasoro { c: S, h: S },
}

impl<S: Scalar> fmt::Display for ModuleKind<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModuleKind::Fock { lambda } => write!(f, "fock:{lambda}"),
            ModuleKind::Virasoro { c, h } => write!(f, "virasoro:{c}:{h}"),
        }
    }
}

/// A graded module `M = ⊕_k M(k)` with a mode oracle for `Y_M(u, z)`.
///
/// Levels are counted above the lowest weight. Heisenberg modes come from
/// normal ordering of `α`-modes, which does not touch the recursion used on
/// the algebra itself; Virasoro modes come from the iterate recursion run on
/// the module.
#[derive(Debug)]
pub struct TestModule<S> {
    kind: ModuleKind<S>,
    levels: usize,
    space: Arc<StateSpace<S>>,
    engine: ModeEngine<S>,
}

impl<S: Scalar> TestModule<S> {
    pub fn fock(lambda: S, levels: usize) -> Self {
        let space = Arc::new(StateSpace::Fock(FockSpace::new(lambda.clone(), levels + LEVEL_SLACK)));
        Self { kind: ModuleKind::Fock { lambda }, levels, engine: ModeEngine::new(space.clone()), space }
    }

    /// The irreducible quotient of the Verma module `M(c, h)`.
    pub fn virasoro(c: S, h: S, levels: usize) -> Result<Self> {
        let vs = VirasoroSpace::simple(c.clone(), h.clone(), false, levels + LEVEL_SLACK)?;
        let space = Arc::new(StateSpace::Virasoro(vs));
        Ok(Self { kind: ModuleKind::Virasoro { c, h }, levels, engine: ModeEngine::new(space.clone()), space })
    }

    /// Parses `fock:<λ>` (Heisenberg) or `hw:<h>` (irreducible module of the
    /// algebra's Virasoro central charge).
    pub fn parse(voa: &Voa<S>, spec: &str, levels: usize) -> Result<Self> {
        let (tag, value) = spec
            .split_once(':')
            .ok_or_else(|| Error::Config(format!("module `{spec}` should look like fock:<lambda> or hw:<h>")))?;
        let x = S::parse_scalar(value).ok_or_else(|| Error::Config(format!("bad scalar `{value}`")))?;
        let module = match tag {
            "fock" => Self::fock(x, levels),
            "hw" => Self::virasoro(voa.kind().central_charge(), x, levels)?,
            _ => return Err(Error::Config(format!("unknown module kind `{tag}`"))),
        };
        module.check_compatible(voa)?;
        Ok(module)
    }

    pub fn kind(&self) -> &ModuleKind<S> {
        &self.kind
    }

    pub fn id(&self) -> String {
        self.kind.to_string()
    }

    /// Highest level on which operators may be evaluated.
    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn dim(&self, level: usize) -> usize {
        self.space.dim(level)
    }

    pub fn dims(&self) -> Vec<usize> {
        (0..=self.levels).map(|k| self.dim(k)).collect()
    }

    pub fn label(&self, level: usize, index: usize) -> &Partition {
        self.space.label(level, index)
    }

    pub fn lowest_weight(&self) -> S {
        self.space.lowest_weight()
    }

    pub fn format(&self, v: &GradedVector<S>) -> String {
        let sym = match self.space.as_ref() {
            StateSpace::Fock(_) => "a",
            StateSpace::Virasoro(_) => "L",
        };
        if v.is_zero() {
            return "0 w".into();
        }
        let mut out = String::new();
        for (k, (l, i, c)) in v.iter().enumerate() {
            let word: String = self.label(l, i).iter().map(|n| format!("{sym}(-{n})")).collect();
            let c = c.to_string();
            let (neg, mag) = match c.strip_prefix('-') {
                Some(m) => (true, m.to_string()),
                None => (false, c),
            };
            out.push_str(match (k, neg) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            });
            if mag != "1" {
                out.push_str(&mag);
                out.push(' ');
            }
            out.push_str(&word);
            out.push('w');
        }
        out
    }

    pub fn basis_vector(&self, level: usize, index: usize) -> GradedVector<S> {
        GradedVector::basis(level, index)
    }

    /// The algebra's modes must be the ones this module carries.
    pub fn check_compatible(&self, voa: &Voa<S>) -> Result<()> {
        let ok = match (&self.kind, voa.space().as_ref()) {
            (ModuleKind::Fock { .. }, StateSpace::Fock(_)) => true,
            (ModuleKind::Virasoro { c, .. }, StateSpace::Virasoro(_)) => *c == voa.kind().central_charge(),
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidModule(format!("{} is not a module for {}", self.id(), voa.id())))
        }
    }

    fn check_level(&self, level: usize) -> Result<()> {
        if level > self.levels {
            return Err(Error::LevelRange { needed: level, max: self.levels });
        }
        Ok(())
    }

    fn word_mode(&self, word: &[u32], j: i64, level: usize, index: usize) -> Result<GradedVector<S>> {
        match self.space.as_ref() {
            StateSpace::Fock(f) => f.normal_ordered_mode(word, j, level, index),
            StateSpace::Virasoro(_) => self.engine.word_mode(word, j, level, index).map(|v| (*v).clone()),
        }
    }

    /// `u_j w`, bilinear in both arguments.
    pub fn mode(&self, voa: &Voa<S>, u: &GradedVector<S>, j: i64, w: &GradedVector<S>) -> Result<GradedVector<S>> {
        let mut out = GradedVector::zero();
        for (wt, i, c) in u.iter() {
            let word = voa.label(wt, i).clone();
            for (l, k, d) in w.iter() {
                let target = l as i64 + size(&word) as i64 - j - 1;
                if target < 0 {
                    continue;
                }
                self.check_level(target as usize)?;
                self.check_level(l)?;
                let t = self.word_mode(&word, j, l, k)?;
                out.add_scaled(&t, &(c.clone() * d.clone()));
            }
        }
        Ok(out)
    }

    /// `u_j w` from the iterate recursion, for comparison with the Fock
    /// closed form.
    pub fn mode_by_recursion(
        &self,
        voa: &Voa<S>,
        u: &GradedVector<S>,
        j: i64,
        w: &GradedVector<S>,
    ) -> Result<GradedVector<S>> {
        let mut out = GradedVector::zero();
        for (wt, i, c) in u.iter() {
            let word = voa.label(wt, i).clone();
            let t = self.engine.word_mode_vec(&word, j, w)?;
            out.add_scaled(&t, c);
        }
        Ok(out)
    }

    /// `o_{n,m}(u) w = u_{wt u + m - n - 1} w` for `w` in level `m`, taken
    /// componentwise in the weight of `u`.
    pub fn o_action(
        &self,
        voa: &Voa<S>,
        u: &GradedVector<S>,
        w: &GradedVector<S>,
        n: usize,
    ) -> Result<GradedVector<S>> {
        self.check_level(n)?;
        let Some(m) = w.weight() else {
            if w.is_zero() {
                return Ok(GradedVector::zero());
            }
            return Err(Error::Precondition("o-action needs a vector from a single level".into()));
        };
        self.check_level(m)?;
        let mut out = GradedVector::zero();
        for (wt, comp) in u.components() {
            let j = wt as i64 + m as i64 - n as i64 - 1;
            out = &out + &self.mode(voa, &comp, j, w)?;
        }
        Ok(out)
    }

    /// Matrix of `o_{n,m}(u)` in the level bases, as rows indexed by `M(n)`.
    pub fn o_matrix(&self, voa: &Voa<S>, u: &GradedVector<S>, n: usize, m: usize) -> Result<LevelMap<S>> {
        let mut cols = Vec::with_capacity(self.dim(m));
        for k in 0..self.dim(m) {
            cols.push(self.o_action(voa, u, &GradedVector::basis(m, k), n)?);
        }
        let entries = (0..self.dim(n)).map(|r| cols.iter().map(|c| c.coeff(n, r)).collect()).collect();
        Ok(LevelMap { source: m, target: n, entries })
    }
}

/// `o_{n,m}(u)` as a matrix from level `source` to level `target`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LevelMap<S> {
    pub source: usize,
    pub target: usize,
    #[serde(skip)]
    pub entries: Vec<Vec<S>>,
}

impl<S: Scalar> LevelMap<S> {
    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(|c| c.is_zero())
    }
}
