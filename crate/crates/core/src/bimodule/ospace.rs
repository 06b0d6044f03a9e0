//! Generator families of the relation spaces and their truncated spans.

use std::collections::HashMap;
use std::sync::Arc;
use std::time::Instant;

use parking_lot::Mutex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bimodule::products::{residue_family, shift_element, star_general, ProductParams};
use crate::error::{Error, Result};
use crate::linalg::{Elimination, FilteredSpace, SpanBasis};
use crate::scalar::Scalar;
use crate::voa::{GradedVector, Voa};

/// Which relation space to span.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OKind {
    /// Shift relations, circle products and the residue family.
    Oprime,
    /// Outer products of associator defects.
    Odoubleprime,
    /// Level-`p` relations pushed through two products.
    Otripleprime,
    /// All of the above.
    Ofull,
}

impl OKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "oprime" => Ok(OKind::Oprime),
            "odoubleprime" => Ok(OKind::Odoubleprime),
            "otripleprime" => Ok(OKind::Otripleprime),
            "ofull" => Ok(OKind::Ofull),
            _ => Err(Error::Config(format!("unknown relation space `{s}`"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            OKind::Oprime => "oprime",
            OKind::Odoubleprime => "odoubleprime",
            OKind::Otripleprime => "otripleprime",
            OKind::Ofull => "ofull",
        }
    }
}

/// A relation space at levels `(n, m)` truncated to weights `<= cutoff`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OSpaceSpec {
    pub kind: OKind,
    pub n: u32,
    pub m: u32,
    pub cutoff: usize,
    /// Largest auxiliary level `p`, `p1`, `p2`, `p3` enumerated.
    pub aux_bound: u32,
}

impl OSpaceSpec {
    pub fn new(kind: OKind, n: u32, m: u32, cutoff: usize) -> Self {
        Self { kind, n, m, cutoff, aux_bound: n.max(m) + 2 }
    }

    pub fn with_aux_bound(mut self, aux_bound: u32) -> Self {
        self.aux_bound = aux_bound;
        self
    }

    pub fn with_cutoff(mut self, cutoff: usize) -> Self {
        self.cutoff = cutoff;
        self
    }
}

pub type Key = (usize, usize);

/// A single generator of a relation space, by its inputs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum OGenerator {
    /// `L(-1)u + (L(0)+m-n)u`.
    Shift { u: Key },
    /// `Res_z (1+z)^{wt u+m+s} z^{-(n+m+2+k)} Y(u,z) v` with `k >= s >= 0`.
    Residue { u: Key, v: Key, k: u32, s: u32 },
    /// `u *^n_{m,p3} ((a *^{p3}_{p1,p2} b) *^{p3}_{m,p1} c - a *^{p3}_{m,p2} (b *^{p2}_{m,p1} c))`.
    Associator { u: Key, a: Key, b: Key, c: Key, p1: u32, p2: u32, p3: u32 },
    /// `(u *^n_{p,p} o) *^n_{m,p} v` for a level `(p,p)` generator `o`.
    LevelMix { u: Key, o: Box<OGenerator>, p: u32, v: Key },
}

impl OGenerator {
    /// Upper bound on the weights of the generator's value.
    pub fn nominal_top(&self, n: u32, m: u32) -> usize {
        let (n, m) = (n as usize, m as usize);
        match self {
            OGenerator::Shift { u } => {
                if u.0 == 0 {
                    0
                } else {
                    u.0 + 1
                }
            }
            OGenerator::Residue { u, v, k, .. } => u.0 + v.0 + n + m + 1 + *k as usize,
            OGenerator::Associator { u, a, b, c, p1, p2, p3 } => {
                let (p1, p2, p3) = (*p1 as usize, *p2 as usize, *p3 as usize);
                let w = a.0 + b.0 + c.0;
                u.0 + n + m + (w + p1 + 2 * p3 + m).max(w + 2 * m + p2 + p3)
            }
            OGenerator::LevelMix { u, o, p, v } => {
                let p = *p as usize;
                u.0 + o.nominal_top(p as u32, p as u32) + p + n + v.0 + m + n
            }
        }
    }

    pub fn evaluate<S: Scalar>(&self, voa: &Voa<S>, n: u32, m: u32) -> Result<GradedVector<S>> {
        let e = |k: &Key| GradedVector::<S>::basis(k.0, k.1);
        match self {
            OGenerator::Shift { u } => shift_element(voa, &e(u), m, n),
            OGenerator::Residue { u, v, k, s } => residue_family(voa, &e(u), &e(v), m, n, *k, *s),
            OGenerator::Associator { u, a, b, c, p1, p2, p3 } => {
                let (a, b, c) = (e(a), e(b), e(c));
                let ab = star_general(voa, &a, &b, ProductParams::new(*p1, *p2, *p3))?;
                let left = star_general(voa, &ab, &c, ProductParams::new(m, *p1, *p3))?;
                let bc = star_general(voa, &b, &c, ProductParams::new(m, *p1, *p2))?;
                let right = star_general(voa, &a, &bc, ProductParams::new(m, *p2, *p3))?;
                star_general(voa, &e(u), &(&left - &right), ProductParams::new(m, *p3, n))
            }
            OGenerator::LevelMix { u, o, p, v } => {
                let ov = o.evaluate(voa, *p, *p)?;
                let t = star_general(voa, &e(u), &ov, ProductParams::new(*p, *p, n))?;
                star_general(voa, &t, &e(v), ProductParams::new(m, *p, n))
            }
        }
    }

    /// Human-readable form naming the inputs in the element grammar.
    pub fn describe<S: Scalar>(&self, voa: &Voa<S>) -> String {
        let f = |k: &Key| voa.format_basis(k.0, k.1);
        match self {
            OGenerator::Shift { u } => format!("shift({})", f(u)),
            OGenerator::Residue { u, v, k, s } => format!("residue({}, {}, k={k}, s={s})", f(u), f(v)),
            OGenerator::Associator { u, a, b, c, p1, p2, p3 } => {
                format!("associator(u={}, a={}, b={}, c={}, p1={p1}, p2={p2}, p3={p3})", f(u), f(a), f(b), f(c))
            }
            OGenerator::LevelMix { u, o, p, v } => {
                format!("level_mix(u={}, o={}, p={p}, v={})", f(u), o.describe(voa), f(v))
            }
        }
    }
}

fn keys_by_weight<S: Scalar>(voa: &Voa<S>, max: usize) -> Vec<Vec<Key>> {
    (0..=max).map(|w| (0..voa.dim(w)).map(|i| (w, i)).collect()).collect()
}

/// All pairs of keys with weights summing to at most `budget`.
fn pairs(by_w: &[Vec<Key>], budget: usize) -> Vec<(Key, Key)> {
    let mut out = Vec::new();
    for wu in 0..by_w.len().min(budget + 1) {
        for wv in 0..by_w.len().min(budget - wu + 1) {
            for &u in &by_w[wu] {
                for &v in &by_w[wv] {
                    out.push((u, v));
                }
            }
        }
    }
    out
}

/// Generators of the smallest relation space with nominal top weight `<= cutoff`.
pub fn oprime_candidates<S: Scalar>(voa: &Voa<S>, n: u32, m: u32, cutoff: usize) -> Vec<OGenerator> {
    let by_w = keys_by_weight(voa, cutoff);
    let mut out: Vec<OGenerator> =
        by_w.iter().flatten().map(|&u| OGenerator::Shift { u }).filter(|g| g.nominal_top(n, m) <= cutoff).collect();
    let base = (n + m + 1) as usize;
    if cutoff < base {
        return out;
    }
    for k in 0..=(cutoff - base) as u32 {
        for (u, v) in pairs(&by_w, cutoff - base - k as usize) {
            for s in 0..=k {
                out.push(OGenerator::Residue { u, v, k, s });
            }
        }
    }
    out
}

pub fn odoubleprime_candidates<S: Scalar>(voa: &Voa<S>, n: u32, m: u32, cutoff: usize, aux: u32) -> Vec<OGenerator> {
    let by_w = keys_by_weight(voa, cutoff);
    let mut out = Vec::new();
    let (nn, mm) = (n as usize, m as usize);
    for p1 in 0..=aux {
        for p2 in 0..=aux {
            for p3 in 0..=aux {
                let (q1, q2, q3) = (p1 as usize, p2 as usize, p3 as usize);
                let base = nn + mm + (q1 + 2 * q3 + mm).max(2 * mm + q2 + q3);
                if base > cutoff {
                    continue;
                }
                let budget = cutoff - base;
                for (u, a) in pairs(&by_w, budget) {
                    for (b, c) in pairs(&by_w, budget - u.0 - a.0) {
                        out.push(OGenerator::Associator { u, a, b, c, p1, p2, p3 });
                    }
                }
            }
        }
    }
    out
}

pub fn otripleprime_candidates<S: Scalar>(voa: &Voa<S>, n: u32, m: u32, cutoff: usize, aux: u32) -> Vec<OGenerator> {
    let by_w = keys_by_weight(voa, cutoff);
    let mut out = Vec::new();
    for p in 0..=aux {
        let base = (p + 2 * n + m) as usize;
        if base > cutoff {
            continue;
        }
        for o in oprime_candidates(voa, p, p, cutoff - base) {
            let to = o.nominal_top(p, p);
            for (u, v) in pairs(&by_w, cutoff - base - to) {
                out.push(OGenerator::LevelMix { u, o: Box::new(o.clone()), p, v });
            }
        }
    }
    out
}

pub fn candidates<S: Scalar>(voa: &Voa<S>, spec: &OSpaceSpec) -> Vec<OGenerator> {
    let OSpaceSpec { kind, n, m, cutoff, aux_bound } = *spec;
    let mut out = Vec::new();
    if matches!(kind, OKind::Oprime | OKind::Ofull) {
        out.extend(oprime_candidates(voa, n, m, cutoff));
    }
    if matches!(kind, OKind::Odoubleprime | OKind::Ofull) {
        out.extend(odoubleprime_candidates(voa, n, m, cutoff, aux_bound));
    }
    if matches!(kind, OKind::Otripleprime | OKind::Ofull) {
        out.extend(otripleprime_candidates(voa, n, m, cutoff, aux_bound));
    }
    out
}

/// The span of a relation space inside `F_W`, in echelon form.
#[derive(Debug)]
pub struct OSpan<S> {
    pub spec: OSpaceSpec,
    pub space: FilteredSpace,
    pub basis: SpanBasis<S>,
    pub generators: usize,
    pub build_seconds: f64,
}

const CHUNK: usize = 512;

impl<S: Scalar> OSpan<S> {
    pub fn build(voa: &Voa<S>, spec: OSpaceSpec, mode: Elimination) -> Result<Self> {
        let needed = spec.cutoff + 1;
        if voa.max_weight() < needed {
            return Err(Error::WeightRange { needed, max: voa.max_weight() });
        }
        let start = Instant::now();
        let space = FilteredSpace::new(voa.dims(spec.cutoff), 1);
        let mut gens = candidates(voa, &spec);
        gens.sort_by_key(|g| g.nominal_top(spec.n, spec.m));
        let mut basis = SpanBasis::new(space.dim(), mode);
        for chunk in gens.chunks(CHUNK) {
            if basis.rank() == space.dim() {
                break;
            }
            let rows: Vec<Vec<S>> = chunk
                .par_iter()
                .map(|g| g.evaluate(voa, spec.n, spec.m).and_then(|v| space.dense(&v)))
                .collect::<Result<_>>()?;
            for row in &rows {
                basis.insert(row);
            }
        }
        Ok(Self { spec, space, basis, generators: gens.len(), build_seconds: start.elapsed().as_secs_f64() })
    }

    pub fn rank(&self) -> usize {
        self.basis.rank()
    }

    pub fn ambient_dim(&self) -> usize {
        self.space.dim()
    }

    pub fn quotient_dim(&self) -> usize {
        self.ambient_dim() - self.rank()
    }

    /// Normal form of `v` modulo the span.
    pub fn reduce(&self, v: &GradedVector<S>) -> Result<GradedVector<S>> {
        let dense = self.space.dense(v)?;
        Ok(self.space.vector(&self.basis.reduce(&dense)))
    }

    pub fn contains(&self, v: &GradedVector<S>) -> Result<bool> {
        Ok(self.reduce(v)?.is_zero())
    }

    /// Basis elements whose classes form a basis of the truncated quotient.
    pub fn quotient_basis(&self) -> Vec<Key> {
        self.basis
            .free_columns()
            .into_iter()
            .map(|c| {
                let (w, i, _) = self.space.key(c);
                (w, i)
            })
            .collect()
    }
}

/// Spans shared between checks, keyed by the algebra and the spec.
#[derive(Debug)]
pub struct SpanCache<S> {
    mode: Elimination,
    spans: Mutex<HashMap<(String, OSpaceSpec), Arc<OSpan<S>>>>,
}

impl<S: Scalar> SpanCache<S> {
    pub fn new(mode: Elimination) -> Self {
        Self { mode, spans: Mutex::new(HashMap::new()) }
    }

    /// Builds outside the lock, so a build may run parallel work that
    /// itself asks the cache for spans. Concurrent requests for a missing
    /// span can build it twice; the first insertion wins.
    pub fn get(&self, voa: &Voa<S>, spec: OSpaceSpec) -> Result<Arc<OSpan<S>>> {
        let key = (voa.id(), spec);
        if let Some(s) = self.spans.lock().get(&key) {
            return Ok(s.clone());
        }
        let built = Arc::new(OSpan::build(voa, spec, self.mode)?);
        Ok(self.spans.lock().entry(key).or_insert(built).clone())
    }

    pub fn len(&self) -> usize {
        self.spans.lock().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
