//! Randomized membership suites for the product calculus.
//!
//! Each suite draws its cases sequentially from a seeded [`Sampler`], builds
//! every span it needs up front, and then evaluates the cases in parallel.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::bimodule::ospace::{OGenerator, OKind, OSpaceSpec, SpanCache};
use crate::bimodule::products::{residue_binomial_power, star_bar, star_general, star_right, ProductParams};
use crate::error::{Error, Result};
use crate::sampling::Sampler;
use crate::scalar::Scalar;
use crate::voa::{GradedVector, Voa};

/// Spans used for membership sit at least two weights above the residual's
/// top weight, and never below `base`. Cases needing more than `cap` are
/// redrawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Headroom {
    pub base: usize,
    pub cap: usize,
}

impl Headroom {
    pub fn new(base: usize, cap: usize) -> Self {
        Self { base, cap }
    }

    pub fn cutoff(&self, top: usize) -> Option<usize> {
        let need = self.base.max(top + 2);
        (need <= self.cap).then_some(need)
    }
}

type Residual<S> = Box<dyn Fn(&Voa<S>) -> Result<GradedVector<S>> + Send + Sync>;

/// A claim that some computed vector lies in a relation space.
pub struct Claim<S> {
    pub check: &'static str,
    pub inputs: Value,
    pub kind: OKind,
    pub n: u32,
    pub m: u32,
    pub nominal_top: usize,
    pub residual: Residual<S>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Failure {
    pub check: String,
    pub inputs: Value,
    /// Normal form of the residual modulo the span; zero would have passed.
    pub residual: String,
    /// A single command that rechecks the unreduced residual.
    pub repro: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpanSummary {
    pub kind: OKind,
    pub n: u32,
    pub m: u32,
    pub cutoff: usize,
    pub aux_bound: u32,
    pub ambient_dim: usize,
    pub rank: usize,
    pub generators: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckCount {
    pub cases: usize,
    pub passed: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub suite: String,
    pub algebra: String,
    pub seed: u64,
    pub headroom: Headroom,
    pub cases: usize,
    pub passed: usize,
    /// Draws discarded because their span would exceed the headroom cap.
    pub redrawn: usize,
    pub by_check: BTreeMap<String, CheckCount>,
    pub spans: Vec<SpanSummary>,
    pub failures: Vec<Failure>,
}

impl CheckReport {
    pub fn all_passed(&self) -> bool {
        self.failures.is_empty() && self.passed == self.cases
    }
}

/// Decides every claim; the claims must respect `headroom`.
pub fn run_claims<S: Scalar>(
    voa: &Voa<S>,
    cache: &SpanCache<S>,
    headroom: Headroom,
    suite: &str,
    seed: u64,
    redrawn: usize,
    claims: Vec<Claim<S>>,
) -> Result<CheckReport> {
    let mut specs = Vec::with_capacity(claims.len());
    for c in &claims {
        let cutoff = headroom
            .cutoff(c.nominal_top)
            .ok_or_else(|| Error::Precondition(format!("{} needs a span above the cap {}", c.check, headroom.cap)))?;
        specs.push(OSpaceSpec::new(c.kind, c.n, c.m, cutoff));
    }
    let unique: BTreeSet<(OKind, u32, u32, usize)> = specs.iter().map(|s| (s.kind, s.n, s.m, s.cutoff)).collect();
    let mut spans = Vec::new();
    for (kind, n, m, cutoff) in unique {
        let s = cache.get(voa, OSpaceSpec::new(kind, n, m, cutoff))?;
        spans.push(SpanSummary {
            kind,
            n,
            m,
            cutoff,
            aux_bound: s.spec.aux_bound,
            ambient_dim: s.ambient_dim(),
            rank: s.rank(),
            generators: s.generators,
        });
    }
    let resolved: Vec<_> = specs.iter().map(|s| cache.get(voa, *s)).collect::<Result<_>>()?;
    let outcomes: Vec<Option<Failure>> = claims
        .par_iter()
        .zip(resolved.par_iter())
        .map(|(c, span)| {
            let r = (c.residual)(voa)?;
            let nf = span.reduce(&r)?;
            if nf.is_zero() {
                return Ok(None);
            }
            Ok(Some(Failure {
                check: c.check.to_string(),
                inputs: c.inputs.clone(),
                residual: voa.format(&nf),
                repro: format!(
                    "bimod membership --voa {} --max-weight {} --kind {} --n {} --m {} --cutoff {} --element \"{}\"",
                    voa.id(),
                    span.spec.cutoff + 2,
                    c.kind.name(),
                    c.n,
                    c.m,
                    span.spec.cutoff,
                    voa.format(&r)
                ),
            }))
        })
        .collect::<Result<_>>()?;
    let mut by_check: BTreeMap<String, CheckCount> = BTreeMap::new();
    let mut failures = Vec::new();
    for (c, o) in claims.iter().zip(outcomes) {
        let e = by_check.entry(c.check.to_string()).or_insert(CheckCount { cases: 0, passed: 0 });
        e.cases += 1;
        match o {
            None => e.passed += 1,
            Some(f) => failures.push(f),
        }
    }
    let passed = claims.len() - failures.len();
    Ok(CheckReport {
        suite: suite.to_string(),
        algebra: voa.id(),
        seed,
        headroom,
        cases: claims.len(),
        passed,
        redrawn,
        by_check,
        spans,
        failures,
    })
}

/// Shapes of sampled inputs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SampleShape {
    pub max_weight: usize,
    pub max_level: u32,
}

impl Default for SampleShape {
    fn default() -> Self {
        Self { max_weight: 3, max_level: 2 }
    }
}

fn fmt<S: Scalar>(voa: &Voa<S>, v: &GradedVector<S>) -> String {
    voa.format(v)
}

fn top<S: Scalar>(v: &GradedVector<S>) -> usize {
    v.top_weight().unwrap_or(0)
}

/// `a·b` where `b` may be absent.
fn opt_product<S: Scalar>(
    voa: &Voa<S>,
    enabled: bool,
    a: &GradedVector<S>,
    b: &GradedVector<S>,
    params: ProductParams,
) -> Result<GradedVector<S>> {
    if enabled {
        star_general(voa, a, b, params)
    } else {
        Ok(GradedVector::zero())
    }
}

/// `[p1 ≥ 0] u *^n_{m,p1} v - [p2 ≥ 0] v *^n_{m,p2} u - Res_z (1+z)^{wt u-1+m-p2} Y(u,z) v`
/// with `n = p1 + p2 - m`; at least one of `p1`, `p2` must be nonnegative.
pub fn swap_residual<S: Scalar>(
    voa: &Voa<S>,
    u: &GradedVector<S>,
    v: &GradedVector<S>,
    m: u32,
    p1: i64,
    p2: i64,
) -> Result<GradedVector<S>> {
    let n = p1 + p2 - m as i64;
    if n < 0 || (p1 < 0 && p2 < 0) {
        return Err(Error::Precondition(format!(
            "need p1 + p2 - m >= 0 and p1 or p2 >= 0, got m={m}, p1={p1}, p2={p2}"
        )));
    }
    let n = n as u32;
    let a = opt_product(voa, p1 >= 0, u, v, ProductParams::new(m, p1.max(0) as u32, n))?;
    let b = opt_product(voa, p2 >= 0, v, u, ProductParams::new(m, p2.max(0) as u32, n))?;
    let c = residue_binomial_power(voa, u, v, m as i64 - 1 - p2)?;
    Ok(&(&a - &b) - &c)
}

/// Whether the swap residual lies in `O'_{p1+p2-m, m}`, at the headroom cutoff.
pub fn membership_swap<S: Scalar>(
    voa: &Voa<S>,
    cache: &SpanCache<S>,
    headroom: Headroom,
    u: &GradedVector<S>,
    v: &GradedVector<S>,
    m: u32,
    p1: i64,
    p2: i64,
) -> Result<bool> {
    let r = swap_residual(voa, u, v, m, p1, p2)?;
    let n = (p1 + p2 - m as i64) as u32;
    let nominal = top(u) + top(v) + (m + n) as usize;
    let cutoff = headroom
        .cutoff(nominal.max(top(&r)))
        .ok_or_else(|| Error::Precondition(format!("residual needs a span above the cap {}", headroom.cap)))?;
    cache.get(voa, OSpaceSpec::new(OKind::Oprime, n, m, cutoff))?.contains(&r)
}

/// Draws a generator of `O'_{n,m}` with small inputs.
pub fn sample_oprime_generator<S: Scalar>(voa: &Voa<S>, rng: &mut Sampler, max_weight: usize) -> OGenerator {
    let key = |rng: &mut Sampler, w: usize| loop {
        let wt = rng.range(0, w as i64) as usize;
        let d = voa.dim(wt);
        if d > 0 {
            return (wt, rng.index(d));
        }
    };
    if rng.range(0, 3) == 0 {
        OGenerator::Shift { u: key(rng, max_weight) }
    } else {
        let u = key(rng, max_weight.saturating_sub(1));
        let v = key(rng, max_weight.saturating_sub(1));
        let k = rng.range(0, 1) as u32;
        let s = rng.range(0, k as i64) as u32;
        OGenerator::Residue { u, v, k, s }
    }
}

fn draw<S: Scalar>(
    trials: usize,
    headroom: Headroom,
    mut make: impl FnMut() -> Claim<S>,
) -> Result<(Vec<Claim<S>>, usize)> {
    let mut out = Vec::with_capacity(trials);
    let mut redrawn = 0;
    while out.len() < trials {
        let c = make();
        if headroom.cutoff(c.nominal_top).is_some() {
            out.push(c);
        } else {
            redrawn += 1;
            if redrawn > 100 * trials.max(1) {
                return Err(Error::Precondition("headroom cap too small for the sample shape".into()));
            }
        }
    }
    Ok((out, redrawn))
}

/// Swap residuals, including the one-sided cases with a negative index.
pub fn swap_check<S: Scalar>(
    voa: &Arc<Voa<S>>,
    cache: &SpanCache<S>,
    headroom: Headroom,
    shape: SampleShape,
    seed: u64,
    trials: usize,
) -> Result<CheckReport> {
    let mut rng = Sampler::new(seed);
    let lv = shape.max_level as i64;
    let (claims, redrawn) = draw(trials, headroom, || {
        let m = rng.range(0, lv) as u32;
        let n = rng.range(0, lv) as u32;
        let s = (n + m) as i64;
        let (p1, p2, check) = match rng.range(0, 3) {
            0 => {
                let p2 = rng.range(-2, -1);
                (s - p2, p2, "swap_right_negative")
            }
            1 => {
                let p1 = rng.range(-2, -1);
                (p1, s - p1, "swap_left_negative")
            }
            _ => {
                let p1 = rng.range(0, s);
                (p1, s - p1, "swap")
            }
        };
        let u = rng.element(voa, shape.max_weight);
        let v = rng.element(voa, shape.max_weight);
        let inputs = json!({"u": fmt(voa, &u), "v": fmt(voa, &v), "m": m, "p1": p1, "p2": p2});
        let nominal_top = top(&u) + top(&v) + (m + n) as usize;
        Claim {
            check,
            inputs,
            kind: OKind::Oprime,
            n,
            m,
            nominal_top,
            residual: Box::new(move |voa| swap_residual(voa, &u, &v, m, p1, p2)),
        }
    })?;
    run_claims(voa, cache, headroom, "swap", seed, redrawn, claims)
}

fn stability_claim<S: Scalar>(voa: &Voa<S>, rng: &mut Sampler, shape: SampleShape, full: bool) -> Claim<S> {
    let lv = shape.max_level as i64;
    let m = rng.range(0, lv) as u32;
    let n = rng.range(0, lv) as u32;
    let choices = if full { 7 } else { 3 };
    match rng.range(0, choices - 1) {
        0 | 1 => {
            let g = sample_oprime_generator(voa, rng, shape.max_weight);
            let a = rng.element(voa, shape.max_weight);
            let left = rng.range(0, 1) == 0;
            let nominal_top = top(&a) + g.nominal_top(n, m) + (m + n) as usize;
            let inputs = json!({"a": fmt(voa, &a), "generator": g.describe(voa), "n": n, "m": m});
            let (check, residual): (&'static str, Residual<S>) = if left {
                ("left_stability", Box::new(move |voa| star_bar(voa, &a, &g.evaluate(voa, n, m)?, m, n)))
            } else {
                ("right_stability", Box::new(move |voa| star_right(voa, &g.evaluate(voa, n, m)?, &a, m, n)))
            };
            Claim { check, inputs, kind: OKind::Oprime, n, m, nominal_top, residual }
        }
        2 => {
            let (a, b, c) = (
                rng.element(voa, shape.max_weight),
                rng.element(voa, shape.max_weight),
                rng.element(voa, shape.max_weight),
            );
            let nominal_top = top(&a) + top(&b) + top(&c) + 2 * (m + n) as usize;
            let inputs = json!({"a": fmt(voa, &a), "b": fmt(voa, &b), "c": fmt(voa, &c), "n": n, "m": m});
            Claim {
                check: "commuting_actions",
                inputs,
                kind: OKind::Oprime,
                n,
                m,
                nominal_top,
                residual: Box::new(move |voa| {
                    let l = star_right(voa, &star_bar(voa, &a, &b, m, n)?, &c, m, n)?;
                    let r = star_bar(voa, &a, &star_right(voa, &b, &c, m, n)?, m, n)?;
                    Ok(&l - &r)
                }),
            }
        }
        3 | 4 => {
            let (a, b, c) = (
                rng.element(voa, shape.max_weight),
                rng.element(voa, shape.max_weight),
                rng.element(voa, shape.max_weight),
            );
            let left = rng.range(0, 1) == 0;
            let inputs = json!({"a": fmt(voa, &a), "b": fmt(voa, &b), "c": fmt(voa, &c), "n": n, "m": m});
            if left {
                let nominal_top = top(&a) + top(&b) + top(&c) + 3 * n as usize + m as usize;
                Claim {
                    check: "left_associativity",
                    inputs,
                    kind: OKind::Ofull,
                    n,
                    m,
                    nominal_top,
                    residual: Box::new(move |voa| {
                        let ab = star_right(voa, &a, &b, n, n)?;
                        let l = star_bar(voa, &ab, &c, m, n)?;
                        let r = star_bar(voa, &a, &star_bar(voa, &b, &c, m, n)?, m, n)?;
                        Ok(&l - &r)
                    }),
                }
            } else {
                let nominal_top = top(&a) + top(&b) + top(&c) + 3 * m as usize + n as usize;
                Claim {
                    check: "right_associativity",
                    inputs,
                    kind: OKind::Ofull,
                    n,
                    m,
                    nominal_top,
                    residual: Box::new(move |voa| {
                        let l = star_right(voa, &star_right(voa, &c, &a, m, n)?, &b, m, n)?;
                        let ab = star_right(voa, &a, &b, m, m)?;
                        let r = star_right(voa, &c, &ab, m, n)?;
                        Ok(&l - &r)
                    }),
                }
            }
        }
        _ => {
            let p = rng.range(0, lv) as u32;
            let (u, w, v) = (
                rng.element(voa, shape.max_weight),
                rng.element(voa, shape.max_weight),
                rng.element(voa, shape.max_weight),
            );
            let nominal_top = top(&u) + top(&w) + top(&v) + (2 * n + m + p) as usize;
            let inputs = json!({"u": fmt(voa, &u), "w": fmt(voa, &w), "v": fmt(voa, &v), "n": n, "p": p, "m": m});
            Claim {
                check: "tensor_balance",
                inputs,
                kind: OKind::Ofull,
                n,
                m,
                nominal_top,
                residual: Box::new(move |voa| psi_balance_defect(voa, &u, &w, &v, n, p, m)),
            }
        }
    }
}

/// Stability of `O'_{n,m}` under both actions and commuting of the actions.
pub fn stability_check<S: Scalar>(
    voa: &Arc<Voa<S>>,
    cache: &SpanCache<S>,
    headroom: Headroom,
    shape: SampleShape,
    seed: u64,
    trials: usize,
) -> Result<CheckReport> {
    let mut rng = Sampler::new(seed);
    let (claims, redrawn) = draw(trials, headroom, || stability_claim(voa, &mut rng, shape, false))?;
    run_claims(voa, cache, headroom, "stability", seed, redrawn, claims)
}

/// The bimodule laws: stability, commuting actions, associativity of both
/// actions and balancing of the tensor pairing. The last three are decided
/// modulo the full relation space.
pub fn bimodule_check<S: Scalar>(
    voa: &Arc<Voa<S>>,
    cache: &SpanCache<S>,
    headroom: Headroom,
    shape: SampleShape,
    seed: u64,
    trials: usize,
) -> Result<CheckReport> {
    let mut rng = Sampler::new(seed);
    let (claims, redrawn) = draw(trials, headroom, || stability_claim(voa, &mut rng, shape, true))?;
    run_claims(voa, cache, headroom, "bimodule", seed, redrawn, claims)
}

/// `φ(u *^n_{m,p} v) - φ(v) *^m_{n,p} φ(u)` modulo `O'_{m,n}`, and images of
/// generators of `O'_{n,m}`.
pub fn phi_check<S: Scalar>(
    voa: &Arc<Voa<S>>,
    cache: &SpanCache<S>,
    headroom: Headroom,
    shape: SampleShape,
    seed: u64,
    trials: usize,
) -> Result<CheckReport> {
    let mut rng = Sampler::new(seed);
    let lv = shape.max_level as i64;
    let (claims, redrawn) = draw(trials, headroom, || {
        let m = rng.range(0, lv) as u32;
        let n = rng.range(0, lv) as u32;
        if rng.range(0, 3) == 0 {
            let g = sample_oprime_generator(voa, &mut rng, shape.max_weight);
            let inputs = json!({"generator": g.describe(voa), "n": n, "m": m});
            Claim {
                check: "phi_generator",
                inputs,
                kind: OKind::Oprime,
                n: m,
                m: n,
                nominal_top: g.nominal_top(n, m),
                residual: Box::new(move |voa| voa.phi(&g.evaluate(voa, n, m)?)),
            }
        } else {
            let p = rng.range(0, lv) as u32;
            let u = rng.element(voa, shape.max_weight);
            let v = rng.element(voa, shape.max_weight);
            let inputs = json!({"u": fmt(voa, &u), "v": fmt(voa, &v), "n": n, "m": m, "p": p});
            Claim {
                check: "phi_congruence",
                inputs,
                kind: OKind::Oprime,
                n: m,
                m: n,
                nominal_top: top(&u) + top(&v) + (m + n) as usize,
                residual: Box::new(move |voa| {
                    let l = voa.phi(&star_general(voa, &u, &v, ProductParams::new(m, p, n))?)?;
                    let r = star_general(voa, &voa.phi(&v)?, &voa.phi(&u)?, ProductParams::new(n, p, m))?;
                    Ok(&l - &r)
                }),
            }
        }
    })?;
    run_claims(voa, cache, headroom, "phi", seed, redrawn, claims)
}

/// `u *^n_{m,p} v - u *^{n-1}_{m-1,p-1} v` and generators of `O'_{n,m}`,
/// both modulo `O'_{n-1,m-1}`.
pub fn descent_check<S: Scalar>(
    voa: &Arc<Voa<S>>,
    cache: &SpanCache<S>,
    headroom: Headroom,
    shape: SampleShape,
    seed: u64,
    trials: usize,
) -> Result<CheckReport> {
    let mut rng = Sampler::new(seed);
    let lv = shape.max_level.max(1) as i64;
    let (claims, redrawn) = draw(trials, headroom, || {
        let m = rng.range(1, lv) as u32;
        let n = rng.range(1, lv) as u32;
        if rng.range(0, 3) == 0 {
            let g = sample_oprime_generator(voa, &mut rng, shape.max_weight);
            let inputs = json!({"generator": g.describe(voa), "n": n, "m": m});
            Claim {
                check: "descent_generator",
                inputs,
                kind: OKind::Oprime,
                n: n - 1,
                m: m - 1,
                nominal_top: g.nominal_top(n, m),
                residual: Box::new(move |voa| g.evaluate(voa, n, m)),
            }
        } else {
            let p = rng.range(1, lv) as u32;
            let u = rng.element(voa, shape.max_weight);
            let v = rng.element(voa, shape.max_weight);
            let inputs = json!({"u": fmt(voa, &u), "v": fmt(voa, &v), "n": n, "m": m, "p": p});
            Claim {
                check: "descent_congruence",
                inputs,
                kind: OKind::Oprime,
                n: n - 1,
                m: m - 1,
                nominal_top: top(&u) + top(&v) + (m + n) as usize,
                residual: Box::new(move |voa| {
                    let l = star_general(voa, &u, &v, ProductParams::new(m, p, n))?;
                    let r = star_general(voa, &u, &v, ProductParams::new(m - 1, p - 1, n - 1))?;
                    Ok(&l - &r)
                }),
            }
        }
    })?;
    run_claims(voa, cache, headroom, "descent", seed, redrawn, claims)
}

/// `ψ(x ⊗ y) = x *^n_{m,p} y`, pairing level `(n,p)` with level `(p,m)`.
pub fn psi_pairing<S: Scalar>(
    voa: &Voa<S>,
    x: &GradedVector<S>,
    y: &GradedVector<S>,
    n: u32,
    p: u32,
    m: u32,
) -> Result<GradedVector<S>> {
    star_general(voa, x, y, ProductParams::new(m, p, n))
}

/// `ψ((u *^n_{p,p} w) ⊗ v) - ψ(u ⊗ (w *^p_{m,p} v))`.
pub fn psi_balance_defect<S: Scalar>(
    voa: &Voa<S>,
    u: &GradedVector<S>,
    w: &GradedVector<S>,
    v: &GradedVector<S>,
    n: u32,
    p: u32,
    m: u32,
) -> Result<GradedVector<S>> {
    let uw = star_general(voa, u, w, ProductParams::new(p, p, n))?;
    let wv = star_general(voa, w, v, ProductParams::new(m, p, p))?;
    Ok(&psi_pairing(voa, &uw, v, n, p, m)? - &psi_pairing(voa, u, &wv, n, p, m)?)
}
