//! Exact checks of the level-changing operators on test modules.

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::bimodule::checks::Failure;
use crate::bimodule::ospace::{odoubleprime_candidates, oprime_candidates, otripleprime_candidates, OGenerator};
use crate::bimodule::products::{star_bar, star_general, star_right, ProductParams};
use crate::error::Result;
use crate::linalg::{Elimination, SpanBasis};
use crate::rep::module::TestModule;
pub use crate::report::GridReport;
use crate::sampling::Sampler;
use crate::scalar::Scalar;
use crate::voa::{GradedVector, Voa};

/// `o_{n,m}(a *^n_{m,p} b) w == o_{n,p}(a) o_{p,m}(b) w`.
pub fn check_level_product<S: Scalar>(
    voa: &Voa<S>,
    module: &TestModule<S>,
    a: &GradedVector<S>,
    b: &GradedVector<S>,
    m: u32,
    n: u32,
    p: u32,
    w: &GradedVector<S>,
) -> Result<bool> {
    let lhs = module.o_action(voa, &star_general(voa, a, b, ProductParams::new(m, p, n))?, w, n as usize)?;
    let rhs = module.o_action(voa, a, &module.o_action(voa, b, w, p as usize)?, n as usize)?;
    Ok(lhs == rhs)
}

/// `o_{n,m}(u *^n_m v) w == o_{n,m}(u) o_{m,m}(v) w` and
/// `o_{n,m}(u *bar^n_m v) w == o_{n,n}(u) o_{n,m}(v) w`.
pub fn check_factorizations<S: Scalar>(
    voa: &Voa<S>,
    module: &TestModule<S>,
    u: &GradedVector<S>,
    v: &GradedVector<S>,
    m: u32,
    n: u32,
    w: &GradedVector<S>,
) -> Result<(bool, bool)> {
    let (mu, nu) = (m as usize, n as usize);
    let right = module.o_action(voa, &star_right(voa, u, v, m, n)?, w, nu)?
        == module.o_action(voa, u, &module.o_action(voa, v, w, mu)?, nu)?;
    let left = module.o_action(voa, &star_bar(voa, u, v, m, n)?, w, nu)?
        == module.o_action(voa, u, &module.o_action(voa, v, w, nu)?, nu)?;
    Ok((right, left))
}

/// Every basis pair `a, b` with weight at most `max_weight`, every
/// `m, n, p <= max_level` and every basis vector of `M(m)`.
pub fn level_product_grid<S: Scalar>(
    voa: &Voa<S>,
    module: &TestModule<S>,
    max_weight: usize,
    max_level: u32,
) -> Result<(GridReport, GridReport)> {
    let keys = voa.basis_keys(max_weight);
    let mut tuples = Vec::new();
    for &a in &keys {
        for &b in &keys {
            for m in 0..=max_level {
                for n in 0..=max_level {
                    tuples.push((a, b, m, n));
                }
            }
        }
    }
    let fmt = |k: (usize, usize)| voa.format_basis(k.0, k.1);
    let outcomes: Vec<(Vec<Option<Failure>>, Vec<Option<Failure>>)> = tuples
        .par_iter()
        .map(|&(ka, kb, m, n)| {
            let a = GradedVector::basis(ka.0, ka.1);
            let b = GradedVector::basis(kb.0, kb.1);
            let mut products = Vec::new();
            let mut factors = Vec::new();
            for k in 0..module.dim(m as usize) {
                let w = GradedVector::basis(m as usize, k);
                let wl = module.format(&w);
                for p in 0..=max_level {
                    let ok = check_level_product(voa, module, &a, &b, m, n, p, &w)?;
                    products.push((!ok).then(|| Failure {
                        check: "level_product".into(),
                        inputs: json!({"a": fmt(ka), "b": fmt(kb), "m": m, "n": n, "p": p, "w": wl}),
                        residual: "sides differ".into(),
                        repro: format!(
                            "bimod rep-check --voa {} --module {} --suite level-product --m {m} --n {n} --p {p}",
                            voa.id(),
                            module.id()
                        ),
                    }));
                }
                let (right, left) = check_factorizations(voa, module, &a, &b, m, n, &w)?;
                for (ok, name) in [(right, "right_factorization"), (left, "left_factorization")] {
                    factors.push((!ok).then(|| Failure {
                        check: name.into(),
                        inputs: json!({"u": fmt(ka), "v": fmt(kb), "m": m, "n": n, "w": wl}),
                        residual: "sides differ".into(),
                        repro: format!(
                            "bimod rep-check --voa {} --module {} --suite level-product --m {m} --n {n}",
                            voa.id(),
                            module.id()
                        ),
                    }));
                }
            }
            Ok((products, factors))
        })
        .collect::<Result<_>>()?;
    let (products, factors): (Vec<_>, Vec<_>) = outcomes.into_iter().unzip();
    Ok((
        GridReport::collect("level_product", voa.id(), Some(module.id()), products.into_iter().flatten().collect()),
        GridReport::collect("factorization", voa.id(), Some(module.id()), factors.into_iter().flatten().collect()),
    ))
}

/// The joint kernel of `u_{wt u - 1 + k}`, `k > m`, level by level.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OmegaSubspace<S> {
    pub m: usize,
    pub probe_weight_cap: usize,
    pub module_dims: Vec<usize>,
    pub dims: Vec<usize>,
    #[serde(skip)]
    pub basis: Vec<Vec<GradedVector<S>>>,
}

impl<S: Scalar> OmegaSubspace<S> {
    /// Whether the kernel is exactly the sum of the levels `<= m`.
    pub fn is_truncation(&self) -> bool {
        self.dims
            .iter()
            .zip(&self.module_dims)
            .enumerate()
            .all(|(k, (d, full))| if k <= self.m { d == full } else { *d == 0 })
    }
}

pub fn omega_subspace<S: Scalar>(
    voa: &Voa<S>,
    module: &TestModule<S>,
    m: usize,
    probe_weight_cap: usize,
) -> Result<OmegaSubspace<S>> {
    let probes = voa.basis_keys(probe_weight_cap);
    let mut basis = Vec::new();
    for level in 0..=module.levels() {
        let d = module.dim(level);
        if level <= m {
            basis.push((0..d).map(|i| GradedVector::basis(level, i)).collect());
            continue;
        }
        let ops: Vec<(usize, usize, usize)> =
            probes.iter().flat_map(|&(wt, i)| ((m + 1)..=level).map(move |k| (wt, i, k))).collect();
        let blocks: Vec<Vec<Vec<S>>> = ops
            .par_iter()
            .map(|&(wt, i, k)| {
                let u = GradedVector::basis(wt, i);
                let j = wt as i64 - 1 + k as i64;
                let images: Vec<GradedVector<S>> =
                    (0..d).map(|s| module.mode(voa, &u, j, &GradedVector::basis(level, s))).collect::<Result<_>>()?;
                let t = level - k;
                Ok((0..module.dim(t)).map(|r| images.iter().map(|v| v.coeff(t, r)).collect()).collect())
            })
            .collect::<Result<_>>()?;
        let mut span = SpanBasis::new(d, Elimination::Exact);
        for row in blocks.iter().flatten() {
            if span.rank() == d {
                break;
            }
            span.insert(row);
        }
        basis.push(
            span.null_space()
                .into_iter()
                .map(|v| GradedVector::from_terms(v.into_iter().map(|(s, c)| ((level, s), c))))
                .collect(),
        );
    }
    Ok(OmegaSubspace {
        m,
        probe_weight_cap,
        module_dims: module.dims(),
        dims: basis.iter().map(Vec::len).collect(),
        basis,
    })
}

/// Draws relation generators of levels `(n, m)` and asserts that
/// `o_{n,m}(c)` kills every basis vector of `M(m)`.
pub fn annihilation_check<S: Scalar>(
    voa: &Voa<S>,
    module: &TestModule<S>,
    n: u32,
    m: u32,
    cutoff: usize,
    aux_bound: u32,
    seed: u64,
    samples: usize,
) -> Result<GridReport> {
    let pools: Vec<(&str, Vec<OGenerator>)> = vec![
        ("oprime", oprime_candidates(voa, n, m, cutoff)),
        ("odoubleprime", odoubleprime_candidates(voa, n, m, cutoff, aux_bound)),
        ("otripleprime", otripleprime_candidates(voa, n, m, cutoff, aux_bound)),
    ]
    .into_iter()
    .filter(|(_, p)| !p.is_empty())
    .collect();
    let mut rng = Sampler::new(seed);
    let picks: Vec<(&str, OGenerator)> = (0..samples)
        .map(|s| {
            let (name, pool) = &pools[s % pools.len()];
            (*name, pool[rng.index(pool.len())].clone())
        })
        .collect();
    let outcomes: Vec<Option<Failure>> = picks
        .par_iter()
        .map(|(name, g)| {
            let c = g.evaluate(voa, n, m)?;
            for k in 0..module.dim(m as usize) {
                let w = GradedVector::basis(m as usize, k);
                let r = module.o_action(voa, &c, &w, n as usize)?;
                if !r.is_zero() {
                    return Ok(Some(Failure {
                        check: name.to_string(),
                        inputs: json!({"generator": g.describe(voa), "n": n, "m": m, "w": module.format(&w)}),
                        residual: module.format(&r),
                        repro: format!(
                            "bimod rep-check --voa {} --module {} --suite annihilation --n {n} --m {m} --seed {seed}",
                            voa.id(),
                            module.id()
                        ),
                    }));
                }
            }
            Ok(None)
        })
        .collect::<Result<_>>()?;
    Ok(GridReport::collect("annihilation", voa.id(), Some(module.id()), outcomes))
}
