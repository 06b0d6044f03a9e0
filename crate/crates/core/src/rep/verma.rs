//! The module induced from a module `U` over the level-`m` algebra, built
//! level by level as `(F_W / O_{n,m}) ⊗ U` modulo balancing relations.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use parking_lot::{Mutex, RwLock};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::bimodule::checks::Failure;
use crate::bimodule::ospace::{oprime_candidates, OKind, OSpaceSpec, SpanCache};
use crate::bimodule::products::{star_general, star_right, ProductParams};
use crate::error::{Error, Result};
use crate::expr::element;
use crate::formal::binom::binom;
use crate::linalg::{Elimination, FilteredSpace, SpanBasis};
use crate::rep::checks::GridReport;
use crate::rep::module::TestModule;
use crate::scalar::{sign, Scalar};
use crate::voa::{GradedVector, Voa};

/// Row-major square matrix acting on column vectors.
pub type Matrix<S> = Vec<Vec<S>>;

fn identity<S: Scalar>(d: usize) -> Matrix<S> {
    (0..d).map(|i| (0..d).map(|j| if i == j { S::one() } else { S::zero() }).collect()).collect()
}

fn mat_mul<S: Scalar>(a: &Matrix<S>, b: &Matrix<S>) -> Matrix<S> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols).map(|j| (0..inner).fold(S::zero(), |acc, k| acc + row[k].clone() * b[k][j].clone())).collect()
        })
        .collect()
}

fn mat_vec<S: Scalar>(a: &Matrix<S>, x: &[S]) -> Vec<S> {
    a.iter().map(|row| row.iter().zip(x).fold(S::zero(), |acc, (r, v)| acc + r.clone() * v.clone())).collect()
}

/// How one algebra element acts on `U`.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorAction<S> {
    pub element: GradedVector<S>,
    pub matrix: Matrix<S>,
}

/// A finite-dimensional module over the level-`m` algebra, presented by the
/// action of a generating set.
#[derive(Clone, Debug, PartialEq)]
pub struct InputModule<S> {
    pub dim: usize,
    pub generators: Vec<GeneratorAction<S>>,
}

#[derive(Deserialize)]
struct RawGenerator {
    element: String,
    matrix: Vec<Vec<serde_json::Value>>,
}

#[derive(Deserialize)]
struct RawInput {
    dimension: usize,
    generators: Vec<RawGenerator>,
}

impl<S: Scalar> InputModule<S> {
    pub fn new(dim: usize, generators: Vec<GeneratorAction<S>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidModule("the input module must be nonzero".into()));
        }
        for g in &generators {
            if g.matrix.len() != dim || g.matrix.iter().any(|r| r.len() != dim) {
                return Err(Error::InvalidModule(format!("generator matrices must be {dim} x {dim}")));
            }
        }
        Ok(Self { dim, generators })
    }

    /// Reads `{"dimension": d, "generators": [{"element": "...", "matrix": [[...]]}]}`;
    /// matrix entries are numbers or strings such as `"1/16"`.
    pub fn from_json(voa: &Voa<S>, value: &serde_json::Value) -> Result<Self> {
        let raw: RawInput =
            serde_json::from_value(value.clone()).map_err(|e| Error::Config(format!("input module: {e}")))?;
        let mut generators = Vec::new();
        for g in raw.generators {
            let el = element(voa, &g.element)?;
            let matrix = g
                .matrix
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|x| {
                            let s = match x {
                                serde_json::Value::String(s) => s.clone(),
                                other => other.to_string(),
                            };
                            S::parse_scalar(&s).ok_or_else(|| Error::Config(format!("bad matrix entry `{s}`")))
                        })
                        .collect::<Result<Vec<S>>>()
                })
                .collect::<Result<Matrix<S>>>()?;
            generators.push(GeneratorAction { element: el, matrix });
        }
        Self::new(raw.dimension, generators)
    }

    /// Level `m` of a test module, with the generators acting by `o_{m,m}`.
    pub fn from_level(voa: &Voa<S>, module: &TestModule<S>, m: usize, generators: &[GradedVector<S>]) -> Result<Self> {
        let actions = generators
            .iter()
            .map(|g| Ok(GeneratorAction { element: g.clone(), matrix: module.o_matrix(voa, g, m, m)?.entries }))
            .collect::<Result<_>>()?;
        Self::new(module.dim(m), actions)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VermaConfig {
    pub m: u32,
    /// Levels `0..=levels` are built.
    pub levels: usize,
    pub cutoff: usize,
    pub kind: OKind,
    /// Only classes of weight at most this count as basis vectors. When the
    /// bimodules are infinite dimensional, the truncation leaves spurious
    /// classes near the cutoff; a bound well below it discards them.
    #[serde(default)]
    pub rep_weight: Option<usize>,
}

impl VermaConfig {
    pub fn new(m: u32, levels: usize, cutoff: usize, kind: OKind) -> Self {
        Self { m, levels, cutoff, kind, rep_weight: None }
    }

    pub fn with_rep_weight(mut self, w: usize) -> Self {
        self.rep_weight = Some(w);
        self
    }

    fn admits(&self, weight: usize) -> bool {
        self.rep_weight.is_none_or(|b| weight <= b)
    }
}

/// Relations of one level at one cutoff.
#[derive(Debug)]
struct Relations<S> {
    space: FilteredSpace,
    basis: SpanBasis<S>,
    o_rank: usize,
    balancing_rows: usize,
}

/// One graded piece of the induced module.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VermaLevel {
    pub n: usize,
    pub dim: usize,
    /// Dimension at cutoff one lower.
    pub previous_dim: Option<usize>,
    pub stabilized: bool,
    pub relation_rank: usize,
    /// Rank contributed by the relation space alone.
    pub o_rank: usize,
    pub balancing_rows: usize,
    /// Quotient classes above the representative weight bound.
    pub discarded_classes: usize,
    /// Representatives `v ⊗ e_k` as (algebra basis label, k).
    pub representatives: Vec<(String, usize)>,
    #[serde(skip)]
    reps: Vec<(usize, usize, usize)>,
}

pub type MatrixKey = ((usize, usize), i64, usize);

/// One summand `c · x_{px} y_{py}` of the iterate formula.
type Summand<'a, S> = (&'a GradedVector<S>, i64, &'a GradedVector<S>, i64, S);

/// Summands of `Σ_{i≥0} (-1)^i C(r, i) (a_{r-i} b_{q+i} - (-1)^r b_{q+r-i} a_i)`
/// acting on level `n`, dropping those whose inner mode reaches a negative level.
fn iterate_summands<'a, S: Scalar>(
    a: &'a GradedVector<S>,
    b: &'a GradedVector<S>,
    r: i64,
    q: i64,
    n: usize,
) -> Vec<Summand<'a, S>> {
    let (wa, wb) = (a.weight().unwrap_or(0) as i64, b.weight().unwrap_or(0) as i64);
    let sign_r = sign::<S>(r.rem_euclid(2));
    let mut out = Vec::new();
    for i in 0.. {
        let b_mid = n as i64 + wb - q - i - 1;
        let a_mid = n as i64 + wa - i - 1;
        if b_mid < 0 && a_mid < 0 {
            break;
        }
        let c = sign::<S>(i) * binom::<S>(r, i);
        if b_mid >= 0 {
            out.push((a, r - i, b, q + i, c.clone()));
        }
        if a_mid >= 0 {
            out.push((b, q + r - i, a, i, -(c * sign_r.clone())));
        }
    }
    out
}

/// `M(U) = ⊕_n A_{n,m} ⊗_{A_m} U`, truncated at a weight cutoff.
#[derive(Debug)]
pub struct VermaModule<S> {
    voa: Arc<Voa<S>>,
    input: InputModule<S>,
    config: VermaConfig,
    spans: SpanCache<S>,
    relations: Mutex<BTreeMap<(usize, usize), Arc<Relations<S>>>>,
    levels: Vec<VermaLevel>,
    matrices: RwLock<HashMap<MatrixKey, Arc<Matrix<S>>>>,
}

impl<S: Scalar> VermaModule<S> {
    pub fn build(voa: Arc<Voa<S>>, input: InputModule<S>, config: VermaConfig) -> Result<Self> {
        let mut module = Self {
            voa,
            input,
            config,
            spans: SpanCache::new(Elimination::Screened),
            relations: Mutex::new(BTreeMap::new()),
            levels: Vec::new(),
            matrices: RwLock::new(HashMap::new()),
        };
        if config.m > 0 {
            module.check_not_factoring()?;
        }
        for n in 0..=config.levels {
            let rel = module.relations(n, config.cutoff)?;
            let keys: Vec<_> = rel.basis.free_columns().into_iter().map(|c| rel.space.key(c)).collect();
            let previous_dim = if config.cutoff > 0 {
                let prev = module.relations(n, config.cutoff - 1)?;
                Some(prev.basis.free_columns().into_iter().filter(|&c| config.admits(prev.space.key(c).0)).count())
            } else {
                None
            };
            let reps: Vec<_> = keys.iter().copied().filter(|k| config.admits(k.0)).collect();
            module.levels.push(VermaLevel {
                n,
                dim: reps.len(),
                previous_dim,
                stabilized: previous_dim == Some(reps.len()),
                relation_rank: rel.basis.rank(),
                o_rank: rel.o_rank,
                balancing_rows: rel.balancing_rows,
                discarded_classes: keys.len() - reps.len(),
                representatives: reps.iter().map(|&(w, i, k)| (module.voa.format_basis(w, i), k)).collect(),
                reps,
            });
        }
        Ok(module)
    }

    pub fn config(&self) -> VermaConfig {
        self.config
    }

    pub fn input(&self) -> &InputModule<S> {
        &self.input
    }

    pub fn voa(&self) -> &Arc<Voa<S>> {
        &self.voa
    }

    pub fn levels(&self) -> &[VermaLevel] {
        &self.levels
    }

    pub fn dims(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.dim).collect()
    }

    pub fn dim(&self, n: usize) -> usize {
        self.levels.get(n).map_or(0, |l| l.dim)
    }

    /// Representative `(v, k)` of the `j`-th basis vector of level `n`.
    pub fn representative(&self, n: usize, j: usize) -> (GradedVector<S>, usize) {
        let (w, i, k) = self.levels[n].reps[j];
        (GradedVector::basis(w, i), k)
    }

    fn relations(&self, n: usize, cutoff: usize) -> Result<Arc<Relations<S>>> {
        if let Some(r) = self.relations.lock().get(&(n, cutoff)) {
            return Ok(r.clone());
        }
        let r = Arc::new(self.build_relations(n, cutoff)?);
        Ok(self.relations.lock().entry((n, cutoff)).or_insert(r).clone())
    }

    fn build_relations(&self, n: usize, cutoff: usize) -> Result<Relations<S>> {
        let voa = &self.voa;
        let m = self.config.m;
        let d = self.input.dim;
        let ospan = self.spans.get(voa, OSpaceSpec::new(self.config.kind, n as u32, m, cutoff))?;
        let space = FilteredSpace::new(voa.dims(cutoff), d);
        let mut basis = SpanBasis::new(space.dim(), Elimination::Screened);
        for row in ospan.basis.rows() {
            for k in 0..d {
                let tensor: Vec<(usize, S)> = row
                    .iter()
                    .map(|(c, x)| {
                        let (w, i, _) = ospan.space.key(*c);
                        (space.column(w, i, k).expect("same weights"), x.clone())
                    })
                    .collect();
                basis.insert_sparse(&tensor);
            }
        }
        let o_rank = basis.rank();
        let mut jobs = Vec::new();
        for (g, action) in self.input.generators.iter().enumerate() {
            let wg = action.element.top_weight().unwrap_or(0);
            for (w, i) in voa.basis_keys(cutoff) {
                if w + wg + m as usize + n <= cutoff {
                    jobs.push((g, w, i));
                }
            }
        }
        let rows: Vec<Vec<Vec<S>>> = jobs
            .par_iter()
            .map(|&(g, w, i)| {
                let action = &self.input.generators[g];
                let v = GradedVector::basis(w, i);
                let x = star_right(voa, &v, &action.element, m, n as u32)?;
                (0..d)
                    .map(|k| {
                        let mut row = space.dense_tensor(&[(k, &x)])?;
                        for (l, mrow) in action.matrix.iter().enumerate() {
                            let c = &mrow[k];
                            if !c.is_zero() {
                                let col = space.column(w, i, l).expect("in range");
                                row[col] = row[col].clone() - c.clone();
                            }
                        }
                        Ok(row)
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        let mut balancing_rows = 0;
        for row in rows.iter().flatten() {
            balancing_rows += 1;
            basis.insert(row);
        }
        Ok(Relations { space, basis, o_rank, balancing_rows })
    }

    /// Cutoff at which products `u * v`, `v` a representative in level `n`
    /// and `wt u = w`, are reduced into level `t`. Classes are trusted only
    /// up to the representative bound below the cutoff, so the product's top
    /// weight is lifted by the same margin.
    fn product_cutoff(&self, w: usize, n: usize, t: usize) -> usize {
        let rep_top = self.levels[n].reps.iter().map(|r| r.0).max().unwrap_or(0);
        let margin = self.config.rep_weight.map_or(0, |b| self.config.cutoff.saturating_sub(b));
        self.config.cutoff.max(w + rep_top + self.config.m as usize + t + margin)
    }

    /// Weight the algebra must be built to for mode checks with basis
    /// elements up to `probe_weight` and indices in `-range..=range`; the
    /// iterates `a_r b` reach weight `2 probe_weight + range - 1`.
    pub fn required_weight(&self, probe_weight: usize, range: i64) -> usize {
        let w = probe_weight.max((2 * probe_weight + range.max(0) as usize).saturating_sub(1));
        let top = self.config.levels;
        (0..=top)
            .flat_map(|n| (0..=top).map(move |t| (n, t)))
            .map(|(n, t)| self.product_cutoff(w, n, t))
            .max()
            .unwrap_or(0)
            + 1
    }

    /// Coordinates of `Σ_k parts[k] ⊗ e_k` in the basis of level `n`,
    /// reducing at whatever cutoff the input needs.
    pub fn normal_form(&self, n: usize, parts: &[GradedVector<S>]) -> Result<Vec<S>> {
        let top = parts.iter().filter_map(GradedVector::top_weight).max().unwrap_or(0);
        self.normal_form_at(n, parts, self.config.cutoff.max(top))
    }

    fn normal_form_at(&self, n: usize, parts: &[GradedVector<S>], cutoff: usize) -> Result<Vec<S>> {
        let rel = self.relations(n, cutoff)?;
        let indexed: Vec<(usize, &GradedVector<S>)> = parts.iter().enumerate().collect();
        let nf = rel.basis.reduce(&rel.space.dense_tensor(&indexed)?);
        let level = &self.levels[n];
        let mut out = vec![S::zero(); level.dim];
        for (col, c) in nf {
            let key = rel.space.key(col);
            let j = level.reps.iter().position(|r| *r == key).ok_or_else(|| {
                Error::Precondition(format!(
                    "level {n}: the normal form at cutoff {cutoff} involves {} ⊗ e_{}, which is not a representative at cutoff {}; raise the cutoff or lower the representative weight",
                    self.voa.format_basis(key.0, key.1),
                    key.2,
                    self.config.cutoff
                ))
            })?;
            out[j] = c;
        }
        Ok(out)
    }

    /// Level reached by `u_p` from level `n`, for homogeneous `u` of weight `wt`.
    pub fn target_level(wt: usize, p: i64, n: usize) -> i64 {
        wt as i64 - p - 1 + n as i64
    }

    fn check_level(&self, n: i64) -> Result<()> {
        if n > self.config.levels as i64 {
            return Err(Error::LevelRange { needed: n as usize, max: self.config.levels });
        }
        Ok(())
    }

    /// Matrix of `u_p` from level `n` for the basis element `key`.
    pub fn mode_matrix_basis(&self, key: (usize, usize), p: i64, n: usize) -> Result<Arc<Matrix<S>>> {
        let t = Self::target_level(key.0, p, n);
        if t < 0 {
            return Ok(Arc::new(Vec::new()));
        }
        self.check_level(t)?;
        let mk = (key, p, n);
        if let Some(x) = self.matrices.read().get(&mk) {
            return Ok(x.clone());
        }
        let t = t as usize;
        let u = GradedVector::basis(key.0, key.1);
        let params = ProductParams::new(self.config.m, n as u32, t as u32);
        let cutoff = self.product_cutoff(key.0, n, t);
        let cols: Vec<Vec<S>> = (0..self.dim(n))
            .into_par_iter()
            .map(|j| {
                let (v, k) = self.representative(n, j);
                let y = star_general(&self.voa, &u, &v, params)?;
                let mut parts = vec![GradedVector::zero(); self.input.dim];
                parts[k] = y;
                self.normal_form_at(t, &parts, cutoff)
            })
            .collect::<Result<_>>()?;
        let mat: Matrix<S> = (0..self.dim(t)).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
        let mat = Arc::new(mat);
        self.matrices.write().insert(mk, mat.clone());
        Ok(mat)
    }

    /// Computes mode matrices ahead of a parallel sweep. Relation spaces
    /// are built one at a time first, so that parallel callers never race
    /// to build the same one.
    pub fn prefetch(&self, keys: &BTreeSet<MatrixKey>) -> Result<()> {
        let mut cutoffs = BTreeSet::new();
        for &((w, _), p, n) in keys {
            let t = Self::target_level(w, p, n);
            if t < 0 || t > self.config.levels as i64 {
                continue;
            }
            cutoffs.insert((t as usize, self.product_cutoff(w, n, t as usize)));
        }
        for (t, c) in cutoffs {
            self.relations(t, c)?;
        }
        let keys: Vec<_> = keys.iter().copied().collect();
        keys.par_iter().try_for_each(|&(k, p, n)| self.mode_matrix_basis(k, p, n).map(|_| ()))
    }

    /// Matrix of `u_p` from level `n`, for homogeneous `u`; rows index the
    /// target level, which has no rows when it would be negative.
    pub fn mode_matrix(&self, u: &GradedVector<S>, p: i64, n: usize) -> Result<Matrix<S>> {
        let Some(wt) = u.weight() else {
            if u.is_zero() {
                return Ok(Vec::new());
            }
            return Err(Error::Precondition("modes of the induced module need a homogeneous element".into()));
        };
        let t = Self::target_level(wt, p, n);
        if t < 0 {
            return Ok(Vec::new());
        }
        self.check_level(t)?;
        let mut out = vec![vec![S::zero(); self.dim(n)]; self.dim(t as usize)];
        for (w, i, c) in u.iter() {
            let m = self.mode_matrix_basis((w, i), p, n)?;
            for (r, row) in m.iter().enumerate() {
                for (j, x) in row.iter().enumerate() {
                    out[r][j] = out[r][j].clone() + c.clone() * x.clone();
                }
            }
        }
        Ok(out)
    }

    /// `u_p x` for `x` in level `n`.
    pub fn mode(&self, u: &GradedVector<S>, p: i64, n: usize, x: &[S]) -> Result<Vec<S>> {
        Ok(mat_vec(&self.mode_matrix(u, p, n)?, x))
    }

    /// The vacuum acts by `δ_{p,-1}` on every level, as matrices.
    pub fn vacuum_check(&self) -> Result<GridReport> {
        let vac = self.voa.vacuum();
        let top = self.config.levels as i64;
        let mut outcomes = Vec::new();
        for n in 0..=self.config.levels {
            for p in (n as i64 - 1 - top)..=(n as i64 - 1) {
                let got = self.mode_matrix(&vac, p, n)?;
                let t = Self::target_level(0, p, n) as usize;
                let want: Matrix<S> =
                    if p == -1 { identity(self.dim(n)) } else { vec![vec![S::zero(); self.dim(n)]; self.dim(t)] };
                outcomes.push((got != want).then(|| Failure {
                    check: "vacuum".into(),
                    inputs: json!({"level": n, "p": p}),
                    residual: format!("{got:?}"),
                    repro: self.repro(),
                }));
            }
        }
        Ok(self.report("vacuum", outcomes))
    }

    /// `[a_p, b_q] = Σ_i C(p, i) (a_i b)_{p+q-i}` on every level where all
    /// intermediate levels are built.
    pub fn commutator_check(&self, elements: &[GradedVector<S>], range: i64) -> Result<GridReport> {
        let mut tuples = Vec::new();
        for (ia, a) in elements.iter().enumerate() {
            for (ib, b) in elements.iter().enumerate() {
                let (Some(wa), Some(wb)) = (a.weight(), b.weight()) else { continue };
                for p in -range..=range {
                    for q in -range..=range {
                        for n in 0..=self.config.levels {
                            let mid_b = Self::target_level(wb, q, n);
                            let mid_a = Self::target_level(wa, p, n);
                            let t = (wa + wb) as i64 - p - q - 2 + n as i64;
                            let top = self.config.levels as i64;
                            if t < 0 || t > top || mid_a > top || mid_b > top {
                                continue;
                            }
                            tuples.push((ia, ib, p, q, n));
                        }
                    }
                }
            }
        }
        let mut needed = BTreeSet::new();
        let mut want = |u: &GradedVector<S>, p: i64, n: i64| {
            if n >= 0 {
                needed.extend(u.iter().map(|(w, i, _)| ((w, i), p, n as usize)));
            }
        };
        for &(ia, ib, p, q, n) in &tuples {
            let (a, b) = (&elements[ia], &elements[ib]);
            let (wa, wb) = (a.weight().unwrap(), b.weight().unwrap());
            want(b, q, n as i64);
            want(a, p, n as i64);
            want(a, p, Self::target_level(wb, q, n));
            want(b, q, Self::target_level(wa, p, n));
            for i in 0..(wa + wb) as i64 {
                want(&self.voa.mode(a, i, b)?, p + q - i, n as i64);
            }
        }
        self.prefetch(&needed)?;
        let outcomes: Vec<Option<Failure>> = tuples
            .par_iter()
            .map(|&(ia, ib, p, q, n)| {
                let (a, b) = (&elements[ia], &elements[ib]);
                let t = ((a.weight().unwrap() + b.weight().unwrap()) as i64 - p - q - 2 + n as i64) as usize;
                let zero = || vec![vec![S::zero(); self.dim(n)]; self.dim(t)];
                let mut lhs = zero();
                let ab = self.compose(a, p, b, q, n)?;
                let ba = self.compose(b, q, a, p, n)?;
                for (r, out) in lhs.iter_mut().enumerate() {
                    for (j, cell) in out.iter_mut().enumerate() {
                        let x = ab.get(r).map_or(S::zero(), |row| row[j].clone());
                        let y = ba.get(r).map_or(S::zero(), |row| row[j].clone());
                        *cell = x - y;
                    }
                }
                let mut rhs = zero();
                let max_i = (a.weight().unwrap() + b.weight().unwrap()) as i64 - 1;
                for i in 0..=max_i.max(-1) {
                    let c = binom::<S>(p, i);
                    if c.is_zero() {
                        continue;
                    }
                    let aib = self.voa.mode(a, i, b)?;
                    if aib.is_zero() {
                        continue;
                    }
                    let mat = self.mode_matrix(&aib, p + q - i, n)?;
                    for (r, row) in mat.iter().enumerate() {
                        for (j, x) in row.iter().enumerate() {
                            rhs[r][j] = rhs[r][j].clone() + c.clone() * x.clone();
                        }
                    }
                }
                Ok((lhs != rhs).then(|| Failure {
                    check: "commutator".into(),
                    inputs: json!({
                        "a": self.voa.format(a), "b": self.voa.format(b), "p": p, "q": q, "level": n
                    }),
                    residual: "brackets differ".into(),
                    repro: self.repro(),
                }))
            })
            .collect::<Result<_>>()?;
        Ok(self.report("commutator", outcomes))
    }

    /// `x_{px} y_{py}` from level `n`; empty when the middle level is negative.
    fn compose(&self, x: &GradedVector<S>, px: i64, y: &GradedVector<S>, py: i64, n: usize) -> Result<Matrix<S>> {
        let first = self.mode_matrix(y, py, n)?;
        let mid = Self::target_level(y.weight().unwrap_or(0), py, n);
        if mid < 0 || first.is_empty() {
            return Ok(Vec::new());
        }
        Ok(mat_mul(&self.mode_matrix(x, px, mid as usize)?, &first))
    }

    /// `(a_r b)_q = Σ_{i≥0} (-1)^i C(r, i) (a_{r-i} b_{q+i} - (-1)^r b_{q+r-i} a_i)`
    /// for `r < 0`, on every level where the intermediate levels are built.
    /// Both sums stop once the inner mode leaves the nonnegative levels.
    pub fn iterate_check(&self, elements: &[GradedVector<S>], range: i64) -> Result<GridReport> {
        let top = self.config.levels as i64;
        let mut tuples = Vec::new();
        for (ia, a) in elements.iter().enumerate() {
            for (ib, b) in elements.iter().enumerate() {
                let (Some(wa), Some(wb)) = (a.weight(), b.weight()) else { continue };
                for r in -range..=-1 {
                    for q in -range..=range {
                        for n in 0..=self.config.levels {
                            let t = (wa + wb) as i64 - r - q - 2 + n as i64;
                            let mid_b = Self::target_level(wb, q, n);
                            let mid_a = Self::target_level(wa, 0, n);
                            if t < 0 || t > top || mid_a > top || mid_b > top {
                                continue;
                            }
                            tuples.push((ia, ib, r, q, n));
                        }
                    }
                }
            }
        }
        let mut needed = BTreeSet::new();
        let mut want = |u: &GradedVector<S>, p: i64, n: i64| {
            if (0..=top).contains(&n) {
                needed.extend(u.iter().map(|(w, i, _)| ((w, i), p, n as usize)));
            }
        };
        for &(ia, ib, r, q, n) in &tuples {
            let (a, b) = (&elements[ia], &elements[ib]);
            want(&self.voa.mode(a, r, b)?, q, n as i64);
            for (x, px, y, py, _) in iterate_summands(a, b, r, q, n) {
                want(y, py, n as i64);
                want(x, px, Self::target_level(y.weight().unwrap(), py, n));
            }
        }
        self.prefetch(&needed)?;
        let outcomes: Vec<Option<Failure>> = tuples
            .par_iter()
            .map(|&(ia, ib, r, q, n)| {
                let (a, b) = (&elements[ia], &elements[ib]);
                let t = ((a.weight().unwrap() + b.weight().unwrap()) as i64 - r - q - 2 + n as i64) as usize;
                let mut rhs = vec![vec![S::zero(); self.dim(n)]; self.dim(t)];
                for (x, px, y, py, c) in iterate_summands(a, b, r, q, n) {
                    let m = self.compose(x, px, y, py, n)?;
                    for (row, mrow) in rhs.iter_mut().zip(&m) {
                        for (e, v) in row.iter_mut().zip(mrow) {
                            *e = e.clone() + c.clone() * v.clone();
                        }
                    }
                }
                let arb = self.voa.mode(a, r, b)?;
                let lhs = if arb.is_zero() {
                    vec![vec![S::zero(); self.dim(n)]; self.dim(t)]
                } else {
                    self.mode_matrix(&arb, q, n)?
                };
                Ok((lhs != rhs).then(|| Failure {
                    check: "iterate".into(),
                    inputs: json!({
                        "a": self.voa.format(a), "b": self.voa.format(b), "r": r, "q": q, "level": n
                    }),
                    residual: "sides differ".into(),
                    repro: self.repro(),
                }))
            })
            .collect::<Result<_>>()?;
        Ok(self.report("iterate", outcomes))
    }

    fn repro(&self) -> String {
        format!(
            "bimod verma --voa {} --m {} --levels {} --cutoff {} --u-spec <input>",
            self.voa.id(),
            self.config.m,
            self.config.levels,
            self.config.cutoff
        )
    }

    fn report(&self, check: &str, outcomes: Vec<Option<Failure>>) -> GridReport {
        let cases = outcomes.len();
        let failures: Vec<Failure> = outcomes.into_iter().flatten().collect();
        GridReport {
            check: check.into(),
            algebra: self.voa.id(),
            module: Some(format!("induced(m={}, dim U={})", self.config.m, self.input.dim)),
            cases,
            passed: cases - failures.len(),
            failures,
        }
    }

    /// Errors when every relation of the level `m - 1` algebra acts on `U`
    /// by zero. The action of arbitrary elements is recovered by closing the
    /// generating set under products.
    fn check_not_factoring(&self) -> Result<()> {
        let voa = &self.voa;
        let m = self.config.m;
        let cutoff = self.config.cutoff;
        let span = self.spans.get(voa, OSpaceSpec::new(self.config.kind, m, m, cutoff))?;
        let amb = span.ambient_dim();
        let cap = span.quotient_dim();
        let mut tracker = SpanBasis::new(amb, Elimination::Exact);
        let mut elements: Vec<(GradedVector<S>, Matrix<S>)> = Vec::new();
        let mut try_add =
            |v: GradedVector<S>, mat: Matrix<S>, elements: &mut Vec<(GradedVector<S>, Matrix<S>)>| -> Result<()> {
                let nf = span.reduce(&v)?;
                if elements.len() < cap && tracker.insert(&span.space.dense(&nf)?) {
                    elements.push((nf, mat));
                }
                Ok(())
            };
        try_add(voa.vacuum(), identity(self.input.dim), &mut elements)?;
        for g in &self.input.generators {
            try_add(g.element.clone(), g.matrix.clone(), &mut elements)?;
        }
        let mut grew = true;
        while grew && elements.len() < cap {
            grew = false;
            let current = elements.clone();
            for (x, mx) in &current {
                for (y, my) in &current {
                    let top = x.top_weight().unwrap_or(0) + y.top_weight().unwrap_or(0) + 2 * m as usize;
                    if top > cutoff {
                        continue;
                    }
                    let before = elements.len();
                    try_add(star_right(voa, x, y, m, m)?, mat_mul(mx, my), &mut elements)?;
                    grew |= elements.len() > before;
                }
            }
        }
        let solver = {
            let mut s = SpanBasis::new(amb + cap, Elimination::Exact);
            for (k, (x, _)) in elements.iter().enumerate() {
                let mut row = span.space.dense(x)?;
                row.resize(amb + cap, S::zero());
                row[amb + k] = S::one();
                s.insert(&row);
            }
            s
        };
        for g in oprime_candidates(voa, m - 1, m - 1, cutoff) {
            let c = span.reduce(&g.evaluate(voa, m - 1, m - 1)?)?;
            let mut row = span.space.dense(&c)?;
            row.resize(amb + cap, S::zero());
            let nf = solver.reduce(&row);
            if nf.iter().any(|(j, _)| *j < amb) {
                continue;
            }
            let mut mat = vec![vec![S::zero(); self.input.dim]; self.input.dim];
            for (j, x) in nf {
                let (_, em) = &elements[j - amb];
                for (r, row) in em.iter().enumerate() {
                    for (s, y) in row.iter().enumerate() {
                        mat[r][s] = mat[r][s].clone() - x.clone() * y.clone();
                    }
                }
            }
            if mat.iter().flatten().any(|x| !x.is_zero()) {
                return Ok(());
            }
        }
        Err(Error::FactorsThrough(m as usize - 1, m as usize))
    }
}

/// `φ̄(v ⊗ w) = o_{n,m}(v) φ(w)` for an equivariant `φ: U → M(m)`.
#[derive(Debug)]
pub struct UniversalMap<'a, S> {
    verma: &'a VermaModule<S>,
    target: &'a TestModule<S>,
    images: Vec<GradedVector<S>>,
}

impl<'a, S: Scalar> UniversalMap<'a, S> {
    pub fn new(verma: &'a VermaModule<S>, target: &'a TestModule<S>, images: Vec<GradedVector<S>>) -> Result<Self> {
        let voa = verma.voa();
        let m = verma.config().m as usize;
        if images.len() != verma.input().dim {
            return Err(Error::Precondition(format!("need {} images, got {}", verma.input().dim, images.len())));
        }
        if let Some(bad) = images.iter().find(|v| !v.is_zero() && v.weight() != Some(m)) {
            return Err(Error::Precondition(format!("image {} is not in level {m}", target.format(bad))));
        }
        for g in &verma.input().generators {
            for k in 0..images.len() {
                let lhs = target.o_action(voa, &g.element, &images[k], m)?;
                let mut rhs = GradedVector::zero();
                for (l, row) in g.matrix.iter().enumerate() {
                    rhs.add_scaled(&images[l], &row[k]);
                }
                if lhs != rhs {
                    return Err(Error::NotEquivariant(format!(
                        "{} on basis vector {k}: {} vs {}",
                        voa.format(&g.element),
                        target.format(&lhs),
                        target.format(&rhs)
                    )));
                }
            }
        }
        Ok(Self { verma, target, images })
    }

    /// Image of `x` in level `n`.
    pub fn apply(&self, n: usize, x: &[S]) -> Result<GradedVector<S>> {
        let mut out = GradedVector::zero();
        for (j, c) in x.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (v, k) = self.verma.representative(n, j);
            let y = self.target.o_action(self.verma.voa(), &v, &self.images[k], n)?;
            out.add_scaled(&y, c);
        }
        Ok(out)
    }

    /// The map kills every relation used to build level `n`.
    pub fn kills_relations(&self, n: usize) -> Result<bool> {
        let rel = self.verma.relations(n, self.verma.config.cutoff)?;
        let voa = self.verma.voa();
        for row in rel.basis.rows() {
            let parts = rel.space.split(row);
            let mut out = GradedVector::zero();
            for (k, v) in parts.iter().enumerate() {
                if !v.is_zero() {
                    out = &out + &self.target.o_action(voa, v, &self.images[k], n)?;
                }
            }
            if !out.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `φ̄(u_p x) = u_p φ̄(x)` on every basis vector.
    pub fn intertwining_check(&self, elements: &[GradedVector<S>], range: i64) -> Result<GridReport> {
        let verma = self.verma;
        let voa = verma.voa();
        let mut outcomes = Vec::new();
        for u in elements {
            let Some(wt) = u.weight() else { continue };
            for p in -range..=range {
                for n in 0..=verma.config.levels {
                    let t = VermaModule::<S>::target_level(wt, p, n);
                    if t < 0 || t > verma.config.levels as i64 {
                        continue;
                    }
                    let mat = verma.mode_matrix(u, p, n)?;
                    for j in 0..verma.dim(n) {
                        let mut x = vec![S::zero(); verma.dim(n)];
                        x[j] = S::one();
                        let lhs = self.apply(t as usize, &mat_vec(&mat, &x))?;
                        let rhs = self.target.mode(voa, u, p, &self.apply(n, &x)?)?;
                        outcomes.push((lhs != rhs).then(|| Failure {
                            check: "intertwining".into(),
                            inputs: json!({"u": voa.format(u), "p": p, "level": n, "basis": j}),
                            residual: self.target.format(&(&lhs - &rhs)),
                            repro: verma.repro(),
                        }));
                    }
                }
            }
        }
        Ok(verma.report("intertwining", outcomes))
    }
}
