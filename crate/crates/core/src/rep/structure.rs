//! Quotient dimensions of a rational algebra against its module table.

use rayon::prelude::*;
use serde::Serialize;

use crate::bimodule::ospace::{OKind, SpanCache};
use crate::bimodule::products::{circle, shift_element};
use crate::bimodule::quotient::{quotient_dim, QuotientReport};
use crate::error::{Error, Result};
use crate::linalg::{Elimination, FilteredSpace, SpanBasis};
use crate::scalar::Scalar;
use crate::voa::{CharacterTable, GradedVector, Voa};

/// `dim W^i(m - l) · dim W^i(n - l)` for one module and one `l`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomTerm {
    pub l: usize,
    pub module: String,
    pub source_dim: usize,
    pub target_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StructureReport {
    pub quotient: QuotientReport,
    pub terms: Vec<HomTerm>,
    /// Sum of the products in `terms`.
    pub expected: usize,
    pub matches: bool,
    /// Quotient dimensions at `cutoff, cutoff + 1, ...`; the value at the
    /// cutoff counts as stable when all of them agree.
    pub confirmation: Vec<(usize, usize)>,
    /// For `n == m`, the dimension of the level-`n` algebra computed from
    /// its own, smaller generating family.
    pub level_algebra_dim: Option<usize>,
}

impl StructureReport {
    pub fn passed(&self) -> bool {
        self.matches && self.stable() && self.level_algebra_dim.is_none_or(|d| d == self.quotient.dim)
    }

    pub fn stable(&self) -> bool {
        self.confirmation.iter().all(|&(_, d)| d == self.quotient.dim)
    }
}

/// The Hom-space decomposition predicted for `(n, m)`.
pub fn hom_terms(table: &CharacterTable, n: usize, m: usize) -> Vec<HomTerm> {
    let mut out = Vec::new();
    for l in 0..=n.min(m) {
        for w in &table.modules {
            out.push(HomTerm { l, module: w.label.clone(), source_dim: w.dims[m - l], target_dim: w.dims[n - l] });
        }
    }
    out
}

/// `dim F_W / O_n(V)` where `O_n(V)` is spanned by
/// `Res_z (1+z)^{wt u + n} z^{-2n-2} Y(u,z) v` and `(L(-1) + L(0)) u`,
/// admitted when their top weight fits under the cutoff.
pub fn level_algebra_dim<S: Scalar>(voa: &Voa<S>, n: u32, cutoff: usize) -> Result<usize> {
    if voa.max_weight() < cutoff + 1 {
        return Err(Error::WeightRange { needed: cutoff + 1, max: voa.max_weight() });
    }
    let space = FilteredSpace::new(voa.dims(cutoff), 1);
    let keys = voa.basis_keys(cutoff);
    let mut jobs: Vec<((usize, usize), Option<(usize, usize)>)> = Vec::new();
    for &u in &keys {
        if u.0 < cutoff {
            jobs.push((u, None));
        }
        for &v in &keys {
            if u.0 + v.0 + 2 * (n as usize) < cutoff {
                jobs.push((u, Some(v)));
            }
        }
    }
    let rows: Vec<Vec<S>> = jobs
        .par_iter()
        .map(|&(u, v)| {
            let uu = GradedVector::basis(u.0, u.1);
            let x = match v {
                None => shift_element(voa, &uu, n, n)?,
                Some(v) => circle(voa, &uu, &GradedVector::basis(v.0, v.1), n, n)?,
            };
            space.dense(&x)
        })
        .collect::<Result<_>>()?;
    let mut basis = SpanBasis::new(space.dim(), Elimination::Screened);
    for r in &rows {
        basis.insert(r);
    }
    Ok(space.dim() - basis.rank())
}

/// Compares `dim F_W / O_{n,m}` with the Hom-space count from `table`, and
/// recomputes the quotient at the next `confirm` cutoffs.
pub fn structure_check<S: Scalar>(
    voa: &Voa<S>,
    cache: &SpanCache<S>,
    table: &CharacterTable,
    kind: OKind,
    n: u32,
    m: u32,
    cutoff: usize,
    confirm: usize,
) -> Result<StructureReport> {
    let need = n.max(m) as usize;
    if table.max_level() < need {
        return Err(Error::LevelRange { needed: need, max: table.max_level() });
    }
    let quotient = quotient_dim(voa, cache, kind, n, m, cutoff, None)?;
    let mut confirmation = vec![(cutoff, quotient.dim)];
    for w in cutoff + 1..=cutoff + confirm {
        confirmation.push((w, quotient_dim(voa, cache, kind, n, m, w, None)?.dim));
    }
    let terms = hom_terms(table, n as usize, m as usize);
    let expected = terms.iter().map(|t| t.source_dim * t.target_dim).sum();
    let level_algebra_dim = if n == m { Some(level_algebra_dim(voa, n, cutoff)?) } else { None };
    Ok(StructureReport {
        matches: quotient.dim == expected,
        quotient,
        terms,
        expected,
        confirmation,
        level_algebra_dim,
    })
}
