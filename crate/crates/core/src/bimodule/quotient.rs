//! Dimensions of quotients `F_W / O_W` and their stabilization in `W`.

use serde::Serialize;

use crate::bimodule::ospace::{OKind, OSpaceSpec, SpanCache};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::voa::Voa;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuotientReport {
    pub algebra: String,
    pub kind: OKind,
    pub n: u32,
    pub m: u32,
    pub cutoff: usize,
    pub aux_bound: u32,
    pub ambient_dim: usize,
    pub rank: usize,
    pub dim: usize,
    /// Quotient dimension at `cutoff - 1`, when that cutoff exists.
    pub previous_dim: Option<usize>,
    /// The dimension did not change from `cutoff - 1` to `cutoff`.
    pub stabilized: bool,
    /// Basis vectors spanning a complement of the relations.
    pub representatives: Vec<String>,
}

/// Computes `dim F_W / O_W` together with the value one weight lower.
pub fn quotient_dim<S: Scalar>(
    voa: &Voa<S>,
    cache: &SpanCache<S>,
    kind: OKind,
    n: u32,
    m: u32,
    cutoff: usize,
    aux_bound: Option<u32>,
) -> Result<QuotientReport> {
    if voa.max_weight() < cutoff + 1 {
        return Err(Error::WeightRange { needed: cutoff + 1, max: voa.max_weight() });
    }
    let spec = |w: usize| {
        let s = OSpaceSpec::new(kind, n, m, w);
        match aux_bound {
            Some(a) => s.with_aux_bound(a),
            None => s,
        }
    };
    let span = cache.get(voa, spec(cutoff))?;
    let previous_dim = if cutoff > 0 { Some(cache.get(voa, spec(cutoff - 1))?.quotient_dim()) } else { None };
    let dim = span.quotient_dim();
    Ok(QuotientReport {
        algebra: voa.id(),
        kind,
        n,
        m,
        cutoff,
        aux_bound: span.spec.aux_bound,
        ambient_dim: span.ambient_dim(),
        rank: span.rank(),
        dim,
        previous_dim,
        stabilized: previous_dim == Some(dim),
        representatives: span.quotient_basis().into_iter().map(|(w, i)| voa.format_basis(w, i)).collect(),
    })
}
