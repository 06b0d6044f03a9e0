//! Identities between products that hold as vectors, before any quotient.

use rayon::prelude::*;
use serde_json::json;

use crate::bimodule::checks::Failure;
use crate::bimodule::products::{shift_element, shift_left_identity, shift_level_identity};
use crate::error::{Error, Result};
use crate::report::GridReport;
use crate::scalar::Scalar;
use crate::voa::{GradedVector, Voa};

/// Weight the algebra must be built to for [`shift_identity_grid`].
pub fn shift_grid_weight(max_weight: usize, max_level: u32) -> usize {
    2 * max_weight + 2 * max_level as usize + 1
}

/// Checks both shift identities for every basis pair `u, v` of weight at most
/// `max_weight`, with `m, n <= max_level` for the left identity and
/// `m, p1, p2 <= max_level` for the level identity.
pub fn shift_identity_grid<S: Scalar>(
    voa: &Voa<S>,
    max_weight: usize,
    max_level: u32,
) -> Result<(GridReport, GridReport)> {
    let needed = shift_grid_weight(max_weight, max_level);
    if voa.max_weight() < needed {
        return Err(Error::WeightRange { needed, max: voa.max_weight() });
    }
    let keys = voa.basis_keys(max_weight);
    let pairs: Vec<((usize, usize), (usize, usize))> =
        keys.iter().flat_map(|&u| keys.iter().map(move |&v| (u, v))).collect();
    let levels: Vec<u32> = (0..=max_level).collect();
    let repro = |shifted: &GradedVector<S>, v: &GradedVector<S>, m: u32, p: u32, n: u32| {
        format!(
            "bimod product --voa {} --max-weight {} --u \"{}\" --v \"{}\" --m {m} --p {p} --n {n}",
            voa.id(),
            voa.max_weight(),
            voa.format(shifted),
            voa.format(v)
        )
    };
    let outcomes: Vec<(Vec<Option<Failure>>, Vec<Option<Failure>>)> = pairs
        .par_iter()
        .map(|&(ku, kv)| {
            let u = GradedVector::basis(ku.0, ku.1);
            let v = GradedVector::basis(kv.0, kv.1);
            let names = json!({"u": voa.format_basis(ku.0, ku.1), "v": voa.format_basis(kv.0, kv.1)});
            let mut left = Vec::new();
            for &m in &levels {
                for &n in &levels {
                    let (lhs, rhs) = shift_left_identity(voa, &u, &v, m, n)?;
                    left.push((lhs != rhs).then(|| Failure {
                        check: "shift_left".into(),
                        inputs: json!({"pair": names, "m": m, "n": n}),
                        residual: voa.format(&(&lhs - &rhs)),
                        repro: repro(&shift_element(voa, &u, n, n).unwrap_or_default(), &v, m, n, n),
                    }));
                }
            }
            let mut level = Vec::new();
            for &m in &levels {
                for &p1 in &levels {
                    for &p2 in &levels {
                        let (lhs, rhs) = shift_level_identity(voa, &u, &v, m, p1, p2)?;
                        level.push((lhs != rhs).then(|| Failure {
                            check: "shift_level".into(),
                            inputs: json!({"pair": names, "m": m, "p1": p1, "p2": p2}),
                            residual: voa.format(&(&lhs - &rhs)),
                            repro: repro(&shift_element(voa, &u, p1, p2).unwrap_or_default(), &v, m, p1, p2),
                        }));
                    }
                }
            }
            Ok((left, level))
        })
        .collect::<Result<_>>()?;
    let (left, level): (Vec<_>, Vec<_>) = outcomes.into_iter().unzip();
    Ok((
        GridReport::collect("shift_left", voa.id(), None, left.into_iter().flatten().collect()),
        GridReport::collect("shift_level", voa.id(), None, level.into_iter().flatten().collect()),
    ))
}
