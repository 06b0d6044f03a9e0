//! The level-changing products and residue pairings on `V`.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::formal::binom::binom;
use crate::formal::laurent::{expand_binomial_power, LaurentPoly};
use crate::scalar::{sign, Scalar};
use crate::voa::{GradedVector, Voa};

/// Selects `u *^n_{m,p} v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ProductParams {
    pub m: u32,
    pub p: u32,
    pub n: u32,
}

impl ProductParams {
    pub fn new(m: u32, p: u32, n: u32) -> Self {
        Self { m, p, n }
    }
}

/// `Res_z g(z) Y(u,z) v = Σ_e g_e u_e v` for homogeneous `u` and a
/// univariate `g`.
pub fn residue_pairing<S: Scalar>(
    voa: &Voa<S>,
    u: &GradedVector<S>,
    g: &LaurentPoly<S>,
    v: &GradedVector<S>,
) -> Result<GradedVector<S>> {
    let mut out = GradedVector::zero();
    for (e, c) in g.terms() {
        out.add_scaled(&voa.mode(u, e[0], v)?, c);
    }
    Ok(out)
}

/// Applies `Res_z g_w(z) Y(u_w,z) v` to each weight component `u_w` of `u`,
/// with the pairing polynomial depending on the weight.
pub fn residue_by_weight<S: Scalar>(
    voa: &Voa<S>,
    u: &GradedVector<S>,
    v: &GradedVector<S>,
    g: impl Fn(i64) -> LaurentPoly<S>,
) -> Result<GradedVector<S>> {
    let mut out = GradedVector::zero();
    if v.is_zero() {
        return Ok(out);
    }
    for (w, part) in u.components() {
        out.add_scaled(&residue_pairing(voa, &part, &g(w as i64), v)?, &S::one());
    }
    Ok(out)
}

/// `Σ_{i≤p} (-1)^i C(m+n-p+i, i) z^{-(m+n-p+i+1)} (1+z)^{wt+m}`.
pub fn star_kernel<S: Scalar>(wt: i64, params: ProductParams) -> LaurentPoly<S> {
    let (m, p, n) = (params.m as i64, params.p as i64, params.n as i64);
    let mut g = LaurentPoly::zero(&["z"]);
    for i in 0..=p {
        let c = sign::<S>(i) * binom::<S>(m + n - p + i, i);
        if c.is_zero() {
            continue;
        }
        g = &g + &expand_binomial_power::<S>("z", -(m + n - p + i + 1), wt + m, 0).scale(&c);
    }
    g
}

/// `u *^n_{m,p} v`.
pub fn star_general<S: Scalar>(
    voa: &Voa<S>,
    u: &GradedVector<S>,
    v: &GradedVector<S>,
    params: ProductParams,
) -> Result<GradedVector<S>> {
    residue_by_weight(voa, u, v, |w| star_kernel(w, params))
}

/// The left action product, `p = n`.
pub fn star_bar<S: Scalar>(
    voa: &Voa<S>,
    u: &GradedVector<S>,
    v: &GradedVector<S>,
    m: u32,
    n: u32,
) -> Result<GradedVector<S>> {
    star_general(voa, u, v, ProductParams::new(m, n, n))
}

/// The right action product, `p = m`.
pub fn star_right<S: Scalar>(
    voa: &Voa<S>,
    u: &GradedVector<S>,
    v: &GradedVector<S>,
    m: u32,
    n: u32,
) -> Result<GradedVector<S>> {
    star_general(voa, u, v, ProductParams::new(m, m, n))
}

/// `Res_z (1+z)^{wt u+m+s} z^{-(n+m+2+k)} Y(u,z) v`; `k = s = 0` is `u ∘^n_m v`.
pub fn residue_family<S: Scalar>(
    voa: &Voa<S>,
    u: &GradedVector<S>,
    v: &GradedVector<S>,
    m: u32,
    n: u32,
    k: u32,
    s: u32,
) -> Result<GradedVector<S>> {
    let (m, n, k, s) = (m as i64, n as i64, k as i64, s as i64);
    residue_by_weight(voa, u, v, |w| expand_binomial_power("z", -(n + m + 2 + k), w + m + s, 0))
}

/// `u ∘^n_m v`.
pub fn circle<S: Scalar>(
    voa: &Voa<S>,
    u: &GradedVector<S>,
    v: &GradedVector<S>,
    m: u32,
    n: u32,
) -> Result<GradedVector<S>> {
    residue_family(voa, u, v, m, n, 0, 0)
}

/// `Res_z (1+z)^{wt u + shift} Y(u,z) v`, where a negative power is
/// expanded in nonnegative powers of `z` and cut where the modes vanish.
pub fn residue_binomial_power<S: Scalar>(
    voa: &Voa<S>,
    u: &GradedVector<S>,
    v: &GradedVector<S>,
    shift: i64,
) -> Result<GradedVector<S>> {
    let Some(top_v) = v.top_weight() else { return Ok(GradedVector::zero()) };
    residue_by_weight(voa, u, v, |w| {
        let order = (w + top_v as i64 - 1).max(0) as usize;
        expand_binomial_power("z", 0, w + shift, order)
    })
}

/// `L(-1)u + (L(0) + m - n)u`.
pub fn shift_element<S: Scalar>(voa: &Voa<S>, u: &GradedVector<S>, m: u32, n: u32) -> Result<GradedVector<S>> {
    let mut out = voa.virasoro(-1, u)?;
    out.add_scaled(&voa.l0(u), &S::one());
    out.add_scaled(u, &S::from_i64(m as i64 - n as i64));
    Ok(out)
}

/// Both sides of `(L(-1)u + L(0)u) *̄^n_m v = (n+m+1)(-1)^n C(n+m,m) u ∘^n_m v`.
pub fn shift_left_identity<S: Scalar>(
    voa: &Voa<S>,
    u: &GradedVector<S>,
    v: &GradedVector<S>,
    m: u32,
    n: u32,
) -> Result<(GradedVector<S>, GradedVector<S>)> {
    let shifted = shift_element(voa, u, n, n)?;
    let lhs = star_bar(voa, &shifted, v, m, n)?;
    let (mi, ni) = (m as i64, n as i64);
    let c = S::from_i64(ni + mi + 1) * sign::<S>(ni) * binom::<S>(ni + mi, mi);
    let rhs = circle(voa, u, v, m, n)?.scale(&c);
    Ok((lhs, rhs))
}

/// Both sides of
/// `(L(-1)u + (L(0)+p1-p2)u) *^{p2}_{m,p1} v = (-1)^{p1} C(m+p2,p1) (m+p2+1) Res_z (1+z)^{wt u+m} z^{-(m+p2+2)} Y(u,z) v`.
pub fn shift_level_identity<S: Scalar>(
    voa: &Voa<S>,
    u: &GradedVector<S>,
    v: &GradedVector<S>,
    m: u32,
    p1: u32,
    p2: u32,
) -> Result<(GradedVector<S>, GradedVector<S>)> {
    let shifted = shift_element(voa, u, p1, p2)?;
    let lhs = star_general(voa, &shifted, v, ProductParams::new(m, p1, p2))?;
    let (mi, p1i, p2i) = (m as i64, p1 as i64, p2 as i64);
    let c = sign::<S>(p1i) * binom::<S>(mi + p2i, p1i) * S::from_i64(mi + p2i + 1);
    let rhs = residue_by_weight(voa, u, v, |w| expand_binomial_power("z", -(mi + p2i + 2), w + mi, 0))?.scale(&c);
    Ok((lhs, rhs))
}

/// Top weight of `u *^n_{m,p} v` for homogeneous inputs of the given weights.
pub fn star_top_weight(wu: usize, wv: usize, params: ProductParams) -> usize {
    wu + wv + params.m as usize + params.n as usize
}
