use std::sync::Arc;

use bimod::bimodule::checks::{descent_check, membership_swap, phi_check, stability_check, swap_check, swap_residual};
use bimod::bimodule::exact::shift_identity_grid;
use bimod::bimodule::products::{residue_binomial_power, shift_left_identity};
use bimod::bimodule::{
    circle, quotient_dim, star_general, Headroom, OKind, OSpaceSpec, ProductParams, SampleShape, SpanCache,
};
use bimod::linalg::{Elimination, SpanBasis};
use bimod::rep::TestModule;
use bimod::voa::{GradedVector, Voa, VoaKind};
use bimod::{Rational, Scalar, Vector};

fn heis(w: usize) -> Arc<Voa> {
    Arc::new(Voa::new(VoaKind::Heisenberg, w).unwrap())
}

fn vir(w: usize) -> Arc<Voa> {
    Arc::new(Voa::new(VoaKind::Virasoro(Rational::from_ratio(1, 2)), w).unwrap())
}

fn ising(w: usize) -> Voa {
    Voa::new(VoaKind::Ising, w).unwrap()
}

fn cache() -> SpanCache<Rational> {
    SpanCache::new(Elimination::Screened)
}

const SMALL: SampleShape = SampleShape { max_weight: 2, max_level: 1 };

#[test]
fn sampled_suites_pass_on_heisenberg() {
    let v = heis(11);
    let c = cache();
    let h = Headroom::new(8, 10);
    for run in [swap_check, stability_check, phi_check, descent_check] {
        let r = run(&v, &c, h, SMALL, 3, 12).unwrap();
        assert!(r.all_passed(), "{}: {:?}", r.suite, r.failures);
        assert_eq!(r.cases, 12);
    }
}

#[test]
fn sampled_swap_passes_on_virasoro() {
    let v = vir(11);
    let r = swap_check(&v, &cache(), Headroom::new(8, 10), SMALL, 11, 12).unwrap();
    assert!(r.all_passed(), "{:?}", r.failures);
}

#[test]
fn sampled_reports_are_reproducible() {
    let v = heis(11);
    let h = Headroom::new(8, 10);
    let a = swap_check(&v, &cache(), h, SMALL, 5, 6).unwrap();
    let b = swap_check(&v, &cache(), h, SMALL, 5, 6).unwrap();
    assert_eq!(serde_json::to_value(&a).unwrap(), serde_json::to_value(&b).unwrap());
}

#[test]
fn swap_residuals_lie_in_the_span_for_basis_pairs() {
    let v = heis(11);
    let c = cache();
    let h = Headroom::new(8, 10);
    let keys = v.basis_keys(2);
    for &(wu, iu) in &keys {
        for &(wv, iv) in &keys {
            let (a, b) = (Vector::basis(wu, iu), Vector::basis(wv, iv));
            for (m, p1, p2) in [(0, 0, 0), (1, 1, 0), (1, 0, 1), (0, 1, -1), (1, -1, 2)] {
                assert!(membership_swap(&v, &c, h, &a, &b, m, p1, p2).unwrap(), "{wu}.{iu} {wv}.{iv} {m} {p1} {p2}");
            }
        }
    }
}

#[test]
fn perturbed_swap_residual_is_detected() {
    // Same residual with the binomial exponent one too large.
    let v = heis(11);
    let c = cache();
    let (m, p1, p2) = (1u32, 1i64, 1i64);
    let n = (p1 + p2 - m as i64) as u32;
    let span = c.get(&v, OSpaceSpec::new(OKind::Oprime, n, m, 8)).unwrap();
    let keys = v.basis_keys(2);
    let mut detected = false;
    for &(wu, iu) in &keys {
        for &(wv, iv) in &keys {
            let (a, b) = (Vector::basis(wu, iu), Vector::basis(wv, iv));
            let good = swap_residual(&v, &a, &b, m, p1, p2).unwrap();
            assert!(span.contains(&good).unwrap());
            let wrong = &residue_binomial_power(&v, &a, &b, m as i64 - 1 - p2).unwrap()
                - &residue_binomial_power(&v, &a, &b, m as i64 - p2).unwrap();
            detected |= !span.contains(&(&good + &wrong)).unwrap();
        }
    }
    assert!(detected);
}

#[test]
fn vacuum_is_not_a_relation() {
    let v = heis(9);
    let c = cache();
    for n in 0..3 {
        let span = c.get(&v, OSpaceSpec::new(OKind::Oprime, n, n, 8)).unwrap();
        assert!(!span.contains(&v.vacuum()).unwrap(), "n={n}");
    }
}

#[test]
fn circle_products_lie_in_the_span() {
    let v = heis(11);
    let c = cache();
    let keys = v.basis_keys(2);
    for n in 0..=2u32 {
        for m in 0..=2u32 {
            let span = c.get(&v, OSpaceSpec::new(OKind::Oprime, n, m, 10)).unwrap();
            for &(wu, iu) in &keys {
                for &(wv, iv) in &keys {
                    let x = circle(&v, &Vector::basis(wu, iu), &Vector::basis(wv, iv), m, n).unwrap();
                    assert!(span.contains(&x).unwrap(), "({n},{m}) {wu}.{iu} {wv}.{iv}");
                }
            }
        }
    }
}

#[test]
fn ising_low_level_quotients() {
    let v = ising(9);
    let c = cache();
    assert_eq!(quotient_dim(&v, &c, OKind::Ofull, 0, 0, 8, None).unwrap().dim, 3);
    assert_eq!(quotient_dim(&v, &c, OKind::Ofull, 1, 0, 8, None).unwrap().dim, 2);
    assert_eq!(quotient_dim(&v, &c, OKind::Ofull, 0, 1, 8, None).unwrap().dim, 2);
}

/// Lower bound on `dim F_W / O(V)` for the Heisenberg algebra: `u ↦ o(u)` on
/// the top of `M(1, λ)` kills the relations, so the rank of the evaluation
/// at `W + 1` distinct `λ` bounds the quotient from below.
fn heisenberg_evaluation_rank(v: &Voa, cutoff: usize) -> usize {
    let lambdas: Vec<Rational> = (0..=cutoff as i64).map(Rational::from_i64).collect();
    let modules: Vec<TestModule<Rational>> = lambdas.into_iter().map(|l| TestModule::fock(l, 0)).collect();
    let top = GradedVector::basis(0, 0);
    let mut span = SpanBasis::new(modules.len(), Elimination::Exact);
    for (w, i) in v.basis_keys(cutoff) {
        let u = Vector::basis(w, i);
        let row: Vec<Rational> = modules.iter().map(|t| t.o_action(v, &u, &top, 0).unwrap().coeff(0, 0)).collect();
        span.insert(&row);
    }
    span.rank()
}

#[test]
fn heisenberg_zhu_quotients_grow_linearly() {
    let v = heis(9);
    let c = cache();
    for w in [2usize, 4, 6, 8] {
        let q = quotient_dim(&v, &c, OKind::Ofull, 0, 0, w, None).unwrap();
        assert_eq!(heisenberg_evaluation_rank(&v, w), w + 1);
        assert_eq!(q.dim, w + 1, "W={w}");
    }
}

#[test]
fn relation_spaces_agree_on_small_heisenberg_grids() {
    let v = heis(8);
    let c = cache();
    for (n, m) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
        let full = c.get(&v, OSpaceSpec::new(OKind::Ofull, n, m, 7)).unwrap();
        let prime = c.get(&v, OSpaceSpec::new(OKind::Oprime, n, m, 7)).unwrap();
        assert_eq!(full.rank(), prime.rank(), "({n},{m})");
    }
}

#[test]
fn shift_identities_hold_on_small_grids() {
    for v in [heis(10), vir(10)] {
        let (left, level) = shift_identity_grid(&v, 2, 1).unwrap();
        assert!(left.all_passed() && level.all_passed(), "{:?} {:?}", left.failures, level.failures);
        assert_eq!(left.cases, v.basis_keys(2).len().pow(2) * 4);
    }
}

#[test]
fn shift_identity_needs_the_shifted_element() {
    // Feeding u itself instead of its shift breaks the identity.
    let v = heis(10);
    let a = Vector::basis(1, 0);
    let (lhs, rhs) = shift_left_identity(&v, &a, &a, 1, 0).unwrap();
    assert_eq!(lhs, rhs);
    let unshifted = star_general(&v, &a, &a, ProductParams::new(1, 0, 0)).unwrap();
    assert_ne!(unshifted, rhs);
}

#[test]
fn span_cache_separates_algebras() {
    let c = cache();
    let h = heis(7);
    let i = ising(7);
    let spec = OSpaceSpec::new(OKind::Oprime, 0, 0, 6);
    let a = c.get(&h, spec).unwrap();
    let b = c.get(&i, spec).unwrap();
    assert_ne!(a.ambient_dim(), b.ambient_dim());
    assert_eq!(c.len(), 2);
}
