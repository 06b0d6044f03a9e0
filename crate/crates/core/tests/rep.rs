use std::sync::Arc;

use bimod::bimodule::checks::Headroom;
use bimod::bimodule::OKind;
use bimod::expr::element;
use bimod::rep::{
    annihilation_check, level_product_grid, omega_subspace, InputModule, TestModule, UniversalMap, VermaConfig,
    VermaModule,
};
use bimod::voa::{GradedVector, Voa, VoaKind};
use bimod::{Error, Rational, Scalar, Vector};
use proptest::prelude::*;
use serde_json::json;

fn q(n: i64) -> Rational {
    Rational::from_i64(n)
}

fn heis(w: usize) -> Voa {
    Voa::new(VoaKind::Heisenberg, w).unwrap()
}

fn ising(w: usize) -> Voa {
    Voa::new(VoaKind::Ising, w).unwrap()
}

#[test]
fn level_products_factor_on_fock_modules() {
    let v = heis(7);
    for lambda in [q(0), q(1), Rational::from_ratio(1, 2)] {
        let m = TestModule::fock(lambda, 2);
        let (prod, fact) = level_product_grid(&v, &m, 2, 1).unwrap();
        assert!(prod.all_passed() && fact.all_passed(), "{:?} {:?}", prod.failures, fact.failures);
        assert!(prod.cases > 0 && fact.cases > 0);
    }
}

#[test]
fn conformal_vector_acts_by_the_level_shifted_weight() {
    let v = heis(4);
    for lambda in [q(0), q(1), Rational::from_ratio(1, 2), q(-3)] {
        let m = TestModule::fock(lambda.clone(), 3);
        let h = &lambda * &lambda / q(2);
        for n in 0..=3 {
            for k in 0..m.dim(n) {
                let w = GradedVector::basis(n, k);
                let out = m.o_action(&v, &v.conformal(), &w, n).unwrap();
                assert_eq!(out, w.scale(&(&h + &q(n as i64))));
            }
        }
    }
}

#[test]
fn generator_acts_by_the_level_difference_mode() {
    // o_{n,m}(a(-1)vac) = a(m - n); on the top level a(0) is λ.
    let v = heis(4);
    let m = TestModule::fock(q(3), 2);
    let a = Vector::basis(1, 0);
    let top = GradedVector::basis(0, 0);
    assert_eq!(m.o_action(&v, &a, &top, 0).unwrap(), top.scale(&q(3)));
    let up = m.o_action(&v, &a, &top, 1).unwrap();
    assert_eq!(up, GradedVector::basis(1, 0));
    assert_eq!(m.o_action(&v, &a, &up, 0).unwrap(), top);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn fock_closed_form_matches_recursion(
        lambda in -3i64..=3, wt in 0usize..=3, idx in 0usize..8, j in -3i64..=3, level in 0usize..=3, k in 0usize..8,
    ) {
        let v = heis(4);
        let m = TestModule::fock(q(lambda), 6);
        prop_assume!(v.dim(wt) > 0 && m.dim(level) > 0);
        let u = Vector::basis(wt, idx % v.dim(wt));
        let w = GradedVector::basis(level, k % m.dim(level));
        let target = level as i64 + wt as i64 - j - 1;
        prop_assume!((0..=6).contains(&target));
        prop_assert_eq!(m.mode(&v, &u, j, &w).unwrap(), m.mode_by_recursion(&v, &u, j, &w).unwrap());
    }
}

#[test]
fn kernel_of_the_lowering_modes_is_the_truncation() {
    let v = heis(4);
    for lambda in [q(1), Rational::from_ratio(1, 2)] {
        let m = TestModule::fock(lambda, 4);
        for cut in 0..=2 {
            let om = omega_subspace(&v, &m, cut, 4).unwrap();
            assert!(om.is_truncation(), "m={cut}: {:?}", om.dims);
        }
    }
}

#[test]
fn relation_generators_act_by_zero() {
    let v = heis(8);
    let m = TestModule::fock(q(1), 3);
    for (n, mm) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
        let r = annihilation_check(&v, &m, n, mm, 7, 2, 3, 20).unwrap();
        assert!(r.all_passed(), "({n},{mm}): {:?}", r.failures);
        assert_eq!(r.cases, 20);
    }
}

#[test]
fn generator_of_the_algebra_is_not_annihilated() {
    let v = heis(4);
    let m = TestModule::fock(q(1), 1);
    let out = m.o_action(&v, &Vector::basis(1, 0), &GradedVector::basis(0, 0), 0).unwrap();
    assert!(!out.is_zero());
}

fn heisenberg_input(v: &Voa, lambda: i64) -> InputModule<Rational> {
    InputModule::from_json(v, &json!({"dimension": 1, "generators": [{"element": "a(-1)vac", "matrix": [[lambda]]}]}))
        .unwrap()
}

#[test]
fn heisenberg_induced_module_has_partition_dimensions() {
    let config = VermaConfig::new(0, 2, 8, OKind::Oprime).with_rep_weight(4);
    let v = Arc::new(heis(9));
    let probe = VermaModule::build(v, heisenberg_input(&heis(9), 1), config).unwrap();
    let needed = probe.required_weight(1, 2);
    let v = Arc::new(heis(needed));
    let verma = VermaModule::build(v.clone(), heisenberg_input(&v, 1), config).unwrap();
    assert_eq!(verma.dims(), vec![1, 1, 2]);
    let probes: Vec<Vector> = v.basis_keys(1).into_iter().map(|(w, i)| Vector::basis(w, i)).collect();
    for grid in [
        verma.vacuum_check().unwrap(),
        verma.commutator_check(&probes, 2).unwrap(),
        verma.iterate_check(&probes, 2).unwrap(),
    ] {
        assert!(grid.all_passed(), "{}: {:?}", grid.check, grid.failures);
    }
    let fock = TestModule::fock(q(1), 2);
    let map = UniversalMap::new(&verma, &fock, vec![GradedVector::basis(0, 0)]).unwrap();
    for n in 0..=2 {
        assert!(map.kills_relations(n).unwrap());
    }
    let grid = map.intertwining_check(&probes, 2).unwrap();
    assert!(grid.all_passed(), "{:?}", grid.failures);
}

#[test]
fn too_small_a_truncation_is_caught_by_the_vacuum_check() {
    let config = VermaConfig::new(0, 2, 6, OKind::Oprime).with_rep_weight(3);
    let probe = VermaModule::build(Arc::new(heis(7)), heisenberg_input(&heis(7), 1), config).unwrap();
    let v = Arc::new(heis(probe.required_weight(2, 2)));
    let verma = VermaModule::build(v.clone(), heisenberg_input(&v, 1), config).unwrap();
    assert_eq!(verma.dims(), vec![1, 1, 3]);
    assert!(!verma.vacuum_check().unwrap().all_passed());
}

#[test]
fn maps_must_respect_the_input_action() {
    let v = Arc::new(heis(9));
    let config = VermaConfig::new(0, 1, 8, OKind::Oprime).with_rep_weight(4);
    let verma = VermaModule::build(v.clone(), heisenberg_input(&v, 1), config).unwrap();
    let wrong = TestModule::fock(q(2), 1);
    assert!(matches!(
        UniversalMap::new(&verma, &wrong, vec![GradedVector::basis(0, 0)]),
        Err(Error::NotEquivariant(_))
    ));
}

#[test]
fn input_modules_from_a_lower_level_are_rejected() {
    let v = Arc::new(heis(9));
    let fock = TestModule::fock(q(1), 1);
    let input = InputModule::from_level(&v, &fock, 0, &[element(&v, "a(-1)vac").unwrap()]).unwrap();
    let config = VermaConfig::new(1, 1, 6, OKind::Oprime).with_rep_weight(4);
    assert!(matches!(VermaModule::build(v, input, config), Err(Error::FactorsThrough(0, 1))));
}

#[test]
fn input_module_parsing() {
    let v = ising(6);
    let input = InputModule::from_json(
        &v,
        &json!({"dimension": 1, "generators": [{"element": "L(-2)vac", "matrix": [["1/16"]]}]}),
    )
    .unwrap();
    assert_eq!(input.generators[0].matrix[0][0], Rational::from_ratio(1, 16));
    assert_eq!(input.generators[0].element, v.conformal());
    let bad = json!({"dimension": 2, "generators": [{"element": "vac", "matrix": [[1]]}]});
    assert!(matches!(InputModule::from_json(&v, &bad), Err(Error::InvalidModule(_))));
    let junk = json!({"dimension": 1, "generators": [{"element": "vac", "matrix": [["x"]]}]});
    assert!(matches!(InputModule::from_json(&v, &junk), Err(Error::Config(_))));
}

fn ising_input(v: &Voa, h: Rational) -> InputModule<Rational> {
    InputModule::new(1, vec![bimod::rep::GeneratorAction { element: v.conformal(), matrix: vec![vec![h]] }]).unwrap()
}

#[test]
fn ising_level_zero_sees_only_admissible_weights() {
    let v = Arc::new(ising(11));
    let config = VermaConfig::new(0, 0, 10, OKind::Oprime);
    for (h, dim) in
        [(Rational::from_ratio(1, 16), 1), (Rational::from_ratio(1, 2), 1), (q(0), 1), (Rational::from_ratio(1, 3), 0)]
    {
        let verma = VermaModule::build(v.clone(), ising_input(&v, h.clone()), config).unwrap();
        assert_eq!(verma.dims(), vec![dim], "h={h}");
    }
}

#[test]
fn headroom_rule() {
    let h = Headroom::new(8, 12);
    assert_eq!(h.cutoff(3), Some(8));
    assert_eq!(h.cutoff(9), Some(11));
    assert_eq!(h.cutoff(11), None);
}
