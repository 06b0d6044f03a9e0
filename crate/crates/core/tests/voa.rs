use bimod::formal::binom;
use bimod::voa::fock::FockSpace;
use bimod::voa::virasoro::VirasoroSpace;
use bimod::voa::{GradedVector, Voa, VoaKind};
use bimod::{Rational, Scalar, Vector};
use proptest::prelude::*;

fn q(n: i64) -> Rational {
    Rational::from_i64(n)
}

fn heis(w: usize) -> Voa {
    Voa::new(VoaKind::Heisenberg, w).unwrap()
}

fn vir(w: usize) -> Voa {
    Voa::new(VoaKind::Virasoro(Rational::from_ratio(1, 2)), w).unwrap()
}

fn alpha(_v: &Voa) -> Vector {
    GradedVector::basis(1, 0)
}

#[test]
fn vacuum_and_generator_modes() {
    let v = heis(6);
    let a = alpha(&v);
    let vac = v.vacuum();
    for (w, i) in v.basis_keys(4) {
        let x = GradedVector::basis(w, i);
        assert_eq!(v.mode(&vac, -1, &x).unwrap(), x);
        assert!(v.mode(&vac, 0, &x).unwrap().is_zero());
        assert!(v.mode(&vac, -2, &x).unwrap().is_zero());
    }
    assert!(v.mode(&a, 0, &a).unwrap().is_zero());
    assert_eq!(v.mode(&a, 1, &a).unwrap(), vac);
}

#[test]
fn conformal_vector_laws() {
    for v in [heis(6), vir(6)] {
        let omega = v.conformal();
        assert!(v.virasoro(-1, &v.vacuum()).unwrap().is_zero());
        assert!(v.virasoro(1, &omega).unwrap().is_zero());
        assert_eq!(v.virasoro(0, &omega).unwrap(), omega.scale(&q(2)));
        for (w, i) in v.basis_keys(4) {
            let x = GradedVector::basis(w, i);
            assert_eq!(v.mode(&omega, 1, &x).unwrap(), x.scale(&q(w as i64)));
        }
    }
}

#[test]
fn central_charges() {
    let h = heis(4);
    let w = h.conformal();
    assert_eq!(h.virasoro(2, &w).unwrap(), h.vacuum().scale(&Rational::from_ratio(1, 2)));
    let v = vir(4);
    let w = v.conformal();
    assert_eq!(v.virasoro(2, &w).unwrap(), v.vacuum().scale(&Rational::from_ratio(1, 4)));
}

/// The iterate recursion on the VOA must agree with the closed normal-ordered
/// formula on the Fock space with zero momentum.
#[test]
fn recursion_matches_normal_ordering() {
    let v = heis(9);
    let fock = FockSpace::new(q(0), 9);
    for (wu, iu) in v.basis_keys(5) {
        let word = v.label(wu, iu).clone();
        for (wv, iv) in v.basis_keys(4) {
            for k in -3..(wu + wv) as i64 + 1 {
                if (wu + wv) as i64 - k - 1 > 9 {
                    continue;
                }
                let lhs = v.mode_basis((wu, iu), k, (wv, iv)).unwrap();
                let rhs = fock.normal_ordered_mode(&word, k, wv, iv).unwrap();
                assert_eq!(*lhs, rhs, "u={word:?} k={k} v=({wv},{iv})");
            }
        }
    }
}

#[test]
fn grading_and_truncation() {
    for v in [heis(11), vir(11)] {
        for (wu, iu) in v.basis_keys(4) {
            for (wv, iv) in v.basis_keys(4) {
                for k in -3..=(wu + wv) as i64 + 2 {
                    let r = v.mode_basis((wu, iu), k, (wv, iv)).unwrap();
                    if k >= (wu + wv) as i64 {
                        assert!(r.is_zero());
                    } else if !r.is_zero() {
                        assert_eq!(r.weight(), Some(((wu + wv) as i64 - k - 1) as usize));
                    }
                }
            }
        }
    }
}

#[test]
fn weight_range_errors_name_the_needed_weight() {
    let v = heis(3);
    let a = alpha(&v);
    let err = v.mode(&a, -3, &a).unwrap_err();
    assert!(matches!(err, bimod::Error::WeightRange { needed: 4, max: 3 }));
}

fn commutator_holds(v: &Voa, u: (usize, usize), w: (usize, usize), x: (usize, usize), p: i64, r: i64) -> bool {
    let uu = GradedVector::basis(u.0, u.1);
    let ww = GradedVector::basis(w.0, w.1);
    let xx = GradedVector::basis(x.0, x.1);
    let lhs = &v.mode(&uu, p, &v.mode(&ww, r, &xx).unwrap()).unwrap()
        - &v.mode(&ww, r, &v.mode(&uu, p, &xx).unwrap()).unwrap();
    let mut rhs = GradedVector::zero();
    for i in 0..(u.0 + w.0) as i64 {
        let c: Rational = binom(p, i);
        if c == q(0) {
            continue;
        }
        let uw = v.mode(&uu, i, &ww).unwrap();
        rhs.add_scaled(&v.mode(&uw, p + r - i, &xx).unwrap(), &c);
    }
    lhs == rhs
}

#[test]
fn commutator_axiom_on_a_grid() {
    let h = heis(14);
    let keys = h.basis_keys(3);
    for &u in &keys {
        for &w in &keys {
            for &x in keys.iter().step_by(2) {
                for p in -2..=2 {
                    for r in -2..=2 {
                        assert!(commutator_holds(&h, u, w, x, p, r), "{u:?} {w:?} {x:?} {p} {r}");
                    }
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]
    #[test]
    fn commutator_axiom_sampled(
        alg in 0usize..2,
        u in 0usize..64, w in 0usize..64, x in 0usize..64,
        p in -4i64..=4, r in -4i64..=4,
    ) {
        let v = if alg == 0 { heis(16) } else { vir(16) };
        let keys = v.basis_keys(4);
        let pick = |i: usize| keys[i % keys.len()];
        prop_assert!(commutator_holds(&v, pick(u), pick(w), pick(x), p, r));
    }
}

#[test]
fn phi_examples_and_involution() {
    for v in [heis(8), vir(8), Voa::new(VoaKind::Ising, 8).unwrap()] {
        assert_eq!(v.phi(&v.vacuum()).unwrap(), v.vacuum());
        assert_eq!(v.phi(&v.conformal()).unwrap(), v.conformal());
        for (w, i) in v.basis_keys(8) {
            let x = GradedVector::basis(w, i);
            assert_eq!(v.phi(&v.phi(&x).unwrap()).unwrap(), x);
        }
    }
    let h = heis(4);
    assert_eq!(h.phi(&alpha(&h)).unwrap(), alpha(&h).scale(&q(-1)));
}

#[test]
fn skew_symmetry() {
    let h = heis(10);
    let v = vir(12);
    assert!(h.skew_symmetry_check(&h.vacuum(), &h.vacuum(), -3..=3).unwrap());
    assert!(h.skew_symmetry_check(&alpha(&h), &alpha(&h), -3..=3).unwrap());
    assert!(v.skew_symmetry_check(&v.conformal(), &v.conformal(), -4..=4).unwrap());
    for (wu, iu) in h.basis_keys(3) {
        for (wv, iv) in h.basis_keys(3) {
            let (a, b) = (GradedVector::basis(wu, iu), GradedVector::basis(wv, iv));
            assert!(h.skew_symmetry_check(&a, &b, -2..=4).unwrap());
        }
    }
}

/// Modes of `Y((-1)^{L(0)} u, -z)` agree with `(-1)^{L(0)} Y(u,z) (-1)^{L(0)}`.
#[test]
fn conjugation_by_grading_sign() {
    let v = vir(12);
    let sgn = |x: &Vector| {
        GradedVector::from_terms(
            x.iter().map(|(w, i, c)| ((w, i), c.clone() * bimod::scalar::sign::<Rational>(w as i64))),
        )
    };
    for (wu, iu) in v.basis_keys(4) {
        let u = GradedVector::basis(wu, iu);
        for (wv, iv) in v.basis_keys(4) {
            let x = GradedVector::basis(wv, iv);
            for k in -4..=4 {
                // coefficient of z^{-k-1} in Y(σu, -z) is (-1)^{k+1} (σu)_k
                let lhs = v.mode(&sgn(&u), k, &x).unwrap().scale(&bimod::scalar::sign(k + 1));
                let rhs = sgn(&v.mode(&u, k, &sgn(&x)).unwrap());
                assert_eq!(lhs, rhs);
            }
        }
    }
}

#[test]
fn ising_quotient_kills_the_weight_six_singular_vector() {
    let ising = Voa::simple_quotient(Rational::from_ratio(1, 2), 8).unwrap();
    assert_eq!(ising.dims(6), vec![1, 0, 1, 1, 2, 2, 3]);
    assert_eq!(vir(6).dim(6), 4);
    assert!(Voa::simple_quotient(q(1), 8).is_err());
    assert!(Voa::simple_quotient(Rational::from_ratio(1, 2), 5).is_err());
    // The Gram radical at weight 6 is one-dimensional and consists of
    // vectors annihilated by L(1) and L(2) in the universal algebra.
    let space: VirasoroSpace<Rational> = VirasoroSpace::universal(Rational::from_ratio(1, 2), q(0), true, 8);
    let g = space.pbw().gram(6).unwrap();
    let mut span = bimod::linalg::SpanBasis::new(4, bimod::linalg::Elimination::Exact);
    for row in &g {
        span.insert(row);
    }
    assert_eq!(span.rank(), 3);
}

#[test]
fn formatting_round_trip_labels() {
    let h = heis(4);
    let idx = h.space().dim(3);
    assert_eq!(idx, 3);
    assert_eq!(h.format_basis(3, 1), "a(-2)a(-1)vac");
    let v = vir(4);
    assert_eq!(v.format_basis(4, 1), "L(-2)L(-2)vac");
    let x = GradedVector::from_terms([((4, 0), Rational::from_ratio(-3, 2)), ((4, 1), q(1))]);
    assert_eq!(v.format(&x), "-3/2 L(-4)vac + L(-2)L(-2)vac");
}
