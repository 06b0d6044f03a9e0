use bimod::bimodule::{OKind, SpanCache};
use bimod::formal::{identity_grid, IdentityBounds};
use bimod::linalg::Elimination;
use bimod::rep::{hom_terms, level_algebra_dim, structure_check, TestModule};
use bimod::voa::{CharacterTable, Voa, VoaKind};
use bimod::{Rational, Scalar};

fn ising(w: usize) -> Voa {
    Voa::new(VoaKind::Ising, w).unwrap()
}

#[test]
fn character_table_matches_gram_ranks() {
    let table = CharacterTable::ising(6);
    let c = Rational::from_ratio(1, 2);
    for (h, label_dims) in
        [(Rational::from_i64(0), 0), (Rational::from_ratio(1, 2), 1), (Rational::from_ratio(1, 16), 2)]
    {
        let m = TestModule::virasoro(c.clone(), h.clone(), 6).unwrap();
        assert_eq!(m.dims(), table.modules[label_dims].dims, "h={h}");
    }
    assert_eq!(table.modules[1].dims, vec![1, 1, 1, 1, 2, 2, 3]);
    assert_eq!(table.modules[2].dims, vec![1, 1, 1, 2, 2, 3, 4]);
}

#[test]
fn hom_counts_for_low_levels() {
    let table = CharacterTable::ising(2);
    let count = |n, m| hom_terms(&table, n, m).iter().map(|t| t.source_dim * t.target_dim).sum::<usize>();
    assert_eq!(count(0, 0), 3);
    assert_eq!(count(1, 0), 2);
    assert_eq!(count(0, 1), 2);
    assert_eq!(count(1, 1), 5);
    for (n, m) in [(0, 0), (1, 0), (1, 1), (2, 1)] {
        assert_eq!(count(n, m), table.hom_dimension(n, m));
    }
}

#[test]
fn ising_off_diagonal_quotients_match_hom_counts() {
    let v = ising(11);
    let cache = SpanCache::new(Elimination::Screened);
    let table = CharacterTable::ising(1);
    for (n, m) in [(1, 0), (0, 1)] {
        let r = structure_check(&v, &cache, &table, OKind::Ofull, n, m, 8, 2).unwrap();
        assert!(r.passed(), "({n},{m}): {:?}", r.confirmation);
        assert_eq!(r.quotient.dim, 2);
        assert!(r.level_algebra_dim.is_none());
    }
}

#[test]
fn level_one_structure_needs_the_forward_confirmation() {
    let v = ising(11);
    let cache = SpanCache::new(Elimination::Screened);
    let table = CharacterTable::ising(1);
    let early = structure_check(&v, &cache, &table, OKind::Ofull, 1, 1, 7, 2).unwrap();
    assert_eq!(early.quotient.dim, 4);
    assert!(!early.stable() && !early.passed());
    let r = structure_check(&v, &cache, &table, OKind::Ofull, 1, 1, 8, 2).unwrap();
    assert!(r.passed(), "{:?}", r.confirmation);
    assert_eq!(r.level_algebra_dim, Some(5));
}

#[test]
fn zhu_algebra_of_the_ising_model() {
    let v = ising(9);
    assert_eq!(level_algebra_dim(&v, 0, 8).unwrap(), 3);
}

#[test]
fn binomial_identity_families_hold() {
    let r = identity_grid::<Rational>(IdentityBounds::default()).unwrap();
    assert!(r.all_passed());
    let counts: Vec<usize> = r.families.iter().map(|f| f.cases).collect();
    assert_eq!(counts, vec![81, 49, 63, 250]);
}
