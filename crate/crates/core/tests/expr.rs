use bimod::expr::{element, parse_element};
use bimod::voa::{Voa, VoaKind};
use bimod::{Error, Rational, Scalar, Vector};
use proptest::prelude::*;

fn heis(w: usize) -> Voa {
    Voa::new(VoaKind::Heisenberg, w).unwrap()
}

fn term() -> impl Strategy<Value = String> {
    (0i64..=5, 1i64..=4, prop::collection::vec(1i64..=3, 0..3)).prop_map(|(num, den, modes)| {
        let gens: String = modes.iter().map(|k| format!("a(-{k})")).collect();
        format!("{num}/{den} {gens}vac")
    })
}

fn source() -> impl Strategy<Value = String> {
    (any::<bool>(), prop::collection::vec((any::<bool>(), term()), 1..4)).prop_map(|(lead, ts)| {
        let mut out = String::from(if lead { "-" } else { "" });
        for (i, (minus, t)) in ts.iter().enumerate() {
            if i > 0 {
                out.push_str(if *minus { " - " } else { " + " });
            }
            out.push_str(t);
        }
        out
    })
}

proptest! {
    #[test]
    fn display_then_parse_is_identity(src in source()) {
        let e = parse_element(&src).unwrap();
        prop_assert_eq!(parse_element(&e.to_string()).unwrap(), e);
    }

    #[test]
    fn evaluation_survives_display(src in source()) {
        let v = heis(9);
        let e = parse_element(&src).unwrap();
        prop_assert_eq!(element(&v, &e.to_string()).unwrap(), e.evaluate(&v).unwrap());
    }

    #[test]
    fn heisenberg_modes_commute(i in 1i64..=3, j in 1i64..=3) {
        let v = heis(6);
        let a = element(&v, &format!("a(-{i})a(-{j})vac")).unwrap();
        let b = element(&v, &format!("a(-{j})a(-{i})vac")).unwrap();
        prop_assert_eq!(a, b);
    }
}

#[test]
fn conformal_vector_from_text() {
    let v = heis(4);
    let w = element(&v, "1/2 a(-1)a(-1)vac").unwrap();
    assert_eq!(w, v.conformal());
    let vir = Voa::new(VoaKind::Virasoro(Rational::from_ratio(1, 2)), 4).unwrap();
    assert_eq!(element(&vir, "L(-2)vac").unwrap(), vir.conformal());
}

#[test]
fn element_weight_is_the_top_weight() {
    let e = parse_element("a(-1)a(-2)vac + 3 a(-4)vac - vac").unwrap();
    assert_eq!(e.weight(), 4);
    assert_eq!(e.evaluate(&heis(4)).unwrap().top_weight(), Some(4));
}

#[test]
fn evaluation_errors() {
    let v = heis(3);
    assert!(matches!(element(&v, "L(-2)vac"), Err(Error::UnknownGenerator { .. })));
    assert!(matches!(element(&v, "a(-4)vac"), Err(Error::WeightRange { needed: 4, max: 3 })));
    assert_eq!(element(&v, "0 vac").unwrap(), Vector::zero());
}
