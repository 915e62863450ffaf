use std::collections::BTreeSet;

use kad_core::model::{eval, Env};
use kad_core::parse::parse_term;
use kad_core::rel::{Rel, RelAlgebra, StateSpace};
use kad_core::term::{desugar, sort_of, Sort, Term};
use proptest::prelude::*;

fn tests() -> BTreeSet<String> {
    ["p", "q"].into_iter().map(String::from).collect()
}

fn arb_term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        Just(Term::Zero),
        Just(Term::One),
        prop::sample::select(vec!["x", "y", "z"]).prop_map(Term::var),
        prop::sample::select(vec!["p", "q"]).prop_map(Term::test),
    ];
    leaf.prop_recursive(5, 40, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::plus(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::times(a, b)),
            inner.clone().prop_map(Term::star),
            inner.clone().prop_map(Term::not),
            inner.clone().prop_map(Term::adom),
            inner.clone().prop_map(Term::dom),
            inner.clone().prop_map(Term::aran),
            inner.clone().prop_map(Term::ran),
            (inner.clone(), inner).prop_map(|(a, b)| Term::boxed(a, b)),
        ]
    })
}

/// Terms where complement only meets tests.
fn arb_well_sorted() -> impl Strategy<Value = Term> {
    arb_term().prop_filter("well sorted", |t| sort_of(t, &tests()).is_ok())
}

proptest! {
    #[test]
    fn print_then_parse_is_identity(t in arb_term()) {
        let printed = t.to_string();
        let back = parse_term(&printed, &tests()).unwrap();
        prop_assert_eq!(back, t, "printed as {}", printed);
    }

    #[test]
    fn desugar_is_idempotent(t in arb_term()) {
        let once = desugar(&t);
        prop_assert!(once.is_desugared());
        prop_assert_eq!(desugar(&once), once);
    }

    #[test]
    fn desugar_keeps_sort(t in arb_well_sorted()) {
        prop_assert_eq!(sort_of(&desugar(&t), &tests()), sort_of(&t, &tests()));
    }

    #[test]
    fn sugar_agrees_with_expansion(
        t in arb_well_sorted(),
        masks in prop::array::uniform3(0u64..16),
        tests_ in prop::array::uniform2(0u64..4),
    ) {
        let space = StateSpace::numbered(2).unwrap();
        let alg = RelAlgebra::new(space.clone());
        let mut env = Env::new();
        for (n, m) in ["x", "y", "z"].iter().zip(masks) {
            env.insert(*n, Rel::from_mask(&space, m), Sort::Element);
        }
        for (n, m) in ["p", "q"].iter().zip(tests_) {
            let states = (0..2).filter(|i| m >> i & 1 == 1);
            env.insert(*n, Rel::test_of(&space, states).unwrap(), Sort::Test);
        }
        let direct = eval(&alg, &t, &env);
        let expanded = eval(&alg, &desugar(&t), &env);
        prop_assert_eq!(direct, expanded);
    }
}

#[test]
fn ill_sorted_complement_is_rejected() {
    let t = parse_term("!(x ; p)", &tests()).unwrap();
    assert!(sort_of(&t, &tests()).is_err());
    let t = parse_term("!(p ; q) + a(x)", &tests()).unwrap();
    assert_eq!(sort_of(&t, &tests()), Ok(Sort::Test));
}
