use std::sync::Arc;

use kad_core::axioms::{check_axioms, check_axioms_on, AxiomProfile};
use kad_core::model::FiniteModel;
use kad_core::rel::{as_finite_algebra, Rel, RelAlgebra, StateSpace};
use proptest::prelude::*;

fn space(n: usize) -> Arc<StateSpace> {
    StateSpace::numbered(n).unwrap()
}

fn arb_rel(n: usize) -> impl Strategy<Value = Rel> {
    prop::collection::vec((0..n, 0..n), 0..=n * n)
        .prop_map(move |pairs| Rel::from_pairs(&space(n), pairs).unwrap())
}

fn arb_test(n: usize) -> impl Strategy<Value = Rel> {
    prop::collection::vec(0..n, 0..=n).prop_map(move |s| Rel::test_of(&space(n), s).unwrap())
}

/// Fixpoint closure by repeated composition, as a reference for `star`.
fn naive_star(r: &Rel) -> Rel {
    let mut acc = Rel::id(r.space());
    loop {
        let next = acc.union(&acc.compose(r).unwrap()).unwrap();
        if next == acc {
            return acc;
        }
        acc = next;
    }
}

proptest! {
    #[test]
    fn star_matches_naive_closure(r in (1usize..=7).prop_flat_map(arb_rel)) {
        prop_assert_eq!(r.star(), naive_star(&r));
    }

    #[test]
    fn antidomain_axioms_pointwise(x in arb_rel(4), y in arb_rel(4)) {
        let one = Rel::id(x.space());
        prop_assert!(x.adom().compose(&x).unwrap().is_empty());
        let lhs = x.compose(&y).unwrap().adom();
        let rhs = x.compose(&y.dom()).unwrap().adom();
        prop_assert_eq!(lhs.union(&rhs).unwrap(), rhs);
        prop_assert_eq!(x.adom().union(&x.dom()).unwrap(), one);
    }

    #[test]
    fn antirange_is_antidomain_of_converse(x in arb_rel(4)) {
        prop_assert_eq!(x.aran(), x.converse().adom());
        prop_assert!(x.compose(&x.aran()).unwrap().is_empty());
        prop_assert_eq!(x.dom().aran(), x.dom().complement_test().unwrap());
    }

    #[test]
    fn box_is_pointwise_necessity(x in arb_rel(4), q in arb_test(4)) {
        let b = x.box_(&q).unwrap();
        for s in 0..4 {
            let all_succ_in_q = (0..4).filter(|&t| x.contains(s, t)).all(|t| q.contains(t, t));
            prop_assert_eq!(b.contains(s, s), all_succ_in_q);
        }
    }

    #[test]
    fn tests_form_a_boolean_algebra(p in arb_test(5), q in arb_test(5)) {
        let not_p = p.complement_test().unwrap();
        prop_assert!(p.compose(&not_p).unwrap().is_empty());
        prop_assert_eq!(p.union(&not_p).unwrap(), Rel::id(p.space()));
        prop_assert_eq!(p.compose(&q).unwrap(), p.intersect(&q).unwrap());
        prop_assert_eq!(p.compose(&q).unwrap(), q.compose(&p).unwrap());
    }

    #[test]
    fn literal_round_trip(r in arb_rel(3)) {
        prop_assert_eq!(Rel::parse(r.space(), &r.to_string()).unwrap(), r);
    }
}

#[test]
fn exported_algebras_satisfy_every_relational_profile() {
    for n in 1..=2 {
        let alg = as_finite_algebra(&space(n)).unwrap();
        for profile in [
            AxiomProfile::Kat,
            AxiomProfile::AntidomainSemiring,
            AxiomProfile::Kad,
            AxiomProfile::AntirangeSemiring,
            AxiomProfile::KaDomainRange,
        ] {
            let r = check_axioms(&alg, profile).unwrap();
            assert!(r.passed, "{n} states, {profile}: {:?}", r.violations);
        }
    }
}

#[test]
fn three_state_relations_pass_kadr_on_a_sample() {
    use rand::{Rng, SeedableRng};
    let s = space(3);
    let alg = RelAlgebra::new(s.clone());
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let mut elems: Vec<Rel> = (0..6).map(|_| Rel::from_mask(&s, rng.gen_range(0..512))).collect();
    elems.extend([Rel::empty(&s), Rel::id(&s), Rel::full(&s)]);
    let tests = alg.test_elements().unwrap();
    let r = check_axioms_on(&alg, AxiomProfile::KaDomainRange, &elems, Some(&tests)).unwrap();
    assert!(r.passed, "{:?}", r.violations);
}
