use equising_core::algebra::{parse_bivar, BivarPoly, CBall, PuiseuxSeries};
use equising_core::flow::partition_of_unity;
use equising_core::Rat;
use proptest::prelude::*;

fn rat(p: i64, q: i64) -> Rat {
    Rat::new(p.into(), q.into())
}

fn bivar() -> impl Strategy<Value = BivarPoly<Rat>> {
    prop::collection::vec((0u32..4, 0i64..4, -5i64..=5), 0..5)
        .prop_map(|ts| BivarPoly::from_terms(ts.into_iter().map(|(i, j, c)| ((i, rat(j, 1)), rat(c, 1))), None))
}

fn series() -> impl Strategy<Value = PuiseuxSeries<Rat>> {
    prop::collection::vec((1i64..8, 1i64..=3, -5i64..=5, 1i64..=4), 0..4)
        .prop_map(|ts| PuiseuxSeries::from_terms(ts.into_iter().map(|(p, q, c, d)| (rat(p, q), rat(c, d))), None))
}

fn terms(p: &BivarPoly<Rat>) -> Vec<((u32, Rat), Rat)> {
    p.terms().map(|(k, c)| (k.clone(), c.clone())).collect()
}

fn sterms(p: &PuiseuxSeries<Rat>) -> Vec<(Rat, Rat)> {
    p.terms().map(|(e, c)| (e.clone(), c.clone())).collect()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn bivar_ring_axioms(a in bivar(), b in bivar(), c in bivar()) {
        prop_assert_eq!(terms(&a.add(&b).add(&c)), terms(&a.add(&b.add(&c))));
        prop_assert_eq!(terms(&a.mul(&b.add(&c))), terms(&a.mul(&b).add(&a.mul(&c))));
        prop_assert_eq!(terms(&a.mul(&b)), terms(&b.mul(&a)));
        prop_assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn series_ring_axioms(a in series(), b in series(), c in series()) {
        prop_assert_eq!(sterms(&a.add(&b).add(&c)), sterms(&a.add(&b.add(&c))));
        prop_assert_eq!(sterms(&a.mul(&b.add(&c))), sterms(&a.mul(&b).add(&a.mul(&c))));
    }

    #[test]
    fn parse_inverts_render(a in bivar()) {
        prop_assume!(!a.is_zero());
        let back = parse_bivar(&a.render()).unwrap();
        prop_assert_eq!(terms(&back), terms(&a));
    }

    #[test]
    fn balls_contain_exact_results(p in -50i64..50, q in 1i64..20, r in -50i64..50, s in 1i64..20) {
        let (x, y) = (rat(p, q), rat(r, s));
        let (bx, by) = (CBall::from_rat(&x, 64), CBall::from_rat(&y, 64));
        prop_assert!(bx.add(&by).contains_rat(&(&x + &y)));
        prop_assert!(bx.mul(&by).contains_rat(&(&x * &y)));
        prop_assert!(bx.sub(&by).contains_rat(&(&x - &y)));
        if r != 0 {
            prop_assert!(bx.div(&by).unwrap().contains_rat(&(&x / &y)));
        }
    }

    #[test]
    fn partition_sums_to_one(x in -40i64..40, alphas in prop::collection::btree_set(-20i64..20, 1..5)) {
        let x = rat(x, 3);
        let alphas: Vec<Rat> = alphas.into_iter().map(|a| rat(a, 2)).collect();
        prop_assume!(alphas.iter().filter(|a| **a == x).count() <= 1);
        let p = partition_of_unity(&x, &alphas).unwrap();
        let total = p.iter().fold(rat(0, 1), |acc, v| acc + v);
        prop_assert_eq!(total, rat(1, 1));
        prop_assert!(p.iter().all(|v| *v >= rat(0, 1)));
    }
}
