use flatcliff::algebra::{check_ai_semiring, FinAlgebra};
use flatcliff::classes::{in_class, Class};
use flatcliff::congruences::{classify_si, is_simple};
use flatcliff::constructions::{flat_group, product, quotient};
use flatcliff::groups::{cyclic, direct_product, named_group, Group};
use flatcliff::iso::{canonical_form, relabelled_tables};
use flatcliff::partition::Partition;
use flatcliff::terms::{satisfies_all, schema, DEFAULT_BUDGET};
use proptest::prelude::*;

fn small_group() -> impl Strategy<Value = Group> {
    prop_oneof![
        (1usize..9).prop_map(|m| cyclic(m).unwrap()),
        (1usize..5, 1usize..5).prop_map(|(a, b)| direct_product(&cyclic(a).unwrap(), &cyclic(b).unwrap()).unwrap()),
        prop::sample::select(vec!["D6", "D8", "Q8", "Dtilde6"]).prop_map(|n| named_group(n).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn flat_extensions_are_simple_members_of_m(g in small_group()) {
        let f = flat_group(&g);
        let e = g.exponent();
        prop_assert!(check_ai_semiring(&f).unwrap().is_pass());
        prop_assert!(is_simple(&f));
        prop_assert_eq!(in_class(&f, Class::M, e, DEFAULT_BUDGET).unwrap(), Some(true));
        prop_assert_eq!(in_class(&f, Class::N, e, DEFAULT_BUDGET).unwrap(), Some(true));
        prop_assert!(classify_si(&f, e, DEFAULT_BUDGET).unwrap().is_pass());
        let ids = ["center", "summing", "new1"].iter().flat_map(|k| schema(k).unwrap().identities(e)).collect::<Vec<_>>();
        prop_assert!(satisfies_all(&f, "lemma", &ids, e, DEFAULT_BUDGET).unwrap().is_pass());
    }

    #[test]
    fn json_round_trip(g in small_group()) {
        let f = flat_group(&g);
        prop_assert_eq!(FinAlgebra::from_json(&f.to_json()).unwrap(), f);
    }

    #[test]
    fn canonical_form_is_relabelling_invariant(perm in Just((0..4).collect::<Vec<usize>>()).prop_shuffle()) {
        let f = flat_group(&cyclic(3).unwrap());
        let t = relabelled_tables(&f, &perm);
        let g = FinAlgebra::new(4, f.signature().clone(), vec![t[..16].to_vec(), t[16..].to_vec()], None).unwrap();
        let (cf, cg) = (canonical_form(&f).unwrap().0, canonical_form(&g).unwrap().0);
        prop_assert_eq!(cf.tables(), cg.tables());
    }
}

#[test]
fn quotients_of_products_project() {
    let a = flat_group(&cyclic(2).unwrap());
    let b = flat_group(&cyclic(3).unwrap());
    let p = product(&a, &b).unwrap();
    // kernel of the first projection: same first coordinate
    let k = b.size();
    let labels: Vec<usize> = (0..p.size()).map(|i| i / k).collect();
    let theta = Partition::from_labels(&labels);
    let (q, _) = quotient(&p, &theta).unwrap();
    assert!(flatcliff::iso::is_isomorphic(&q, &a));
}
