//! Property tests: structural invariants under randomized inputs.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use proptest::collection::vec;
use proptest::prelude::*;
use recdiv::eval::{
    k_macmahon, k_recursive_sig, kappa0_conjecture, kappa0_recursive_sig, kappa0_theorem1,
    kappa0_theorem2, upsilon_recursive_sig, upsilon_via_tau,
};
use recdiv::factor::{factorize, n_from_signature, Signature};
use recdiv::oeis::{compare, parse_bfile, write_bfile, Sequence};
use recdiv::sieve::{k_sieve, kappa0_sieve};
use recdiv::tree::{build_tree, export_json, layout, parse_json, render_svg, DEFAULT_NODE_BUDGET};

prop_compose! {
    // signatures small enough that every closed form stays cheap
    fn small_signature()(exps in vec(1u32..=6, 0..=5)) -> Signature {
        Signature::new(exps)
    }
}

prop_compose! {
    // signatures whose minimal representative fits in u64
    fn representable_signature()(exps in vec(1u32..=4, 0..=7)) -> Signature {
        Signature::new(exps)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn factorization_reconstructs_its_input(n in 1u64..=1_000_000) {
        let f = factorize(n).unwrap();
        prop_assert_eq!(f.value(), BigUint::from(n));
    }

    #[test]
    fn signature_round_trips_through_minimal_representative(s in representable_signature()) {
        let n = n_from_signature(&s);
        let n = n.to_u64().expect("bounded signature fits u64");
        prop_assert_eq!(factorize(n).unwrap().signature(), s);
    }

    #[test]
    fn all_closed_forms_agree(s in small_signature()) {
        let reference = kappa0_recursive_sig(&s);
        prop_assert_eq!(kappa0_theorem1(&s), reference.clone());
        prop_assert_eq!(kappa0_theorem2(&s), reference.clone());
        prop_assert_eq!(kappa0_conjecture(&s), reference.clone());
        if s.is_empty() {
            prop_assert_eq!(k_macmahon(&s), BigUint::from(1u32));
        } else {
            prop_assert_eq!(k_macmahon(&s) * 2u32, reference.clone());
            prop_assert_eq!(k_recursive_sig(&s) * 2u32, reference);
        }
    }

    #[test]
    fn upsilon_routes_agree(s in small_signature(), i in 1u32..=8) {
        prop_assert_eq!(
            upsilon_via_tau(&s, i).unwrap(),
            upsilon_recursive_sig(&s, i)
        );
    }

    #[test]
    fn sieves_agree_with_evaluators(limit in 1u64..=300) {
        let k = k_sieve(limit).unwrap();
        let k0 = kappa0_sieve(limit).unwrap();
        for n in 1..=limit {
            let s = factorize(n).unwrap().signature();
            prop_assert_eq!(k.get(n).unwrap(), &k_recursive_sig(&s));
            prop_assert_eq!(k0.get(n).unwrap(), &kappa0_recursive_sig(&s));
        }
    }

    #[test]
    fn bfile_round_trips(offset in -5i64..=100, values in vec(any::<u64>(), 0..=50)) {
        let s = Sequence::new(offset, values.into_iter().map(BigUint::from).collect());
        let text = write_bfile(&s);
        let parsed = parse_bfile(&text).unwrap();
        if s.is_empty() {
            prop_assert!(parsed.is_empty());
        } else {
            prop_assert_eq!(&parsed, &s);
        }
        prop_assert!(compare(&parsed, &parsed).is_match());
    }

    #[test]
    fn tree_json_round_trips(n in 1u64..=400) {
        let t = build_tree(n, DEFAULT_NODE_BUDGET).unwrap();
        prop_assert_eq!(parse_json(&export_json(&t)).unwrap(), t);
    }

    #[test]
    fn layout_and_svg_are_deterministic(n in 1u64..=400) {
        let t = build_tree(n, DEFAULT_NODE_BUDGET).unwrap();
        let l1 = layout(&t);
        let l2 = layout(&t);
        prop_assert_eq!(&l1, &l2);
        prop_assert_eq!(render_svg(&l1), render_svg(&l2));
        prop_assert_eq!(l1.nodes.len() as u64, t.node_count().to_u64().unwrap());
    }

    #[test]
    fn record_tables_strictly_increase(limit in 1u64..=3000) {
        use recdiv::records::{champions_sieve, CountFunction};
        for which in [CountFunction::K, CountFunction::Kappa0] {
            let t = champions_sieve(limit, which).unwrap();
            prop_assert!(!t.entries.is_empty());
            for w in t.entries.windows(2) {
                prop_assert!(w[1].n > w[0].n);
                prop_assert!(w[1].value > w[0].value);
            }
        }
    }
}
