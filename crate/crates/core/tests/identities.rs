//! Cross-module identities tying the evaluators, sieves, and counting
//! functions together over ranges large enough to exercise every code path.

use num_bigint::BigUint;
use recdiv::eval::{
    k_recursive_sig, kappa0_recursive_sig, kappa0_squarefree, kappa_x_recursive, tau,
    upsilon_recursive_sig, upsilon_via_tau,
};
use recdiv::factor::{divisors, SpfTable};
use recdiv::sieve::{k_sieve, kappa0_sieve, upsilon_sieves};
use std::collections::HashMap;

const LIMIT: u64 = 10_000;

#[test]
fn sieves_match_per_n_recursion() {
    let spf = SpfTable::new(LIMIT).unwrap();
    let k = k_sieve(LIMIT).unwrap();
    let k0 = kappa0_sieve(LIMIT).unwrap();
    for n in 1..=LIMIT {
        let s = spf.signature(n).unwrap();
        assert_eq!(*k.get(n).unwrap(), k_recursive_sig(&s), "K at {n}");
        assert_eq!(
            *k0.get(n).unwrap(),
            kappa0_recursive_sig(&s),
            "kappa_0 at {n}"
        );
    }
}

#[test]
fn upsilon_sieves_match_per_n_recursion() {
    let spf = SpfTable::new(LIMIT).unwrap();
    for (at, table) in upsilon_sieves(LIMIT, 6).unwrap().iter().enumerate() {
        let i = at as u32 + 1;
        for n in 1..=LIMIT {
            let s = spf.signature(n).unwrap();
            assert_eq!(
                *table.get(n).unwrap(),
                upsilon_recursive_sig(&s, i),
                "upsilon_{i} at {n}"
            );
        }
    }
}

#[test]
fn kappa0_is_k_summed_over_divisors() {
    let spf = SpfTable::new(LIMIT).unwrap();
    for n in 1..=LIMIT {
        let total: BigUint = divisors(n)
            .into_iter()
            .map(|d| k_recursive_sig(&spf.signature(d).unwrap()))
            .sum();
        assert_eq!(
            total,
            kappa0_recursive_sig(&spf.signature(n).unwrap()),
            "at {n}"
        );
    }
}

#[test]
fn kappa0_is_twice_k_beyond_1() {
    let k = k_sieve(LIMIT).unwrap();
    let k0 = kappa0_sieve(LIMIT).unwrap();
    for n in 2..=LIMIT {
        assert_eq!(k.get(n).unwrap() * 2u32, *k0.get(n).unwrap(), "at {n}");
    }
}

#[test]
fn upsilon_convolution_step() {
    // each iterate plus its predecessor equals the predecessor summed over
    // all divisors
    let spf = SpfTable::new(LIMIT).unwrap();
    for n in 1..=LIMIT {
        let s = spf.signature(n).unwrap();
        let big_omega = s.big_omega() as u32;
        for i in 2..=big_omega + 1 {
            let lhs = upsilon_recursive_sig(&s, i) + upsilon_recursive_sig(&s, i - 1);
            let rhs: BigUint = divisors(n)
                .into_iter()
                .map(|d| upsilon_recursive_sig(&spf.signature(d).unwrap(), i - 1))
                .sum();
            assert_eq!(lhs, rhs, "upsilon step i = {i} at n = {n}");
        }
    }
}

#[test]
fn upsilon_iterates_sum_to_kappa0() {
    let spf = SpfTable::new(LIMIT).unwrap();
    for n in 1..=LIMIT {
        let s = spf.signature(n).unwrap();
        let big_omega = s.big_omega() as u32;
        let total: BigUint = (0..=big_omega)
            .map(|i| upsilon_recursive_sig(&s, i + 1))
            .sum();
        assert_eq!(total, kappa0_recursive_sig(&s), "at {n}");
    }
}

#[test]
fn upsilon_inclusion_exclusion_matches_recursion() {
    let spf = SpfTable::new(LIMIT).unwrap();
    for n in 1..=LIMIT {
        let s = spf.signature(n).unwrap();
        for i in 1..=s.big_omega() as u32 + 1 {
            assert_eq!(
                upsilon_via_tau(&s, i).unwrap(),
                upsilon_recursive_sig(&s, i),
                "upsilon_{i} at {n}"
            );
        }
    }
}

#[test]
fn tau_2_is_the_divisor_count() {
    let spf = SpfTable::new(LIMIT).unwrap();
    for n in 1..=LIMIT {
        let s = spf.signature(n).unwrap();
        assert_eq!(
            tau(&s, 2).unwrap(),
            BigUint::from(divisors(n).len() as u64),
            "at {n}"
        );
    }
}

#[test]
fn values_depend_only_on_the_signature() {
    let spf = SpfTable::new(LIMIT).unwrap();
    let k = k_sieve(LIMIT).unwrap();
    let mut by_signature: HashMap<recdiv::Signature, (u64, BigUint)> = HashMap::new();
    for n in 1..=LIMIT {
        let s = spf.signature(n).unwrap();
        let v = k.get(n).unwrap().clone();
        match by_signature.get(&s) {
            Some((first_n, first_v)) => {
                assert_eq!(*first_v, v, "K({n}) differs from K({first_n})");
            }
            None => {
                by_signature.insert(s, (n, v));
            }
        }
    }
}

#[test]
fn kappa_x_at_zero_is_kappa0() {
    let spf = SpfTable::new(2000).unwrap();
    for n in 1..=2000u64 {
        assert_eq!(
            kappa_x_recursive(n, 0).unwrap(),
            kappa0_recursive_sig(&spf.signature(n).unwrap()),
            "at {n}"
        );
    }
}

#[test]
fn kappa_1_sums_divisor_values() {
    // spot identity: kappa_x(n) = n^x + sum over proper divisors
    for (n, x, expected) in [(4u64, 1u32, 8u64), (6, 1, 14), (6, 2, 52), (8, 1, 20)] {
        assert_eq!(kappa_x_recursive(n, x).unwrap(), BigUint::from(expected));
        let mut total = BigUint::from(n).pow(x);
        for d in divisors(n) {
            if d < n {
                total += kappa_x_recursive(d, x).unwrap();
            }
        }
        assert_eq!(total, BigUint::from(expected));
    }
}

#[test]
fn squarefree_values_match_primorials() {
    let primorials = [2u64, 6, 30, 210, 2310];
    for (i, &n) in primorials.iter().enumerate() {
        let omega = i as u32 + 1;
        let sig = recdiv::factor::factorize(n).unwrap().signature();
        assert_eq!(
            kappa0_squarefree(omega),
            kappa0_recursive_sig(&sig),
            "omega = {omega}"
        );
    }
}
