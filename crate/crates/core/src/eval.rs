//! Exact evaluators for the ordered-factorization count `K(n)`, the
//! recursive divisor count `kappa_0(n)` and its weighted variant
//! `kappa_x(n)`, and the iterated divisor counts `tau_i` / `upsilon_i`.
//!
//! `K` and `kappa_0` satisfy
//!
//! ```text
//! K(n)       = [n = 1] + sum over proper divisors d of n of K(d)
//! kappa_0(n) =    1    + sum over proper divisors d of n of kappa_0(d)
//! ```
//!
//! and depend on `n` only through its prime signature, which is what every
//! cache here is keyed on. Besides the recursions there are three closed
//! forms for `kappa_0` (an infinite dyadic series, a finite double sum, and
//! a multi-binomial sum) plus MacMahon's double sum for `K`; all of them are
//! evaluated in exact integer or dyadic-rational arithmetic and
//! cross-checked against each other in the test suites.

use crate::error::{Error, Result};
use crate::factor::{factorize, Signature};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use std::cell::RefCell;
use std::collections::HashMap;

/// Arbitrary-precision non-negative count.
pub type BigCount = BigUint;

/// How `kappa_0(n)` compares with `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecursiveClass {
    /// `kappa_0(n) = n`
    Perfect,
    /// `kappa_0(n) > n`
    Abundant,
    /// `kappa_0(n) < n`
    Deficient,
}

// Pascal rows up to this n are cached; larger binomials fall back to the
// multiplicative formula so the cache cannot grow quadratically unbounded.
const PASCAL_ROW_CAP: u64 = 512;

thread_local! {
    static PASCAL: RefCell<Vec<Vec<BigUint>>> = RefCell::new(vec![vec![BigUint::one()]]);
    static CACHES: RefCell<Caches> = RefCell::new(Caches::default());
}

#[derive(Default)]
struct Caches {
    k: HashMap<Signature, BigUint>,
    kappa0: HashMap<Signature, BigUint>,
    series: HashMap<Signature, BigUint>,
    double_sum: HashMap<Signature, BigUint>,
    multi_sum: HashMap<Signature, BigUint>,
    macmahon: HashMap<Signature, BigUint>,
    upsilon: HashMap<(Signature, u32), BigUint>,
    kappa_x: HashMap<(u64, u32), BigUint>,
}

/// Exact binomial coefficient. Small rows come from a cached Pascal
/// triangle grown on demand.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    if n <= PASCAL_ROW_CAP {
        return PASCAL.with(|cell| {
            let mut rows = cell.borrow_mut();
            while rows.len() <= n as usize {
                let prev = rows.last().unwrap();
                let mut row = Vec::with_capacity(prev.len() + 1);
                row.push(BigUint::one());
                for w in prev.windows(2) {
                    row.push(&w[0] + &w[1]);
                }
                row.push(BigUint::one());
                rows.push(row);
            }
            rows[n as usize][k as usize].clone()
        });
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 1..=k {
        acc *= n - k + i;
        acc /= i;
    }
    acc
}

fn cached_by_signature(
    pick: impl Fn(&mut Caches) -> &mut HashMap<Signature, BigUint>,
    s: &Signature,
    compute: impl FnOnce() -> BigUint,
) -> BigUint {
    if let Some(v) = CACHES.with(|c| pick(&mut c.borrow_mut()).get(s).cloned()) {
        return v;
    }
    let v = compute();
    CACHES.with(|c| pick(&mut c.borrow_mut()).insert(s.clone(), v.clone()));
    v
}

/// Walks every proper sub-exponent-vector of `exps` (each entry ranging over
/// `0..=exps[k]`, excluding the full vector itself), i.e. every proper
/// divisor expressed in exponent space.
fn for_each_proper_subvector(exps: &[u32], mut visit: impl FnMut(&[u32])) {
    let mut current = vec![0u32; exps.len()];
    loop {
        if current != exps {
            visit(&current);
        }
        // odometer increment
        let mut k = 0;
        loop {
            if k == current.len() {
                return;
            }
            if current[k] < exps[k] {
                current[k] += 1;
                break;
            }
            current[k] = 0;
            k += 1;
        }
    }
}

/// Number of ordered factorizations of `n` into integers greater than one,
/// with `K(1) = 1`, by the defining recursion over proper divisors.
pub fn k_recursive(n: u64) -> Result<BigCount> {
    if n == 0 {
        return Err(Error::ZeroArgument);
    }
    Ok(k_recursive_sig(&factorize(n)?.signature()))
}

/// Signature-level form of [`k_recursive`]; memoized on the canonical
/// signature.
pub fn k_recursive_sig(s: &Signature) -> BigCount {
    cached_by_signature(
        |c| &mut c.k,
        s,
        || {
            if s.is_empty() {
                return BigUint::one();
            }
            let mut total = BigUint::zero();
            for_each_proper_subvector(s.exponents(), |sub| {
                total += k_recursive_sig(&Signature::new(sub.to_vec()));
            });
            total
        },
    )
}

/// Number of recursive divisors of `n`:
/// `kappa_0(n) = 1 + sum of kappa_0 over proper divisors`.
pub fn kappa0_recursive(n: u64) -> Result<BigCount> {
    if n == 0 {
        return Err(Error::ZeroArgument);
    }
    Ok(kappa0_recursive_sig(&factorize(n)?.signature()))
}

/// Signature-level form of [`kappa0_recursive`]; memoized on the canonical
/// signature.
pub fn kappa0_recursive_sig(s: &Signature) -> BigCount {
    cached_by_signature(
        |c| &mut c.kappa0,
        s,
        || {
            let mut total = BigUint::one();
            for_each_proper_subvector(s.exponents(), |sub| {
                total += kappa0_recursive_sig(&Signature::new(sub.to_vec()));
            });
            total
        },
    )
}

/// `kappa_0` via the infinite series
/// `(1/2) * sum_{i>=0} 2^{-i} * prod_k C(alpha_k + i, alpha_k)`,
/// summed in exact dyadic rationals with a certified truncation.
///
/// The term ratio `t_{i+1}/t_i = (1/2) * prod_k (1 + alpha_k/(i+1))`
/// decreases strictly toward 1/2, so once it is at most 3/4 the tail after
/// `t_i` is at most `3 t_i`; the sum stops when that bound drops below 1/2,
/// at which point the nearest integer to the partial sum is the exact value.
pub fn kappa0_theorem1(s: &Signature) -> BigCount {
    cached_by_signature(|c| &mut c.series, s, || series_sum(s.exponents()))
}

fn series_sum(exps: &[u32]) -> BigUint {
    let term = |i: u64| -> BigUint {
        exps.iter()
            .map(|&a| binomial(u64::from(a) + i, u64::from(a)))
            .product()
    };
    // Partial sum through term i is acc / 2^{i+1}.
    let mut prev = term(0);
    let mut acc = prev.clone();
    let mut i = 1u64;
    loop {
        let p = term(i);
        acc = (acc << 1u32) + &p;
        // ratio t_i / t_{i-1} <= 3/4  <=>  2 p <= 3 prev (ratios only shrink)
        let ratio_settled = (&p << 1u32) <= &prev * 3u32;
        // tail after t_i <= 3 t_i < 1/2  <=>  6 p < 2^{i+1}
        if ratio_settled && &p * 6u32 < (BigUint::one() << (i as usize + 1)) {
            // |true value - acc/2^{i+1}| < 1/2, so round to nearest
            return (acc + (BigUint::one() << i as usize)) >> (i as usize + 1);
        }
        prev = p;
        i += 1;
    }
}

/// `kappa_0` via the finite double sum
/// `sum_{i=0}^{Omega} sum_{j=0}^{i} (-1)^{i-j} C(i,j) prod_k C(alpha_k + j, alpha_k)`.
pub fn kappa0_theorem2(s: &Signature) -> BigCount {
    cached_by_signature(
        |c| &mut c.double_sum,
        s,
        || {
            let big_omega = s.big_omega();
            let prods = signature_products(s, big_omega);
            let mut acc = BigInt::zero();
            for i in 0..=big_omega {
                for j in 0..=i {
                    let term = BigInt::from(binomial(i, j) * &prods[j as usize]);
                    if (i - j) % 2 == 1 {
                        acc -= term;
                    } else {
                        acc += term;
                    }
                }
            }
            acc.to_biguint()
                .expect("inclusion-exclusion sum is non-negative")
        },
    )
}

// prods[j] = prod_k C(alpha_k + j, alpha_k) for j = 0..=max_j
fn signature_products(s: &Signature, max_j: u64) -> Vec<BigUint> {
    (0..=max_j)
        .map(|j| {
            s.exponents()
                .iter()
                .map(|&a| binomial(u64::from(a) + j, u64::from(a)))
                .product()
        })
        .collect()
}

/// `kappa_0` via the multi-binomial sum
/// `2^{alpha_omega} * sum_{i_1=0}^{alpha_1} ... sum_{i_{omega-1}=0}^{alpha_{omega-1}}
///  prod_k C(alpha_k, i_k) * C(alpha_{k+1} + i_1 + ... + i_k, alpha_{k+1})`.
///
/// This form is conjectural; every use in this crate is cross-checked
/// against [`kappa0_theorem2`]. The empty signature gives 1 (empty product)
/// and a single exponent gives `2^{alpha_1}`.
///
/// Each inner binomial depends on earlier indices only through their prefix
/// sum, so the sum collapses to a dynamic program over `(k, prefix sum)`.
pub fn kappa0_conjecture(s: &Signature) -> BigCount {
    cached_by_signature(
        |c| &mut c.multi_sum,
        s,
        || {
            let exps = s.exponents();
            if exps.is_empty() {
                return BigUint::one();
            }
            // weights[p] = sum over (i_1..i_k) with prefix sum p of the product so far
            let mut weights = vec![BigUint::one()];
            for k in 1..exps.len() {
                let a_k = u64::from(exps[k - 1]);
                let a_next = u64::from(exps[k]);
                let mut next = vec![BigUint::zero(); weights.len() + a_k as usize];
                for (p, w) in weights.iter().enumerate() {
                    if w.is_zero() {
                        continue;
                    }
                    for i in 0..=a_k {
                        let q = p as u64 + i;
                        next[q as usize] += w * binomial(a_k, i) * binomial(a_next + q, a_next);
                    }
                }
                weights = next;
            }
            let total: BigUint = weights.into_iter().sum();
            total << exps[exps.len() - 1] as usize
        },
    )
}

/// `K(n)` via MacMahon's double sum
/// `sum_{i=1}^{Omega} sum_{j=0}^{i-1} (-1)^j C(i,j) prod_k C(alpha_k + i - j - 1, alpha_k)`.
///
/// The outer sum is empty for the empty signature; the value 1 is returned
/// there so that `K(1) = 1` holds.
pub fn k_macmahon(s: &Signature) -> BigCount {
    cached_by_signature(
        |c| &mut c.macmahon,
        s,
        || {
            if s.is_empty() {
                return BigUint::one();
            }
            let big_omega = s.big_omega();
            let prods = signature_products(s, big_omega.saturating_sub(1));
            let mut acc = BigInt::zero();
            for i in 1..=big_omega {
                for j in 0..=i - 1 {
                    let term = BigInt::from(binomial(i, j) * &prods[(i - j - 1) as usize]);
                    if j % 2 == 1 {
                        acc -= term;
                    } else {
                        acc += term;
                    }
                }
            }
            acc.to_biguint().expect("MacMahon sum is non-negative")
        },
    )
}

/// `tau_i(n) = prod_k C(alpha_k + i - 1, i - 1)`: the i-fold iterated
/// divisor count. `tau_1` is constant 1 and `tau_2` is the ordinary
/// number-of-divisors function.
pub fn tau(s: &Signature, i: u32) -> Result<BigCount> {
    if i == 0 {
        return Err(Error::ZeroIndex);
    }
    Ok(s.exponents()
        .iter()
        .map(|&a| binomial(u64::from(a) + u64::from(i) - 1, u64::from(a)))
        .product())
}

/// `upsilon_i(n)`: the i-fold iterated proper-divisor count, with
/// `upsilon_1` constant 1 and
/// `upsilon_i(n) = sum over proper divisors d of upsilon_{i-1}(d)`.
pub fn upsilon_recursive(n: u64, i: u32) -> Result<BigCount> {
    if n == 0 {
        return Err(Error::ZeroArgument);
    }
    if i == 0 {
        return Err(Error::ZeroIndex);
    }
    Ok(upsilon_recursive_sig(&factorize(n)?.signature(), i))
}

/// Signature-level form of [`upsilon_recursive`].
pub fn upsilon_recursive_sig(s: &Signature, i: u32) -> BigCount {
    if i == 1 {
        return BigUint::one();
    }
    // each proper-divisor step drops Omega by at least 1
    if u64::from(i) > s.big_omega() + 1 {
        return BigUint::zero();
    }
    let key = (s.clone(), i);
    if let Some(v) = CACHES.with(|c| c.borrow().upsilon.get(&key).cloned()) {
        return v;
    }
    let mut total = BigUint::zero();
    for_each_proper_subvector(s.exponents(), |sub| {
        total += upsilon_recursive_sig(&Signature::new(sub.to_vec()), i - 1);
    });
    CACHES.with(|c| c.borrow_mut().upsilon.insert(key, total.clone()));
    total
}

/// `upsilon_i` out of the `tau_j` by inclusion-exclusion:
/// `upsilon_i = sum_{j=0}^{i-1} (-1)^{i-1-j} C(i-1,j) tau_{j+1}`.
pub fn upsilon_via_tau(s: &Signature, i: u32) -> Result<BigCount> {
    if i == 0 {
        return Err(Error::ZeroIndex);
    }
    let mut acc = BigInt::zero();
    for j in 0..i {
        let term = BigInt::from(binomial(u64::from(i) - 1, u64::from(j)) * tau(s, j + 1)?);
        if (i - 1 - j) % 2 == 1 {
            acc -= term;
        } else {
            acc += term;
        }
    }
    Ok(acc.to_biguint().expect("upsilon is non-negative"))
}

/// `kappa_x(n) = n^x + sum over proper divisors d of kappa_x(d)`.
///
/// For `x > 0` this is not a function of the signature alone, so the cache
/// key is `(n, x)` and the recursion runs over the actual integer divisors.
pub fn kappa_x_recursive(n: u64, x: u32) -> Result<BigCount> {
    if n == 0 {
        return Err(Error::ZeroArgument);
    }
    if let Some(v) = CACHES.with(|c| c.borrow().kappa_x.get(&(n, x)).cloned()) {
        return Ok(v);
    }
    let mut total = BigUint::from(n).pow(x);
    for d in crate::factor::divisors(n) {
        if d < n {
            total += kappa_x_recursive(d, x)?;
        }
    }
    CACHES.with(|c| c.borrow_mut().kappa_x.insert((n, x), total.clone()));
    Ok(total)
}

/// `kappa_0` of a product of `omega` distinct primes, i.e. the polylogarithm
/// value `Li_{-omega}(1/2) = sum_{i>=1} i^omega / 2^i`, evaluated as the
/// finite double sum on the all-ones signature.
pub fn kappa0_squarefree(omega: u32) -> BigCount {
    kappa0_theorem2(&Signature::new(vec![1; omega as usize]))
}

/// Classifies `n` as recursively perfect (`kappa_0(n) = n`), abundant
/// (`> n`) or deficient (`< n`).
pub fn classify_recursive(n: u64) -> Result<RecursiveClass> {
    let k0 = kappa0_recursive(n)?;
    let n = BigUint::from(n);
    Ok(if k0 == n {
        RecursiveClass::Perfect
    } else if k0 > n {
        RecursiveClass::Abundant
    } else {
        RecursiveClass::Deficient
    })
}

/// Convenience: `kappa_0(n) / 2^{alpha*(n)}`, which is always exact.
pub fn kappa0_over_2_alpha_star(n: u64) -> Result<BigCount> {
    if n == 0 {
        return Err(Error::ZeroArgument);
    }
    let s = factorize(n)?.signature();
    let k0 = kappa0_recursive_sig(&s);
    debug_assert!(k0.trailing_zeros().unwrap_or(0) >= u64::from(s.alpha_star()));
    Ok(k0 >> s.alpha_star() as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::n_from_signature;
    use num_traits::ToPrimitive;

    fn sig(exps: &[u32]) -> Signature {
        Signature::new(exps.to_vec())
    }

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    // First twelve values of K and kappa_0.
    const K_ROW: [u64; 12] = [1, 1, 1, 2, 1, 3, 1, 4, 2, 3, 1, 8];
    const KAPPA0_ROW: [u64; 12] = [1, 2, 2, 4, 2, 6, 2, 8, 4, 6, 2, 16];

    #[test]
    fn binomial_basics() {
        assert_eq!(binomial(0, 0), big(1));
        assert_eq!(binomial(5, 2), big(10));
        assert_eq!(binomial(5, 6), big(0));
        assert_eq!(binomial(600, 3), big(600 * 599 * 598 / 6)); // beyond the Pascal cap
        assert_eq!(binomial(64, 32), "1832624140942590534".parse().unwrap());
    }

    #[test]
    fn k_recursive_examples() {
        assert_eq!(k_recursive(8).unwrap(), big(4));
        assert_eq!(k_recursive(1).unwrap(), big(1));
        assert_eq!(k_recursive(12).unwrap(), big(8));
        for (i, &expected) in K_ROW.iter().enumerate() {
            assert_eq!(k_recursive(i as u64 + 1).unwrap(), big(expected));
        }
        assert!(matches!(k_recursive(0), Err(Error::ZeroArgument)));
    }

    #[test]
    fn kappa0_recursive_examples() {
        assert_eq!(kappa0_recursive(8).unwrap(), big(8));
        assert_eq!(kappa0_recursive(36).unwrap(), big(52));
        assert_eq!(kappa0_recursive(12).unwrap(), big(16));
        for (i, &expected) in KAPPA0_ROW.iter().enumerate() {
            assert_eq!(kappa0_recursive(i as u64 + 1).unwrap(), big(expected));
        }
        assert!(matches!(kappa0_recursive(0), Err(Error::ZeroArgument)));
    }

    #[test]
    fn series_examples() {
        assert_eq!(kappa0_theorem1(&Signature::empty()), big(1));
        assert_eq!(kappa0_theorem1(&sig(&[1])), big(2));
        assert_eq!(kappa0_theorem1(&sig(&[2, 2])), big(52));
    }

    #[test]
    fn double_sum_examples() {
        assert_eq!(kappa0_theorem2(&sig(&[2, 1])), big(16));
        assert_eq!(kappa0_theorem2(&Signature::empty()), big(1));
        assert_eq!(kappa0_theorem2(&sig(&[1, 1, 1, 1, 1])), big(1082));
    }

    #[test]
    fn multi_sum_examples() {
        assert_eq!(kappa0_conjecture(&sig(&[3])), big(8));
        assert_eq!(kappa0_conjecture(&sig(&[2, 1])), big(16));
        assert_eq!(kappa0_conjecture(&Signature::empty()), big(1));
    }

    #[test]
    fn macmahon_examples() {
        assert_eq!(k_macmahon(&sig(&[2, 1])), big(8));
        assert_eq!(k_macmahon(&sig(&[1])), big(1));
        assert_eq!(k_macmahon(&sig(&[3])), big(4));
        assert_eq!(k_macmahon(&Signature::empty()), big(1));
    }

    #[test]
    fn tau_examples() {
        let s = sig(&[2, 1]);
        assert_eq!(tau(&s, 1).unwrap(), big(1));
        assert_eq!(tau(&s, 2).unwrap(), big(6));
        assert_eq!(tau(&s, 3).unwrap(), big(18));
        assert_eq!(tau(&s, 4).unwrap(), big(40));
        assert!(matches!(tau(&s, 0), Err(Error::ZeroIndex)));
    }

    #[test]
    fn upsilon_examples() {
        assert_eq!(upsilon_recursive(12, 3).unwrap(), big(7));
        assert_eq!(upsilon_recursive(36, 5).unwrap(), big(6));
        assert_eq!(upsilon_recursive(9999, 1).unwrap(), big(1));
        assert_eq!(upsilon_recursive(12, 2).unwrap(), big(5));
        assert!(matches!(upsilon_recursive(12, 0), Err(Error::ZeroIndex)));
        assert!(matches!(upsilon_recursive(0, 1), Err(Error::ZeroArgument)));
    }

    #[test]
    fn upsilon_via_tau_examples() {
        assert_eq!(upsilon_via_tau(&sig(&[2, 1]), 2).unwrap(), big(5));
        assert_eq!(upsilon_via_tau(&sig(&[3]), 4).unwrap(), big(1));
        assert_eq!(upsilon_via_tau(&Signature::empty(), 2).unwrap(), big(0));
        assert!(matches!(
            upsilon_via_tau(&Signature::empty(), 0),
            Err(Error::ZeroIndex)
        ));
    }

    #[test]
    fn kappa_x_examples() {
        assert_eq!(kappa_x_recursive(8, 0).unwrap(), big(8));
        assert_eq!(kappa_x_recursive(1, 0).unwrap(), big(1));
        assert_eq!(kappa_x_recursive(1, 7).unwrap(), big(1));
        // kappa_1(4) = 4 + kappa_1(1) + kappa_1(2) = 4 + 1 + 3
        assert_eq!(kappa_x_recursive(4, 1).unwrap(), big(8));
    }

    #[test]
    fn squarefree_row() {
        assert_eq!(kappa0_squarefree(0), big(1));
        assert_eq!(kappa0_squarefree(3), big(26));
        assert_eq!(kappa0_squarefree(5), big(1082));
    }

    #[test]
    fn classification_examples() {
        assert_eq!(classify_recursive(8).unwrap(), RecursiveClass::Perfect);
        assert_eq!(classify_recursive(12).unwrap(), RecursiveClass::Abundant);
        assert_eq!(classify_recursive(3).unwrap(), RecursiveClass::Deficient);
    }

    #[test]
    fn all_routes_agree_on_small_signatures() {
        for n in 1..=500u64 {
            let s = factorize(n).unwrap().signature();
            let reference = kappa0_recursive_sig(&s);
            assert_eq!(kappa0_theorem1(&s), reference, "series at n = {n}");
            assert_eq!(kappa0_theorem2(&s), reference, "double sum at n = {n}");
            assert_eq!(kappa0_conjecture(&s), reference, "multi sum at n = {n}");
            if n == 1 {
                assert_eq!(k_macmahon(&s), big(1));
            } else {
                assert_eq!(k_macmahon(&s) * 2u32, reference, "MacMahon at n = {n}");
            }
        }
    }

    #[test]
    fn signature_order_does_not_change_values() {
        // canonicalization makes permuted exponent lists identical
        let a = Signature::new(vec![1, 3, 2]);
        let b = Signature::new(vec![3, 2, 1]);
        assert_eq!(a, b);
        assert_eq!(kappa0_theorem2(&a), kappa0_recursive_sig(&b),);
    }

    #[test]
    fn kappa0_divisible_by_two_to_alpha_star() {
        for n in 2..=2000u64 {
            let s = factorize(n).unwrap().signature();
            let k0 = kappa0_recursive_sig(&s);
            assert!(
                k0.trailing_zeros().unwrap() >= u64::from(s.alpha_star()),
                "n = {n}"
            );
        }
    }

    #[test]
    fn minimal_representative_round_trip() {
        let s = sig(&[4, 2, 1]);
        let n = n_from_signature(&s);
        assert_eq!(n, big(2u64.pow(4) * 3u64.pow(2) * 5));
        assert_eq!(factorize(n.to_u64().unwrap()).unwrap().signature(), s);
    }
}
