//! Prime factorizations, prime signatures, and the smallest-prime-factor sieve.
//!
//! Every counting function in this crate depends on `n` only through its
//! prime signature, so this module is the funnel all inputs pass through.

use crate::error::{Error, Result};
use num_bigint::BigUint;
use num_traits::One;

/// A positive integer stored as its prime factorization: ascending
/// `(prime, exponent)` pairs. The integer 1 is the empty list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeFactorization {
    pairs: Vec<(u64, u32)>,
}

impl PrimeFactorization {
    /// Builds a factorization from explicit pairs, validating that primes are
    /// prime and strictly increasing and that every exponent is at least 1.
    ///
    /// This is the entry point for integers too large for [`factorize`]'s
    /// trial division: the caller supplies the factorization directly.
    pub fn from_pairs(pairs: Vec<(u64, u32)>) -> Result<Self> {
        let mut last = 0u64;
        for &(p, e) in &pairs {
            if p <= last {
                return Err(Error::InvalidFactorization(format!(
                    "primes must be strictly increasing, saw {p} after {last}"
                )));
            }
            if e == 0 {
                return Err(Error::InvalidFactorization(format!(
                    "exponent of {p} must be at least 1"
                )));
            }
            if !is_prime_u64(p) {
                return Err(Error::InvalidFactorization(format!("{p} is not prime")));
            }
            last = p;
        }
        Ok(Self { pairs })
    }

    pub fn pairs(&self) -> &[(u64, u32)] {
        &self.pairs
    }

    /// The integer this factorization represents.
    pub fn value(&self) -> BigUint {
        let mut n = BigUint::one();
        for &(p, e) in &self.pairs {
            n *= BigUint::from(p).pow(e);
        }
        n
    }

    /// The prime signature: exponents in canonical non-increasing order.
    pub fn signature(&self) -> Signature {
        Signature::new(self.pairs.iter().map(|&(_, e)| e).collect())
    }
}

/// The exponent multiset of a factorization, in canonical non-increasing
/// order. The empty signature represents n = 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Signature {
    exponents: Vec<u32>,
}

impl Signature {
    /// Canonicalizes: zeros are dropped, remaining exponents sorted
    /// non-increasing.
    pub fn new(mut exponents: Vec<u32>) -> Self {
        exponents.retain(|&e| e > 0);
        exponents.sort_unstable_by(|a, b| b.cmp(a));
        Self { exponents }
    }

    /// The signature of n = 1.
    pub fn empty() -> Self {
        Self {
            exponents: Vec::new(),
        }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    /// Number of distinct prime factors.
    pub fn omega(&self) -> usize {
        self.exponents.len()
    }

    /// Number of prime factors counted with multiplicity.
    pub fn big_omega(&self) -> u64 {
        self.exponents.iter().map(|&e| u64::from(e)).sum()
    }

    /// The largest exponent, or 0 for the empty signature.
    pub fn alpha_star(&self) -> u32 {
        self.exponents.first().copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }
}

/// Smallest-prime-factor table for every integer in `[2, limit]`.
///
/// Immutable after construction and safe to share across threads.
#[derive(Debug, Clone)]
pub struct SpfTable {
    limit: u64,
    spf: Vec<u32>,
}

impl SpfTable {
    /// Sieves smallest prime factors up to `limit` (inclusive).
    pub fn new(limit: u64) -> Result<Self> {
        if limit < 2 {
            return Err(Error::SieveLimitTooSmall(limit));
        }
        let limit_us = usize::try_from(limit).expect("sieve limit exceeds address space");
        assert!(
            limit <= u64::from(u32::MAX),
            "sieve limit exceeds u32 range"
        );
        let mut spf = vec![0u32; limit_us + 1];
        for i in 2..=limit_us {
            if spf[i] == 0 {
                for j in (i..=limit_us).step_by(i) {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                }
            }
        }
        Ok(Self { limit, spf })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Smallest prime factor of `n`, or `None` when `n < 2` or `n` is beyond
    /// the table limit.
    pub fn spf(&self, n: u64) -> Option<u64> {
        if n < 2 || n > self.limit {
            return None;
        }
        Some(u64::from(self.spf[n as usize]))
    }

    /// Factorizes `n` by repeated table lookups. Requires `1 <= n <= limit`.
    pub fn factorize(&self, n: u64) -> Result<PrimeFactorization> {
        if n == 0 {
            return Err(Error::ZeroArgument);
        }
        if n > self.limit {
            return Err(Error::BeyondSieveLimit {
                n,
                limit: self.limit,
            });
        }
        let mut pairs = Vec::new();
        let mut m = n as usize;
        while m > 1 {
            let p = self.spf[m] as usize;
            let mut e = 0u32;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            pairs.push((p as u64, e));
        }
        pairs.sort_unstable_by_key(|&(p, _)| p);
        Ok(PrimeFactorization { pairs })
    }

    /// Signature of `n` without materializing the factorization.
    pub fn signature(&self, n: u64) -> Result<Signature> {
        Ok(self.factorize(n)?.signature())
    }
}

/// Factorizes `n` by trial division. Covers the full `u64` range; for larger
/// integers build the factorization explicitly via
/// [`PrimeFactorization::from_pairs`].
pub fn factorize(n: u64) -> Result<PrimeFactorization> {
    if n == 0 {
        return Err(Error::ZeroArgument);
    }
    let mut pairs = Vec::new();
    let mut m = n;
    let mut push = |p: u64, m: &mut u64| {
        let mut e = 0u32;
        while m.is_multiple_of(p) {
            *m /= p;
            e += 1;
        }
        if e > 0 {
            pairs.push((p, e));
        }
    };
    push(2, &mut m);
    push(3, &mut m);
    let mut p = 5u64;
    while p.saturating_mul(p) <= m {
        push(p, &mut m);
        push(p + 2, &mut m);
        p += 6;
    }
    if m > 1 {
        pairs.push((m, 1));
    }
    Ok(PrimeFactorization { pairs })
}

/// The smallest positive integer with the given signature: the largest
/// exponents go on the smallest primes.
pub fn n_from_signature(s: &Signature) -> BigUint {
    let primes = first_primes(s.omega());
    let mut n = BigUint::one();
    for (&p, &e) in primes.iter().zip(s.exponents()) {
        n *= BigUint::from(p).pow(e);
    }
    n
}

/// All divisors of `n` in ascending order. Requires `n >= 1`.
pub fn divisors(n: u64) -> Vec<u64> {
    assert!(n >= 1, "divisors of 0 are undefined");
    let f = factorize(n).expect("n >= 1");
    let mut divs = vec![1u64];
    for &(p, e) in f.pairs() {
        let prev_len = divs.len();
        let mut pe = 1u64;
        for _ in 0..e {
            pe *= p;
            for i in 0..prev_len {
                divs.push(divs[i] * pe);
            }
        }
    }
    divs.sort_unstable();
    divs
}

/// The first `count` primes, by incremental trial division.
pub(crate) fn first_primes(count: usize) -> Vec<u64> {
    let mut primes: Vec<u64> = Vec::with_capacity(count);
    let mut candidate = 2u64;
    while primes.len() < count {
        if primes
            .iter()
            .take_while(|&&p| p * p <= candidate)
            .all(|&p| !candidate.is_multiple_of(p))
        {
            primes.push(candidate);
        }
        candidate += if candidate == 2 { 1 } else { 2 };
    }
    primes
}

/// Deterministic Miller-Rabin for u64.
pub(crate) fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut r = 0u32;
    while d.is_multiple_of(2) {
        d /= 2;
        r += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = mod_pow(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mod_mul(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mod_mul(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mod_mul(acc, base, m);
        }
        base = mod_mul(base, base, m);
        exp >>= 1;
    }
    acc
}
