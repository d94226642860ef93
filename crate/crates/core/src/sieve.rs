//! Divisor-sum sieves for `K`, `kappa_0` and `upsilon_i` over a contiguous
//! range `1..=limit`, plus a cross-verification harness that replays the
//! closed-form evaluators against the sieve baselines.
//!
//! All three functions satisfy a recursion of the shape
//! `f(n) = base(n) + sum over proper divisors d of g(d)`, which a sieve
//! evaluates in `O(limit log limit)` additions by propagating each computed
//! value forward onto its multiples.

use crate::error::{Error, Result};
use crate::eval;
use crate::factor::SpfTable;
use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;
use std::fmt;

/// Which function a [`SieveTable`] holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SieveFunction {
    /// Ordered factorization count `K`.
    K,
    /// Recursive divisor count `kappa_0`.
    Kappa0,
    /// Iterated proper-divisor count `upsilon_i` for the stored index.
    Upsilon(u32),
}

/// Values of one arithmetic function on `1..=limit`, computed by sieve.
pub struct SieveTable {
    function: SieveFunction,
    values: Vec<BigUint>, // values[n] for n in 1..=limit; index 0 unused
}

impl SieveTable {
    pub fn function(&self) -> SieveFunction {
        self.function
    }

    pub fn limit(&self) -> u64 {
        self.values.len() as u64 - 1
    }

    /// Value at `n`; errors outside `1..=limit`.
    pub fn get(&self, n: u64) -> Result<&BigUint> {
        if n == 0 {
            return Err(Error::ZeroArgument);
        }
        self.values.get(n as usize).ok_or(Error::BeyondSieveLimit {
            n,
            limit: self.limit(),
        })
    }

    /// All values in order of `n = 1..=limit`.
    pub fn values(&self) -> &[BigUint] {
        &self.values[1..]
    }
}

// Ascending propagation: values[d] is final before any multiple of d is
// visited, so one pass evaluates the whole recursion.
fn divisor_sum_sieve(
    function: SieveFunction,
    limit: u64,
    seed: impl Fn(u64) -> BigUint,
) -> SieveTable {
    let len = limit as usize + 1;
    let mut values: Vec<BigUint> = (0..len as u64).map(seed).collect();
    for d in 1..len {
        if values[d].is_zero() {
            continue;
        }
        let (head, tail) = values.split_at_mut(d + 1);
        let vd = &head[d];
        let mut m = 2 * d;
        while m < len {
            tail[m - d - 1] += vd;
            m += d;
        }
    }
    SieveTable { function, values }
}

/// Sieve of `K(n)` for `n` in `1..=limit`.
pub fn k_sieve(limit: u64) -> Result<SieveTable> {
    if limit < 1 {
        return Err(Error::SieveLimitTooSmall(limit));
    }
    Ok(divisor_sum_sieve(SieveFunction::K, limit, |n| {
        if n == 1 {
            BigUint::one()
        } else {
            BigUint::zero()
        }
    }))
}

/// Sieve of `kappa_0(n)` for `n` in `1..=limit`.
pub fn kappa0_sieve(limit: u64) -> Result<SieveTable> {
    if limit < 1 {
        return Err(Error::SieveLimitTooSmall(limit));
    }
    Ok(divisor_sum_sieve(SieveFunction::Kappa0, limit, |n| {
        if n >= 1 {
            BigUint::one()
        } else {
            BigUint::zero()
        }
    }))
}

/// Sieves of `upsilon_1 .. upsilon_{i_max}` on `1..=limit`. The first table
/// is all ones, and each successive table is the proper-divisor-sum
/// transform of the one before it (the iterates feed on each other, unlike
/// the self-referential `K` and `kappa_0` recursions).
pub fn upsilon_sieves(limit: u64, i_max: u32) -> Result<Vec<SieveTable>> {
    if i_max == 0 {
        return Err(Error::ZeroIndex);
    }
    if limit < 1 {
        return Err(Error::SieveLimitTooSmall(limit));
    }
    let len = limit as usize + 1;
    let mut ones = vec![BigUint::one(); len];
    ones[0] = BigUint::zero();
    let mut tables = vec![SieveTable {
        function: SieveFunction::Upsilon(1),
        values: ones,
    }];
    for i in 2..=i_max {
        let prev = &tables.last().expect("nonempty").values;
        let mut next = vec![BigUint::zero(); len];
        for (d, vd) in prev.iter().enumerate().skip(1) {
            if vd.is_zero() {
                continue;
            }
            let mut m = 2 * d;
            while m < len {
                next[m] += vd;
                m += d;
            }
        }
        tables.push(SieveTable {
            function: SieveFunction::Upsilon(i),
            values: next,
        });
    }
    Ok(tables)
}

/// Sieve of `upsilon_i(n)` alone, for `n` in `1..=limit`.
pub fn upsilon_sieve(limit: u64, i: u32) -> Result<SieveTable> {
    Ok(upsilon_sieves(limit, i)?
        .pop()
        .expect("one table per index"))
}

/// An evaluation route that [`verify_range`] can replay against the sieve
/// baselines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Defining recursion (both `K` and `kappa_0`).
    Recursive,
    /// Dyadic series for `kappa_0`.
    Theorem1,
    /// Finite double sum for `kappa_0`.
    Theorem2,
    /// Multi-binomial sum for `kappa_0` (conjectural route).
    Conjecture,
    /// MacMahon's double sum for `K`.
    Macmahon,
    /// The sieve itself: checked against the defining identities instead of
    /// against another evaluator.
    Sieve,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::Recursive,
        Method::Theorem1,
        Method::Theorem2,
        Method::Conjecture,
        Method::Macmahon,
        Method::Sieve,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Recursive => "recursive",
            Method::Theorem1 => "theorem1",
            Method::Theorem2 => "theorem2",
            Method::Conjecture => "conjecture",
            Method::Macmahon => "macmahon",
            Method::Sieve => "sieve",
        }
    }

    pub fn parse(s: &str) -> Option<Method> {
        Method::ALL.into_iter().find(|m| m.name() == s)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A single disagreement found by [`verify_range`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub n: u64,
    pub method: Method,
    /// What the method produced (or which identity failed, for `Sieve`).
    pub detail: String,
}

/// Outcome of [`verify_range`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub limit: u64,
    pub methods: Vec<Method>,
    /// Sorted by `n`, then by method order as given.
    pub mismatches: Vec<Mismatch>,
}

impl VerifyReport {
    pub fn is_clean(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Checks the requested evaluation routes on every `n` in `1..=limit`.
///
/// Closed-form and recursive routes are compared against a sieve baseline
/// (`Macmahon` against the `K` sieve, the rest against the `kappa_0` sieve).
/// The `Sieve` route instead checks the defining identities of the two
/// sieves against each other: `kappa_0(n) = 2 K(n)` for `n >= 2`,
/// `kappa_0 = K summed over all divisors`, and the divisibility of
/// `kappa_0(n)` by `2^{alpha*(n)}`.
///
/// Work is split into blocks processed in parallel with rayon; mismatch
/// reports are merged back in ascending order of `n`, so the output is
/// deterministic at any thread count.
pub fn verify_range(limit: u64, methods: &[Method]) -> Result<VerifyReport> {
    if limit < 1 {
        return Err(Error::SieveLimitTooSmall(limit));
    }
    let k_table = k_sieve(limit)?;
    let kappa0_table = kappa0_sieve(limit)?;
    let spf = SpfTable::new(limit.max(2))?;

    let evaluators: Vec<Method> = methods
        .iter()
        .copied()
        .filter(|m| *m != Method::Sieve)
        .collect();
    let run_identity_checks = methods.contains(&Method::Sieve);

    const BLOCK: u64 = 4096;
    let blocks: Vec<(u64, u64)> = (1..=limit)
        .step_by(BLOCK as usize)
        .map(|lo| (lo, (lo + BLOCK - 1).min(limit)))
        .collect();

    let mut mismatches: Vec<Mismatch> = blocks
        .par_iter()
        .map(|&(lo, hi)| {
            let mut found = Vec::new();
            for n in lo..=hi {
                let s = spf.signature(n).expect("n within spf limit");
                let k_expected = k_table.get(n).expect("within limit");
                let kappa0_expected = kappa0_table.get(n).expect("within limit");
                for &m in &evaluators {
                    let (got, expected) = match m {
                        Method::Recursive => (eval::kappa0_recursive_sig(&s), kappa0_expected),
                        Method::Theorem1 => (eval::kappa0_theorem1(&s), kappa0_expected),
                        Method::Theorem2 => (eval::kappa0_theorem2(&s), kappa0_expected),
                        Method::Conjecture => (eval::kappa0_conjecture(&s), kappa0_expected),
                        Method::Macmahon => (eval::k_macmahon(&s), k_expected),
                        Method::Sieve => unreachable!(),
                    };
                    if got != *expected {
                        found.push(Mismatch {
                            n,
                            method: m,
                            detail: format!("got {got}, sieve has {expected}"),
                        });
                    }
                }
                if run_identity_checks {
                    if n >= 2 && *kappa0_expected != k_expected * 2u32 {
                        found.push(Mismatch {
                            n,
                            method: Method::Sieve,
                            detail: format!(
                                "kappa_0 = {kappa0_expected} but 2 K = {}",
                                k_expected * 2u32
                            ),
                        });
                    }
                    let alpha_star = u64::from(s.alpha_star());
                    if n >= 2 && kappa0_expected.trailing_zeros().unwrap_or(0) < alpha_star {
                        found.push(Mismatch {
                            n,
                            method: Method::Sieve,
                            detail: format!(
                                "kappa_0 = {kappa0_expected} not divisible by 2^{alpha_star}"
                            ),
                        });
                    }
                }
            }
            found
        })
        .reduce(Vec::new, |mut a, mut b| {
            a.append(&mut b);
            a
        });

    // blocks come back in order from the indexed reduce, but make it explicit
    mismatches.sort_by_key(|m| (m.n, methods.iter().position(|&x| x == m.method)));

    if run_identity_checks {
        // kappa_0 = K summed over all divisors, checked by one forward
        // convolution pass over the K table.
        let len = limit as usize + 1;
        let mut conv: Vec<BigUint> = vec![BigUint::zero(); len];
        for d in 1..len {
            let vd = k_table.values[d].clone();
            let mut m = d;
            while m < len {
                conv[m] += &vd;
                m += d;
            }
        }
        for (n, (c, k0)) in conv.iter().zip(&kappa0_table.values).enumerate().skip(1) {
            if c != k0 {
                mismatches.push(Mismatch {
                    n: n as u64,
                    method: Method::Sieve,
                    detail: format!("sum of K over divisors = {c}, kappa_0 = {k0}"),
                });
            }
        }
        // kappa_0 = sum of upsilon_{i+1} for i = 0..=Omega(n); indices above
        // floor(log2 limit) + 1 contribute nothing on this range.
        let max_index = (64 - limit.leading_zeros()) + 1;
        let mut running: Vec<BigUint> = vec![BigUint::zero(); len];
        for u in upsilon_sieves(limit, max_index)? {
            for (r, v) in running.iter_mut().zip(&u.values).skip(1) {
                *r += v;
            }
        }
        for (n, (r, k0)) in running.iter().zip(&kappa0_table.values).enumerate().skip(1) {
            if r != k0 {
                mismatches.push(Mismatch {
                    n: n as u64,
                    method: Method::Sieve,
                    detail: format!("sum of upsilon_i = {r}, kappa_0 = {k0}"),
                });
            }
        }
        mismatches.sort_by_key(|m| (m.n, methods.iter().position(|&x| x == m.method)));
    }

    Ok(VerifyReport {
        limit,
        methods: methods.to_vec(),
        mismatches,
    })
}
