//! Sequence-record (champion) search for `K` and `kappa_0`, and enumeration
//! of recursively perfect numbers.
//!
//! A champion is an index whose value strictly exceeds the value at every
//! smaller index. Two independent routes are provided: a direct scan of a
//! sieve table, and a search over candidate integers enumerated by prime
//! signature, which reaches far beyond sieve memory.

use crate::error::{Error, Result};
use crate::eval::{kappa0_conjecture, kappa0_theorem2, BigCount};
use crate::factor::{first_primes, Signature};
use crate::sieve::{k_sieve, kappa0_sieve};
use num_bigint::BigUint;
use num_traits::One;
use rayon::prelude::*;
use std::fmt;

/// Which counting function records are taken over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountFunction {
    /// Ordered factorization count.
    K,
    /// Recursive divisor count.
    Kappa0,
}

impl CountFunction {
    pub fn name(self) -> &'static str {
        match self {
            CountFunction::K => "K",
            CountFunction::Kappa0 => "kappa0",
        }
    }

    pub fn parse(s: &str) -> Option<CountFunction> {
        match s {
            "K" => Some(CountFunction::K),
            "kappa0" => Some(CountFunction::Kappa0),
            _ => None,
        }
    }
}

impl fmt::Display for CountFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One record: the index and the value that set it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecordEntry {
    pub n: BigUint,
    pub value: BigCount,
}

/// All records up to a bound, strictly increasing in both index and value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecordTable {
    pub function: CountFunction,
    pub entries: Vec<RecordEntry>,
}

/// Records of `K` or `kappa_0` on `1..=limit` read off a sieve table.
pub fn champions_sieve(limit: u64, which: CountFunction) -> Result<RecordTable> {
    let table = match which {
        CountFunction::K => k_sieve(limit)?,
        CountFunction::Kappa0 => kappa0_sieve(limit)?,
    };
    let mut entries = Vec::new();
    let mut best: Option<&BigUint> = None;
    for (i, v) in table.values().iter().enumerate() {
        if best.is_none_or(|b| v > b) {
            entries.push(RecordEntry {
                n: BigUint::from(i as u64 + 1),
                value: v.clone(),
            });
            best = Some(v);
        }
    }
    Ok(RecordTable {
        function: which,
        entries,
    })
}

/// Records of `K` or `kappa_0` among all integers up to `n_bound`, found
/// without a sieve.
///
/// Both functions depend on `n` only through its prime signature, and the
/// smallest integer carrying a given signature puts its exponents in
/// non-increasing order on the smallest primes. Any other integer `n`
/// shares its value with that smaller representative, so it can never beat
/// every smaller index; records are therefore exactly the records among the
/// minimal representatives, which this search enumerates depth-first,
/// extending a partial exponent tuple only while the value stays within
/// bound.
///
/// `kappa_0` values come from the multi-binomial sum and every one is
/// cross-checked against the finite double sum; `K` values are half the
/// `kappa_0` values (exact for n >= 2).
pub fn champions_signature_search(n_bound: &BigUint, which: CountFunction) -> Result<RecordTable> {
    let mut candidates: Vec<(BigUint, Signature)> = vec![(BigUint::one(), Signature::empty())];
    if *n_bound >= BigUint::from(2u32) {
        let max_exp = n_bound.bits() as u32; // 2^bits > n_bound
        let primes = first_primes(max_prime_count(n_bound));
        let mut exps: Vec<u32> = Vec::new();
        descend(
            &primes,
            0,
            max_exp,
            &BigUint::one(),
            n_bound,
            &mut exps,
            &mut candidates,
        );
    }

    let mut evaluated: Vec<RecordEntry> = candidates
        .into_par_iter()
        .map(|(n, sig)| {
            let multi_sum = kappa0_conjecture(&sig);
            let double_sum = kappa0_theorem2(&sig);
            if multi_sum != double_sum {
                return Err(Error::ConjectureMismatch {
                    n,
                    multi_sum,
                    double_sum,
                });
            }
            let value = match which {
                CountFunction::Kappa0 => multi_sum,
                CountFunction::K => {
                    if sig.is_empty() {
                        BigUint::one()
                    } else {
                        multi_sum >> 1
                    }
                }
            };
            Ok(RecordEntry { n, value })
        })
        .collect::<Result<_>>()?;

    evaluated.sort_by(|a, b| a.n.cmp(&b.n));
    let mut entries: Vec<RecordEntry> = Vec::new();
    for e in evaluated {
        if entries.last().is_none_or(|best| e.value > best.value) {
            entries.push(e);
        }
    }
    Ok(RecordTable {
        function: which,
        entries,
    })
}

// Longest possible signature: the product of the first k primes must stay
// within the bound.
fn max_prime_count(n_bound: &BigUint) -> usize {
    let mut count = 0;
    let mut product = BigUint::one();
    loop {
        let next = first_primes(count + 1)[count];
        product *= next;
        if product > *n_bound {
            return count;
        }
        count += 1;
    }
}

fn descend(
    primes: &[u64],
    index: usize,
    max_exp: u32,
    value: &BigUint,
    bound: &BigUint,
    exps: &mut Vec<u32>,
    out: &mut Vec<(BigUint, Signature)>,
) {
    if index == primes.len() {
        return;
    }
    let cap = if index == 0 { max_exp } else { exps[index - 1] };
    let p = BigUint::from(primes[index]);
    let mut v = value.clone();
    for e in 1..=cap {
        v *= &p;
        if v > *bound {
            break;
        }
        exps.push(e);
        out.push((v.clone(), Signature::new(exps.clone())));
        descend(primes, index + 1, max_exp, &v, bound, exps, out);
        exps.pop();
    }
}

/// All `n <= limit` with `kappa_0(n) = n`, ascending.
pub fn recursively_perfect(limit: u64) -> Result<Vec<u64>> {
    let table = kappa0_sieve(limit)?;
    Ok((1..=limit)
        .filter(|&n| *table.get(n).expect("within limit") == BigUint::from(n))
        .collect())
}
