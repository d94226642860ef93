//! Exact arithmetic for ordered factorizations and recursive divisors.
//!
//! The library centers on two multiplicative-structure counting functions:
//! `K(n)`, the number of ordered factorizations of `n` into parts at least
//! 2, and `kappa_0(n)`, the number of recursive divisors of `n` (equally,
//! squares in its divisor tree). Around them it provides:
//!
//! - [`factor`]: factorization, prime signatures, and smallest-prime-factor
//!   tables.
//! - [`eval`]: per-n evaluators, including the defining recursions, three
//!   independent closed forms for `kappa_0`, MacMahon's double sum for `K`,
//!   the iterated divisor counts `tau_i` / `upsilon_i`, and the weighted
//!   `kappa_x`.
//! - [`sieve`]: range evaluation in `O(N log N)` and a cross-verification
//!   harness over all evaluation routes.
//! - [`tree`]: divisor tree construction, generation counts, and
//!   deterministic SVG/JSON output.
//! - [`records`]: champion (sequence record) search by sieve scan or by
//!   signature enumeration, and recursively perfect numbers.
//! - [`oeis`]: b-file parsing, writing, and diffing.
//!
//! Everything is exact: values are arbitrary-precision integers and the
//! one infinite series in play is summed with a certified truncation.

pub mod error;
pub mod eval;
pub mod factor;
pub mod oeis;
pub mod records;
pub mod sieve;
pub mod tree;

pub use error::{Error, Result};
pub use eval::BigCount;
pub use factor::{PrimeFactorization, Signature, SpfTable};
