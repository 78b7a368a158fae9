//! Existence of `r`-th roots of permutations.
//!
//! Two independent routes are provided: cycle-type criteria, and a
//! brute-force search over the whole symmetric group that serves as the
//! oracle for them.

use std::collections::HashMap;

use num_integer::Integer;
use thiserror::Error;

use crate::perm::{CycleType, Element, Permutation};

/// Largest ground set [`find_root_bruteforce`] will search.
pub const BRUTE_FORCE_LIMIT: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("exponent must be at least 1")]
    ZeroExponent,
    #[error("brute force is limited to {limit} points, got {n}")]
    TooLarge { n: usize, limit: usize },
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    (2u64..)
        .take_while(|d| d * d <= u64::from(n))
        .all(|d| u64::from(n) % d != 0)
}

/// Returns `(q, l)` with `q` prime and `q^l = r`, if `r` is a prime power.
pub fn prime_power(r: u32) -> Option<(u32, u32)> {
    if r < 2 {
        return None;
    }
    let q = (2..=r).find(|d| r.is_multiple_of(*d))?;
    let mut rest = r;
    let mut l = 0;
    while rest.is_multiple_of(q) {
        rest /= q;
        l += 1;
    }
    (rest == 1).then_some((q, l))
}

/// A question "does `target` have an `r`-th root?", with the prime-power
/// factorization of `r` when there is one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootQuery {
    pub target: Permutation,
    pub r: u32,
    pub factorization: Option<(u32, u32)>,
}

impl RootQuery {
    pub fn new(target: Permutation, r: u32) -> Self {
        Self {
            target,
            factorization: prime_power(r),
            r,
        }
    }

    /// Criterion verdict: the prime-power rule when it applies, the general
    /// per-length rule otherwise.
    pub fn has_root(&self) -> bool {
        match self.factorization {
            Some((q, l)) => has_root_prime_power(&self.target, q, l).expect("q is prime"),
            None => has_root_general(&self.target, self.r),
        }
    }
}

/// For `r = q^l` with `q` prime: `σ` has an `r`-th root iff for every `i`
/// the number of cycles of length `i·q` is a multiple of `r`.
pub fn has_root_prime_power(sigma: &Permutation, q: u32, l: u32) -> Result<bool, RootError> {
    if !is_prime(q) {
        return Err(RootError::NotPrime(q));
    }
    if l == 0 {
        return Err(RootError::ZeroExponent);
    }
    let r = u64::from(q).checked_pow(l);
    Ok(sigma.cycle_type().parts().all(|(len, count)| {
        len % q != 0
            || match r {
                Some(r) => u64::from(count) % r == 0,
                // r exceeds any possible count
                None => count == 0,
            }
    }))
}

/// Whether `σ` has an `r`-th root, for any `r ≥ 1`.
///
/// A cycle of length `m` in `π` becomes `gcd(m, r)` cycles of length
/// `m / gcd(m, r)` in `π^r`. So the `c` cycles of `σ` having length `ℓ` must
/// be split into bunches whose sizes `d` satisfy `gcd(d·ℓ, r) = d`, each
/// bunch being the image of one cycle of length `d·ℓ`. The test is whether
/// `c` is a sum of such sizes.
pub fn has_root_general(sigma: &Permutation, r: u32) -> bool {
    if r == 0 {
        return sigma.cycles().iter().all(|c| c.len() == 1);
    }
    sigma
        .cycle_type()
        .parts()
        .all(|(len, count)| multiplicity_feasible(len, count, r))
}

/// Bunch sizes usable for cycles of length `len` under an `r`-th power.
pub fn bunch_sizes(len: u32, r: u32) -> Vec<u32> {
    let mut divisors: Vec<u32> = (1..)
        .take_while(|&d: &u32| u64::from(d) * u64::from(d) <= u64::from(r))
        .filter(|d| r.is_multiple_of(*d))
        .flat_map(|d| [d, r / d])
        .collect();
    divisors.sort_unstable();
    divisors.dedup();
    divisors
        .into_iter()
        .filter(|&d| (u64::from(d) * u64::from(len)).gcd(&u64::from(r)) == u64::from(d))
        .collect()
}

fn multiplicity_feasible(len: u32, count: u32, r: u32) -> bool {
    let sizes = bunch_sizes(len, r);
    if sizes.contains(&1) {
        return true;
    }
    let count = count as usize;
    let mut reachable = vec![false; count + 1];
    reachable[0] = true;
    for total in 1..=count {
        reachable[total] = sizes
            .iter()
            .any(|&d| d as usize <= total && reachable[total - d as usize]);
    }
    reachable[count]
}

/// `(q, r)`-divisibility of a cycle type: every length is a multiple of `q`
/// and every multiplicity a multiple of `r`. The empty type qualifies.
pub fn is_qr_divisible(rho: &CycleType, q: u32, r: u32) -> bool {
    rho.parts().all(|(len, count)| len % q == 0 && count % r == 0)
}

/// Lexicographically least `π` (in one-line notation over the sorted ground
/// set) with `π^r = σ`.
pub fn find_root_bruteforce(sigma: &Permutation, r: u64) -> Result<Option<Permutation>, RootError> {
    let n = sigma.len();
    if n > BRUTE_FORCE_LIMIT {
        return Err(RootError::TooLarge {
            n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let ground = sigma.ground_set();
    Ok(crate::family::Permutations::new(&ground).find(|pi| pi.power(r) == *sigma))
}

/// Every `r`-th power in the symmetric group on `ground`, mapped to its
/// lexicographically least root. One pass over the group replaces one
/// search per target.
pub fn power_table(ground: &[Element], r: u64) -> Result<HashMap<Permutation, Permutation>, RootError> {
    if ground.len() > BRUTE_FORCE_LIMIT {
        return Err(RootError::TooLarge {
            n: ground.len(),
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let mut table = HashMap::new();
    for pi in crate::family::Permutations::new(ground) {
        table.entry(pi.power(r)).or_insert(pi);
    }
    Ok(table)
}
