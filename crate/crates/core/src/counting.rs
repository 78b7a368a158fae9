//! Exact counts of the permutation families and exact root probabilities.
//!
//! Most counts are available through more than one route (closed product
//! formula, recurrence on `n`, dynamic programming over cycle types, brute
//! enumeration) so that the routes can check one another.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::family::{self, Family, FamilyError, DEFAULT_ENUMERATION_BOUND};
use crate::perm::{CycleType, Element};
use crate::roots::{self, RootError, BRUTE_FORCE_LIMIT};

/// An exact non-negative count.
pub type BigCount = BigUint;
/// An exact probability, always in lowest terms.
pub type ExactRational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CountError {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error("r = {r} is not a prime power and n = {n} exceeds the brute-force limit {limit}")]
    BeyondOracle { r: u32, n: u32, limit: usize },
    #[error(transparent)]
    Root(#[from] RootError),
}

/// How to obtain a count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Formula,
    Recurrence,
    /// Walk `S_n` and count members; refused above `bound`.
    Enumerate {
        bound: u32,
    },
}

impl Method {
    pub fn enumerate() -> Self {
        Method::Enumerate {
            bound: DEFAULT_ENUMERATION_BOUND,
        }
    }
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, CountError> {
    Err(CountError::InvalidParameters(msg.into()))
}

fn check_modulus(name: &str, r: u32) -> Result<(), CountError> {
    if r < 2 {
        return invalid(format!("{name} must be at least 2, got {r}"));
    }
    Ok(())
}

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// Lower factorial `x (x−1) ⋯ (x−m+1)`; `(x)_0 = 1` and the product is zero
/// once `m > x`.
pub fn falling_factorial(x: u64, m: u64) -> BigUint {
    if m > x {
        return if m == 0 { BigUint::one() } else { BigUint::zero() };
    }
    (0..m).fold(BigUint::one(), |acc, i| acc * (x - i))
}

/// `m (m−2) (m−4) ⋯`, ending at 1 or 2; equal to 1 for `m ≤ 0`, so that
/// `(−1)!! = 1`.
pub fn double_factorial(m: i64) -> BigUint {
    let mut acc = BigUint::one();
    let mut k = m;
    while k > 1 {
        acc *= k as u64;
        k -= 2;
    }
    acc
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    falling_factorial(n, k) / factorial(k)
}

/// Number of permutations of `|ρ|` points with cycle type `ρ`:
/// `|ρ|! / ∏ (i^{k_i} k_i!)`.
pub fn class_size(rho: &CycleType) -> BigUint {
    let denom = rho.parts().fold(BigUint::one(), |acc, (len, k)| {
        acc * BigUint::from(len).pow(k) * factorial(u64::from(k))
    });
    factorial(rho.total()) / denom
}

/// Counts permutations of `{1, …, n}` whose cycle type satisfies `allowed`,
/// a predicate on `(length, multiplicity)` pairs (multiplicity zero is always
/// allowed). Lengths are added one at a time: `k` cycles of length `L` placed
/// next to an existing permutation of `s` points contribute
/// `C(s + kL, kL) · (kL)! / (L^k k!)` arrangements.
pub fn count_by_cycle_type(n: u64, allowed: impl Fn(u64, u64) -> bool) -> BigUint {
    let n = n as usize;
    let mut table = vec![BigUint::zero(); n + 1];
    table[0] = BigUint::one();
    for len in 1..=n {
        let mut next = table.clone();
        for k in 1..=n / len {
            if !allowed(len as u64, k as u64) {
                continue;
            }
            let block = k * len;
            // ways to lay k cycles of length len on `block` given points
            let arrangements = factorial(block as u64) / (BigUint::from(len).pow(k as u32) * factorial(k as u64));
            for s in 0..=n - block {
                if table[s].is_zero() {
                    continue;
                }
                next[s + block] += &table[s] * binomial((s + block) as u64, block as u64) * &arrangements;
            }
        }
        table = next;
    }
    table.swap_remove(n)
}

/// Weighted counts for `s = 0..=n`: each permutation of `s` points
/// contributes the product of `weight(ℓ)` over its cycle lengths `ℓ`.
/// Recurses on the length of the cycle through the smallest point, which
/// can be filled in `(s−1)_{ℓ−1}` ways.
fn count_by_first_cycle(n: u64, weight: impl Fn(u64) -> BigUint) -> Vec<BigUint> {
    let mut a = vec![BigUint::one()];
    for s in 1..=n {
        let mut total = BigUint::zero();
        for len in 1..=s {
            let w = weight(len);
            if w.is_zero() {
                continue;
            }
            total += falling_factorial(s - 1, len - 1) * w * &a[(s - len) as usize];
        }
        a.push(total);
    }
    a
}

fn enumerate_count(family: &Family, bound: u32) -> Result<BigUint, CountError> {
    Ok(BigUint::from(family::enumerate(family, bound)?.count()))
}

/// `|Reg_r(n)|`, with `|Reg_r(0)| = 1`.
pub fn count_reg(r: u32, n: u32, method: Method) -> Result<BigCount, CountError> {
    check_modulus("r", r)?;
    let (r64, n64) = (u64::from(r), u64::from(n));
    match method {
        Method::Formula => {
            // n! ∏_{j=1}^{m} (jr − 1) / (r^m m!) with m = ⌊n/r⌋
            let m = n64 / r64;
            let num = (1..=m).fold(factorial(n64), |acc, j| acc * (j * r64 - 1));
            Ok(num / (BigUint::from(r).pow(m as u32) * factorial(m)))
        }
        Method::Recurrence => {
            // |Reg_r(rj)| = (rj−1) (rj−1)_{r−1} |Reg_r(rj−r)|, then
            // |Reg_r(rm + d)| = (rm + d)_d |Reg_r(rm)|.
            let m = n64 / r64;
            let mut acc = BigUint::one();
            for j in 1..=m {
                let top = r64 * j - 1;
                acc = acc * top * falling_factorial(top, r64 - 1);
            }
            Ok(acc * falling_factorial(n64, n64 % r64))
        }
        Method::Enumerate { bound } => enumerate_count(&Family::Regular { r, n }, bound),
    }
}

/// `|Cyc_r(n)|`: zero unless `r | n`, and `|Cyc_r(0)| = 1`.
pub fn count_cyc(r: u32, n: u32, method: Method) -> Result<BigCount, CountError> {
    check_modulus("r", r)?;
    let (r64, n64) = (u64::from(r), u64::from(n));
    if let Method::Enumerate { bound } = method {
        return enumerate_count(&Family::Cycle { r, n }, bound);
    }
    if n64 % r64 != 0 {
        return Ok(BigUint::zero());
    }
    let m = n64 / r64;
    match method {
        Method::Formula => {
            // (rm)! ∏_{j=1}^{m−1} (1 + jr) / (r^m m!)
            let num = (1..m).fold(factorial(n64), |acc, j| acc * (1 + j * r64));
            Ok(num / (BigUint::from(r).pow(m as u32) * factorial(m)))
        }
        Method::Recurrence => {
            // |Cyc_r(rj)| = (rj−1)_{r−1} (rj−r+1) |Cyc_r(rj−r)|
            let mut acc = BigUint::one();
            for j in 1..=m {
                let top = r64 * j;
                acc = acc * falling_factorial(top - 1, r64 - 1) * (top - r64 + 1);
            }
            Ok(acc)
        }
        Method::Enumerate { .. } => unreachable!(),
    }
}

/// `|Cyc*_r(n)|`: `r`-cycle permutations weighted by `(r−1)^{#cycles}`,
/// one factor per possible coloring of each cycle.
pub fn count_enriched_cyc(r: u32, n: u32) -> Result<BigCount, CountError> {
    check_modulus("r", r)?;
    if !n.is_multiple_of(r) {
        return invalid(format!("n = {n} is not a multiple of r = {r}"));
    }
    let colors = BigUint::from(r - 1);
    let r64 = u64::from(r);
    let table = count_by_first_cycle(u64::from(n), |len| {
        if len % r64 == 0 {
            colors.clone()
        } else {
            BigUint::zero()
        }
    });
    Ok(table[n as usize].clone())
}

/// `|Q_{r,k}(n)| = (n−1)_{k−1} |Reg_r(n−k)|`.
pub fn count_q_family(r: u32, k: u32, n: u32) -> Result<BigCount, CountError> {
    Family::FirstCycleLength { r, k, n }.validate()?;
    let tail = count_reg(r, n - k, Method::Formula)?;
    Ok(falling_factorial(u64::from(n) - 1, u64::from(k) - 1) * tail)
}

/// Parity of the first cycle's length in the odd/even refinements.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FirstParity {
    /// All cycles odd, the first of length `2k − 1`.
    Odd,
    /// Other cycles odd, the first of length `2k`.
    Even,
}

/// Closed forms for the odd/even refinements of `Q_{2,·}`:
///
/// * `N = 2n`: both `2k−1` and `2k` give `(2n−1)!/(2n−2k)! · ((2n−2k−1)!!)²`;
/// * `N = 2n+1`: length `2k` and length `2k+1` give
///   `(2n)!/(2n−2k)! · ((2n−2k−1)!!)²`.
pub fn count_odd_first(n_total: u32, k: u32, parity: FirstParity) -> Result<BigCount, CountError> {
    let family = match parity {
        FirstParity::Odd => Family::OddFirstOdd { n: n_total, k },
        FirstParity::Even => Family::OddFirstEven { n: n_total, k },
    };
    family.validate()?;
    let big_n = i64::from(n_total);
    let half = big_n / 2;
    // Index into the closed form: for odd N and an odd first cycle of
    // length 2j+1 the formula is indexed by j = k − 1.
    let j = match (n_total % 2, parity) {
        (1, FirstParity::Odd) => i64::from(k) - 1,
        _ => i64::from(k),
    };
    let gap = 2 * half - 2 * j;
    let sq = double_factorial(gap - 1).pow(2);
    Ok(factorial((big_n - 1) as u64) / factorial(gap as u64) * sq)
}

/// `|Cyc_{q,r}(n)|`: every cycle length a multiple of `q`, every length
/// occurring a multiple of `r` times.
pub fn count_cyc_qr(q: u32, r: u32, n: u32) -> Result<BigCount, CountError> {
    check_modulus("q", q)?;
    check_modulus("r", r)?;
    let (q, r) = (u64::from(q), u64::from(r));
    Ok(count_by_cycle_type(u64::from(n), |len, k| len % q == 0 && k % r == 0))
}

/// `|S_{ρ,q}(n)|`: permutations of `[n]` whose `q`-singular part has type
/// `ρ`. Choose the singular points, arrange them with type `ρ`, and fill the
/// rest with a `q`-regular permutation.
pub fn count_s_rho_q(rho: &CycleType, q: u32, n: u32) -> Result<BigCount, CountError> {
    Family::SingularType { rho: rho.clone(), q, n }.validate()?;
    let s = rho.total();
    let rest = count_reg(q, n - s as u32, Method::Formula)?;
    Ok(binomial(u64::from(n), s) * class_size(rho) * rest)
}

/// `|S_n^r|`, the number of permutations of `[n]` with an `r`-th root.
///
/// For a prime power `r = q^l` this is a cycle-type count in which every
/// length divisible by `q` must occur a multiple of `r` times. Otherwise the
/// answer comes from brute force over `S_n`, which is limited to small `n`.
pub fn count_roots(r: u32, n: u32) -> Result<BigCount, CountError> {
    check_modulus("r", r)?;
    match roots::prime_power(r) {
        Some((q, _)) => {
            let (q, r) = (u64::from(q), u64::from(r));
            Ok(count_by_cycle_type(u64::from(n), |len, k| len % q != 0 || k % r == 0))
        }
        None => count_roots_bruteforce(r, n).map_err(|e| match e {
            CountError::Root(RootError::TooLarge { limit, .. }) => CountError::BeyondOracle { r, n, limit },
            other => other,
        }),
    }
}

/// `|S_n^r|` as the number of distinct `r`-th powers in `S_n`.
pub fn count_roots_bruteforce(r: u32, n: u32) -> Result<BigCount, CountError> {
    check_modulus("r", r)?;
    if n as usize > BRUTE_FORCE_LIMIT {
        return Err(RootError::TooLarge {
            n: n as usize,
            limit: BRUTE_FORCE_LIMIT,
        }
        .into());
    }
    let ground: Vec<Element> = (1..=n).collect();
    Ok(BigUint::from(roots::power_table(&ground, u64::from(r))?.len()))
}

/// `p_r(n) = |S_n^r| / n!` in lowest terms.
pub fn prob_root(r: u32, n: u32) -> Result<ExactRational, CountError> {
    Ok(ratio(count_roots(r, n)?, factorial(u64::from(n))))
}

/// `∏_{k=1}^{⌊n/r⌋} (rk − 1)/(rk)`, the proportion of `r`-regular
/// permutations of `[n]`.
pub fn regular_proportion(r: u32, n: u32) -> Result<ExactRational, CountError> {
    check_modulus("r", r)?;
    let r = i64::from(r);
    Ok((1..=i64::from(n) / r).fold(BigRational::one(), |acc, k| {
        acc * BigRational::new(BigInt::from(r * k - 1), BigInt::from(r * k))
    }))
}

/// Every cycle type with all lengths divisible by `step` and total at most
/// `max_total`, the empty type first, ordered by total.
pub fn cycle_types_with_step(max_total: u32, step: u32) -> Vec<CycleType> {
    fn extend(remaining: u32, largest: u32, step: u32, parts: &mut Vec<usize>, out: &mut Vec<CycleType>) {
        out.push(CycleType::from_lengths(parts.iter().copied()));
        let mut len = step;
        while len <= remaining.min(largest) {
            parts.push(len as usize);
            extend(remaining - len, len, step, parts, out);
            parts.pop();
            len += step;
        }
    }
    let mut out = Vec::new();
    if step > 0 {
        extend(max_total, max_total, step, &mut Vec::new(), &mut out);
    }
    out.sort_by_key(|t| t.total());
    out
}

/// `num / den` reduced.
pub fn ratio(num: BigUint, den: BigUint) -> ExactRational {
    BigRational::new(num.into(), den.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    fn q(n: i64, d: i64) -> ExactRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn small_factorials() {
        assert_eq!(falling_factorial(5, 2), big(20));
        assert_eq!(falling_factorial(9, 0), big(1));
        assert_eq!(falling_factorial(0, 0), big(1));
        assert_eq!(falling_factorial(7, 3), big(210));
        assert_eq!(falling_factorial(2, 3), big(0));
        assert_eq!(double_factorial(7), big(105));
        assert_eq!(double_factorial(-1), big(1));
        assert_eq!(double_factorial(8), big(384));
        assert_eq!(binomial(6, 2), big(15));
        assert_eq!(class_size(&CycleType::parse("2^2").unwrap()), big(3));
        assert_eq!(class_size(&CycleType::empty()), big(1));
    }

    #[test]
    fn regular_counts() {
        for m in [Method::Formula, Method::Recurrence, Method::enumerate()] {
            assert_eq!(count_reg(2, 8, m).unwrap(), big(11025), "{m:?}");
            assert_eq!(count_reg(2, 0, m).unwrap(), big(1), "{m:?}");
            assert_eq!(count_reg(3, 6, m).unwrap(), big(400), "{m:?}");
        }
        assert_eq!(count_reg(2, 8, Method::Formula).unwrap(), double_factorial(7).pow(2));
    }

    #[test]
    fn cycle_counts() {
        for m in [Method::Formula, Method::Recurrence, Method::enumerate()] {
            assert_eq!(count_cyc(3, 4, m).unwrap(), big(0), "{m:?}");
            assert_eq!(count_cyc(3, 6, m).unwrap(), big(160), "{m:?}");
            assert_eq!(count_cyc(2, 8, m).unwrap(), big(11025), "{m:?}");
            assert_eq!(count_cyc(5, 0, m).unwrap(), big(1), "{m:?}");
        }
        assert!(matches!(
            count_cyc(2, 11, Method::enumerate()),
            Err(CountError::Family(FamilyError::BoundExceeded { n: 11, bound: 10 }))
        ));
    }

    #[test]
    fn enriched_counts() {
        assert_eq!(count_enriched_cyc(3, 6).unwrap(), big(400));
        assert_eq!(
            count_enriched_cyc(4, 4).unwrap(),
            count_reg(4, 4, Method::Formula).unwrap()
        );
        for n in (0..=20).step_by(2) {
            assert_eq!(
                count_enriched_cyc(2, n).unwrap(),
                count_cyc(2, n, Method::Formula).unwrap()
            );
        }
        assert!(count_enriched_cyc(3, 4).is_err());
    }

    #[test]
    fn q_family_counts() {
        assert_eq!(count_q_family(2, 1, 2).unwrap(), big(1));
        // Q_{3,1}(3): (1)(2)(3), (1)(2 3)
        assert_eq!(count_q_family(3, 1, 3).unwrap(), big(2));
        assert!(count_q_family(3, 0, 3).is_err());
        assert!(count_q_family(3, 4, 3).is_err());
    }

    #[test]
    fn odd_first_closed_forms_match_q_family() {
        for n_total in 1..=20u32 {
            for k in 1..=n_total {
                if 2 * k - 1 <= n_total {
                    assert_eq!(
                        count_odd_first(n_total, k, FirstParity::Odd).unwrap(),
                        count_q_family(2, 2 * k - 1, n_total).unwrap(),
                        "A_{n_total},{}",
                        2 * k - 1
                    );
                }
                if 2 * k <= n_total {
                    assert_eq!(
                        count_odd_first(n_total, k, FirstParity::Even).unwrap(),
                        count_q_family(2, 2 * k, n_total).unwrap(),
                        "P_{n_total},{}",
                        2 * k
                    );
                }
            }
        }
    }

    #[test]
    fn qr_counts() {
        assert_eq!(count_cyc_qr(2, 2, 4).unwrap(), big(3));
        assert_eq!(count_cyc_qr(2, 2, 6).unwrap(), big(0));
        assert_eq!(count_cyc_qr(2, 2, 0).unwrap(), big(1));
    }

    #[test]
    fn singular_type_counts() {
        for n in 0..=12 {
            assert_eq!(
                count_s_rho_q(&CycleType::empty(), 2, n).unwrap(),
                count_reg(2, n, Method::Formula).unwrap()
            );
        }
        assert!(count_s_rho_q(&CycleType::parse("3").unwrap(), 2, 5).is_err());
        assert!(count_s_rho_q(&CycleType::parse("2^3").unwrap(), 2, 5).is_err());
    }

    #[test]
    fn root_probabilities() {
        assert_eq!(prob_root(2, 6).unwrap(), q(3, 8));
        assert_eq!(prob_root(2, 12).unwrap(), q(209, 720));
        assert_eq!(prob_root(9, 12).unwrap(), q(110, 243));
        assert_eq!(prob_root(6, 4).unwrap(), q(1, 6));
        assert_eq!(prob_root(6, 5).unwrap(), q(1, 3));
        let squares: Vec<_> = (1..=7).map(|n| count_roots(2, n).unwrap()).collect();
        assert_eq!(squares, [1u64, 1, 3, 12, 60, 270, 1890].map(big));
        assert!(matches!(
            count_roots(6, 9),
            Err(CountError::BeyondOracle { r: 6, n: 9, .. })
        ));
    }

    #[test]
    fn cycle_type_listing() {
        let types: Vec<String> = cycle_types_with_step(6, 2).iter().map(|t| t.to_string()).collect();
        assert_eq!(types, ["∅", "2^1", "2^2", "4^1", "2^3", "2^1,4^1", "6^1"]);
        assert_eq!(cycle_types_with_step(5, 1).len(), 1 + 1 + 2 + 3 + 5 + 7);
    }

    #[test]
    fn regular_proportion_examples() {
        assert_eq!(regular_proportion(2, 2).unwrap(), q(1, 2));
        assert_eq!(regular_proportion(3, 2).unwrap(), q(1, 1));
        assert_eq!(regular_proportion(2, 8).unwrap(), q(11025, 40320));
    }
}
