//! The permutation families studied here, membership tests, and brute-force
//! enumeration over the symmetric group.

use std::fmt;

use thiserror::Error;

use crate::perm::{is_singular_len, CycleType, Element, Permutation};
use crate::roots;

/// Default largest `n` for which [`enumerate`] walks `S_n`.
pub const DEFAULT_ENUMERATION_BOUND: u32 = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("invalid family parameters: {0}")]
    InvalidParameters(String),
    #[error("permutation has {found} points but the family lives on {expected}")]
    IncompatibleGroundSet { expected: u32, found: usize },
    #[error("n = {n} exceeds the enumeration bound {bound}")]
    BoundExceeded { n: u32, bound: u32 },
}

/// A family of permutations of an `n`-set. "First cycle" always means the
/// cycle containing the minimum of the ground set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Family {
    /// All of `S_n`.
    All { n: u32 },
    /// `r`-regular permutations: no cycle length divisible by `r`.
    Regular { r: u32, n: u32 },
    /// `r`-cycle permutations: every cycle length divisible by `r`.
    Cycle { r: u32, n: u32 },
    /// Nearly `r`-regular: the first cycle is `r`-singular, the rest
    /// `r`-regular.
    NearlyRegular { r: u32, n: u32 },
    /// First cycle of length exactly `k`, the rest `r`-regular.
    FirstCycleLength { r: u32, k: u32, n: u32 },
    /// Only odd cycles, the first of length `2k - 1`.
    OddFirstOdd { n: u32, k: u32 },
    /// Odd cycles except the first, which has length `2k`.
    OddFirstEven { n: u32, k: u32 },
    /// Every length a multiple of `q`, every multiplicity a multiple of `r`.
    QrDivisible { q: u32, r: u32, n: u32 },
    /// The `q`-singular part has cycle type `rho`.
    SingularType { rho: CycleType, q: u32, n: u32 },
    /// Permutations having an `r`-th root.
    WithRoot { r: u32, n: u32 },
}

impl Family {
    pub fn n(&self) -> u32 {
        match *self {
            Family::All { n }
            | Family::Regular { n, .. }
            | Family::Cycle { n, .. }
            | Family::NearlyRegular { n, .. }
            | Family::FirstCycleLength { n, .. }
            | Family::OddFirstOdd { n, .. }
            | Family::OddFirstEven { n, .. }
            | Family::QrDivisible { n, .. }
            | Family::SingularType { n, .. }
            | Family::WithRoot { n, .. } => n,
        }
    }

    /// Checks the family's defining constraints on its parameters.
    pub fn validate(&self) -> Result<(), FamilyError> {
        let bad = |msg: String| Err(FamilyError::InvalidParameters(msg));
        let modulus = |name: &str, v: u32| {
            if v < 2 {
                Err(FamilyError::InvalidParameters(format!(
                    "{name} must be at least 2, got {v}"
                )))
            } else {
                Ok(())
            }
        };
        match self {
            Family::All { .. } => Ok(()),
            Family::Regular { r, .. }
            | Family::Cycle { r, .. }
            | Family::NearlyRegular { r, .. }
            | Family::WithRoot { r, .. } => modulus("r", *r),
            Family::FirstCycleLength { r, k, n } => {
                modulus("r", *r)?;
                if *k < 1 || k > n {
                    return bad(format!("need 1 <= k <= n, got k = {k}, n = {n}"));
                }
                Ok(())
            }
            Family::OddFirstOdd { n, k } => {
                if *k < 1 || u64::from(*k) * 2 - 1 > u64::from(*n) {
                    return bad(format!("need 1 <= 2k-1 <= n, got k = {k}, n = {n}"));
                }
                Ok(())
            }
            Family::OddFirstEven { n, k } => {
                if *k < 1 || u64::from(*k) * 2 > u64::from(*n) {
                    return bad(format!("need 1 <= 2k <= n, got k = {k}, n = {n}"));
                }
                Ok(())
            }
            Family::QrDivisible { q, r, .. } => {
                modulus("q", *q)?;
                modulus("r", *r)
            }
            Family::SingularType { rho, q, n } => {
                modulus("q", *q)?;
                if let Some((len, _)) = rho.parts().find(|(len, _)| len % q != 0) {
                    return bad(format!("cycle length {len} in the type is not a multiple of q = {q}"));
                }
                if rho.total() > u64::from(*n) {
                    return bad(format!("|rho| = {} exceeds n = {n}", rho.total()));
                }
                Ok(())
            }
        }
    }

    /// Membership of a permutation already known to have `n` points.
    fn contains_unchecked(&self, p: &Permutation) -> bool {
        let first_then_regular = |r: u32, first_ok: &dyn Fn(usize) -> bool| match p.cycles() {
            [] => false,
            [first, rest @ ..] => first_ok(first.len()) && rest.iter().all(|c| !is_singular_len(c.len(), r)),
        };
        match self {
            Family::All { .. } => true,
            Family::Regular { r, .. } => p.is_regular(*r),
            Family::Cycle { r, .. } => p.is_singular(*r),
            Family::NearlyRegular { r, .. } => first_then_regular(*r, &|len| is_singular_len(len, *r)),
            Family::FirstCycleLength { r, k, .. } => first_then_regular(*r, &|len| len == *k as usize),
            Family::OddFirstOdd { k, .. } => first_then_regular(2, &|len| len == 2 * *k as usize - 1),
            Family::OddFirstEven { k, .. } => first_then_regular(2, &|len| len == 2 * *k as usize),
            Family::QrDivisible { q, r, .. } => roots::is_qr_divisible(&p.cycle_type(), *q, *r),
            Family::SingularType { rho, q, .. } => p.split_parts(*q).1.cycle_type() == *rho,
            Family::WithRoot { r, .. } => roots::has_root_general(p, *r),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::All { n } => write!(f, "S_{n}"),
            Family::Regular { r, n } => write!(f, "Reg_{r}({n})"),
            Family::Cycle { r, n } => write!(f, "Cyc_{r}({n})"),
            Family::NearlyRegular { r, n } => write!(f, "NReg_{r}({n})"),
            Family::FirstCycleLength { r, k, n } => write!(f, "Q_{r},{k}({n})"),
            Family::OddFirstOdd { n, k } => write!(f, "A_{n},{}", 2 * k - 1),
            Family::OddFirstEven { n, k } => write!(f, "P_{n},{}", 2 * k),
            Family::QrDivisible { q, r, n } => write!(f, "Cyc_{q},{r}({n})"),
            Family::SingularType { rho, q, n } => write!(f, "S_{rho},{q}({n})"),
            Family::WithRoot { r, n } => write!(f, "S_{n}^{r}"),
        }
    }
}

/// Whether `p` belongs to `family`. `p` may live on any ground set of the
/// family's size.
pub fn classify(p: &Permutation, family: &Family) -> Result<bool, FamilyError> {
    family.validate()?;
    let n = family.n();
    if p.len() != n as usize {
        return Err(FamilyError::IncompatibleGroundSet {
            expected: n,
            found: p.len(),
        });
    }
    Ok(family.contains_unchecked(p))
}

/// Members of `family` on `{1, …, n}`, in lexicographic order of one-line
/// notation, found by filtering all of `S_n`.
pub fn enumerate(family: &Family, bound: u32) -> Result<impl Iterator<Item = Permutation> + '_, FamilyError> {
    family.validate()?;
    let n = family.n();
    if n > bound {
        return Err(FamilyError::BoundExceeded { n, bound });
    }
    let ground: Vec<Element> = (1..=n).collect();
    Ok(Permutations::new(&ground).filter(move |p| family.contains_unchecked(p)))
}

/// All permutations of a ground set, in lexicographic order of one-line
/// notation over the sorted ground set.
#[derive(Debug, Clone)]
pub struct Permutations {
    ground: Vec<Element>,
    images: Option<Vec<Element>>,
}

impl Permutations {
    pub fn new(ground: &[Element]) -> Self {
        let mut ground = ground.to_vec();
        ground.sort_unstable();
        ground.dedup();
        Self {
            images: Some(ground.clone()),
            ground,
        }
    }

    /// `S_n` on `{1, …, n}`.
    pub fn of_size(n: u32) -> Self {
        Self::new(&(1..=n).collect::<Vec<_>>())
    }
}

impl Iterator for Permutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let images = self.images.as_mut()?;
        let out = Permutation::from_images(&self.ground, images);
        if !next_lexicographic(images) {
            self.images = None;
        }
        Some(out)
    }
}

/// Advances to the next arrangement in lexicographic order; false when
/// `v` was the last one.
fn next_lexicographic(v: &mut [Element]) -> bool {
    let Some(i) = v.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = v.iter().rposition(|&x| x > v[i]).expect("v[i + 1] > v[i]");
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notation::parse_permutation;

    fn count(f: Family) -> usize {
        enumerate(&f, DEFAULT_ENUMERATION_BOUND).unwrap().count()
    }

    #[test]
    fn lexicographic_order() {
        let all: Vec<String> = Permutations::of_size(3).map(|p| p.to_string()).collect();
        assert_eq!(
            all,
            [
                "(1) (2) (3)",
                "(1) (2 3)",
                "(1 2) (3)",
                "(1 2 3)",
                "(1 3 2)",
                "(1 3) (2)"
            ]
        );
        assert_eq!(Permutations::of_size(0).count(), 1);
        assert_eq!(Permutations::of_size(5).count(), 120);
    }

    #[test]
    fn classify_examples() {
        let p = parse_permutation("(1 2 4)(3)(5 6)").unwrap();
        assert!(classify(&p, &Family::NearlyRegular { r: 3, n: 6 }).unwrap());
        for r in 2..6 {
            assert!(classify(&Permutation::identity(5), &Family::Regular { r, n: 5 }).unwrap());
        }
        let q = parse_permutation("(1 2 3 4)(5 6 7 8)").unwrap();
        assert!(classify(&q, &Family::Cycle { r: 2, n: 8 }).unwrap());
        assert!(classify(&q, &Family::Cycle { r: 4, n: 8 }).unwrap());
        assert!(!classify(&q, &Family::Cycle { r: 3, n: 8 }).unwrap());
        assert_eq!(
            classify(&q, &Family::Cycle { r: 2, n: 7 }),
            Err(FamilyError::IncompatibleGroundSet { expected: 7, found: 8 })
        );
        let a = parse_permutation("(1 2 3 4 6)(5 10 8)(7)(9)").unwrap();
        assert!(classify(&a, &Family::OddFirstOdd { n: 10, k: 3 }).unwrap());
        // works on ground sets other than [n]
        let g = parse_permutation("(3)(5 6)").unwrap();
        assert!(classify(&g, &Family::FirstCycleLength { r: 3, k: 1, n: 3 }).unwrap());
    }

    #[test]
    fn parameter_validation() {
        for f in [
            Family::Regular { r: 1, n: 3 },
            Family::FirstCycleLength { r: 3, k: 0, n: 3 },
            Family::FirstCycleLength { r: 3, k: 4, n: 3 },
            Family::OddFirstEven { n: 3, k: 2 },
            Family::SingularType {
                rho: CycleType::parse("3^1").unwrap(),
                q: 2,
                n: 5,
            },
            Family::SingularType {
                rho: CycleType::parse("2^3").unwrap(),
                q: 2,
                n: 5,
            },
        ] {
            assert!(matches!(f.validate(), Err(FamilyError::InvalidParameters(_))), "{f}");
        }
    }

    #[test]
    fn enumeration_examples() {
        let reg22: Vec<_> = enumerate(&Family::Regular { r: 2, n: 2 }, 10).unwrap().collect();
        assert_eq!(reg22, [Permutation::identity(2)]);
        assert_eq!(count(Family::Cycle { r: 3, n: 4 }), 0);
        assert_eq!(count(Family::Regular { r: 3, n: 6 }), 400);
        assert_eq!(count(Family::Cycle { r: 3, n: 6 }), 160);
        assert!(matches!(
            enumerate(&Family::All { n: 11 }, 10),
            Err(FamilyError::BoundExceeded { n: 11, bound: 10 })
        ));
    }

    #[test]
    fn first_cycle_families_partition_regular_ones() {
        for r in 2..=4u32 {
            for n in 1..=7u32 {
                let reg = count(Family::Regular { r, n });
                let by_k: usize = (1..=n)
                    .filter(|k| k % r != 0)
                    .map(|k| count(Family::FirstCycleLength { r, k, n }))
                    .sum();
                assert_eq!(reg, by_k, "r={r} n={n}");
                let nreg = count(Family::NearlyRegular { r, n });
                let by_k: usize = (1..=n)
                    .filter(|k| k % r == 0)
                    .map(|k| count(Family::FirstCycleLength { r, k, n }))
                    .sum();
                assert_eq!(nreg, by_k, "r={r} n={n}");
            }
        }
    }
}
