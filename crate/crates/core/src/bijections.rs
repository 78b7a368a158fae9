//! Cycle-surgery bijections between `r`-regular permutations, nearly
//! `r`-regular permutations and enriched `r`-cycle permutations.
//!
//! Everything works on arbitrary finite ground sets. The "first cycle" of a
//! permutation is the one containing the minimum of its ground set, which is
//! the first cycle in canonical order.
//!
//! The building blocks are [`delta`] and [`delta_inv`], which are mutually
//! recursive. On top of them:
//!
//! * [`psi`]: `Reg_r(n) × [n+1] → Reg_r(n+1)` when `r ∤ n+1`;
//! * [`phi`] / [`alpha`]: grow / shrink the first cycle by one while keeping
//!   the other cycles `r`-regular;
//! * [`lambda`] / [`lambda_inv`]: grow the first cycle of an `r`-regular
//!   permutation of `rn` points until it is `r`-singular, recording in its
//!   color how many steps that took;
//! * [`phi_star`] / [`phi_star_inv`]: repeat `lambda` on what is left until
//!   every cycle is singular and colored.
//!
//! Public entry points validate their input and return [`MapError`]; the
//! `*_unchecked` helpers assume validated input.

use thiserror::Error;

use crate::perm::{is_singular_len, Element, EnrichedPermutation, PermError, Permutation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("r must be at least 2, got {0}")]
    InvalidModulus(u32),
    #[error("the permutation is empty")]
    Empty,
    #[error("the permutation is not {r}-regular")]
    NotRegular { r: u32 },
    #[error("a cycle other than the first is {r}-singular")]
    NotNearlyRegular { r: u32 },
    #[error("a cycle of the enriched permutation is not {r}-singular")]
    NotCyclePermutation { r: u32 },
    #[error("ground set size {size} must not be divisible by {r}")]
    SizeDivisible { size: usize, r: u32 },
    #[error("ground set size {size} must be a multiple of {r}")]
    SizeNotMultiple { size: usize, r: u32 },
    #[error("{0} already belongs to the permutation")]
    Collision(Element),
    #[error("ground set must be {{1, …, {n}}}")]
    NotStandardGroundSet { n: usize },
    #[error("index {j} outside 1..={max}")]
    IndexOutOfRange { j: u32, max: u32 },
    #[error("cycle class is empty")]
    EmptyClass,
    #[error("expected {expected} break points, got {found}")]
    BreakPointCount { expected: usize, found: usize },
    #[error("cycles in a class must share one length")]
    LengthMismatch,
    #[error("break point {point} is not in cycle {cycle}")]
    BreakPointNotInCycle { point: Element, cycle: usize },
    #[error(transparent)]
    Invalid(#[from] PermError),
}

/// The image of [`delta`]: a distinguished point and an `r`-regular
/// permutation of the remaining points.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DeltaOutput {
    pub distinguished: Element,
    pub rest: Permutation,
}

/// An `r`-singular first cycle together with its color.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredFirstCycle {
    pub cycle: Vec<Element>,
    pub color: u32,
}

fn check_modulus(r: u32) -> Result<(), MapError> {
    if r < 2 {
        Err(MapError::InvalidModulus(r))
    } else {
        Ok(())
    }
}

fn check_regular(p: &Permutation, r: u32) -> Result<(), MapError> {
    if p.is_regular(r) {
        Ok(())
    } else {
        Err(MapError::NotRegular { r })
    }
}

fn ru(r: u32) -> usize {
    r as usize
}

/// Removes a distinguished point from an `r`-regular permutation of a set
/// `S` with `r ∤ |S|`, leaving an `r`-regular permutation of `S ∖ {x}`.
///
/// With `D` the first cycle, `l` its length and `x` its last entry:
/// * `l = 1`: return `x` and the other cycles;
/// * `l ≢ 1 (mod r)`: drop `x` from `D`;
/// * otherwise drop the last two entries `x̃ x` of `D`, and put `x̃` back
///   into the other cycles with [`delta_inv`].
pub fn delta(sigma: &Permutation, r: u32) -> Result<DeltaOutput, MapError> {
    check_modulus(r)?;
    if sigma.is_empty() {
        return Err(MapError::Empty);
    }
    if sigma.len().is_multiple_of(ru(r)) {
        return Err(MapError::SizeDivisible { size: sigma.len(), r });
    }
    check_regular(sigma, r)?;
    let (distinguished, rest) = delta_unchecked(sigma.clone(), r);
    Ok(DeltaOutput { distinguished, rest })
}

pub(crate) fn delta_unchecked(sigma: Permutation, r: u32) -> (Element, Permutation) {
    let (mut first, rest) = sigma.split_first().expect("nonempty");
    let l = first.len();
    if l == 1 {
        return (first[0], rest);
    }
    let x = first.pop().expect("l > 1");
    if l % ru(r) != 1 {
        return (x, rest.prepend(first));
    }
    let x_tilde = first.pop().expect("l > r");
    let pi_tilde = delta_inv_unchecked(x_tilde, rest, r);
    (x, pi_tilde.prepend(first))
}

/// Inverse of [`delta`]: puts `x` back as the last entry of the first cycle.
///
/// `pi` must be `r`-regular, avoid `x`, and satisfy `r ∤ |pi| + 1`.
pub fn delta_inv(x: Element, pi: &Permutation, r: u32) -> Result<Permutation, MapError> {
    check_modulus(r)?;
    if x == 0 {
        return Err(PermError::ZeroElement.into());
    }
    if pi.contains(x) {
        return Err(MapError::Collision(x));
    }
    if (pi.len() + 1).is_multiple_of(ru(r)) {
        return Err(MapError::SizeDivisible { size: pi.len() + 1, r });
    }
    check_regular(pi, r)?;
    Ok(delta_inv_unchecked(x, pi.clone(), r))
}

pub(crate) fn delta_inv_unchecked(x: Element, pi: Permutation, r: u32) -> Permutation {
    if pi.min_element().is_none_or(|m| x < m) {
        return pi.prepend(vec![x]);
    }
    let (mut first, rest) = pi.split_first().expect("nonempty");
    if (first.len() + 1) % ru(r) != 0 {
        first.push(x);
        return rest.prepend(first);
    }
    // |rest| ≡ |pi| + 1 (mod r), so rest is nonempty and valid for delta.
    let (x_tilde, sigma_tilde) = delta_unchecked(rest, r);
    first.push(x_tilde);
    first.push(x);
    sigma_tilde.prepend(first)
}

/// `Reg_r(n) × [n+1] → Reg_r(n+1)` for `r ∤ n+1`: relabel `sigma` onto
/// `[n+1] ∖ {j}` preserving order, then insert `j` with [`delta_inv`].
pub fn psi(sigma: &Permutation, j: u32, r: u32) -> Result<Permutation, MapError> {
    check_modulus(r)?;
    let n = sigma.len();
    check_standard(sigma)?;
    if (n + 1).is_multiple_of(ru(r)) {
        return Err(MapError::SizeDivisible { size: n + 1, r });
    }
    let max = n as u32 + 1;
    if j < 1 || j > max {
        return Err(MapError::IndexOutOfRange { j, max });
    }
    check_regular(sigma, r)?;
    let shifted = sigma.relabel_monotone(|e| if e >= j { e + 1 } else { e });
    Ok(delta_inv_unchecked(j, shifted, r))
}

/// Inverse of [`psi`]: returns `(sigma, j)`.
pub fn psi_inv(tau: &Permutation, r: u32) -> Result<(Permutation, u32), MapError> {
    check_standard(tau)?;
    let DeltaOutput { distinguished: j, rest } = delta(tau, r)?;
    let sigma = rest.relabel_monotone(|e| if e > j { e - 1 } else { e });
    Ok((sigma, j))
}

fn check_standard(p: &Permutation) -> Result<(), MapError> {
    let n = p.len();
    if p.ground_set().iter().copied().eq(1..=n as u32) {
        Ok(())
    } else {
        Err(MapError::NotStandardGroundSet { n })
    }
}

/// Checks that every cycle after the first is `r`-regular.
fn check_tail_regular(p: &Permutation, r: u32) -> Result<(), MapError> {
    if p.cycles()[1..].iter().all(|c| !is_singular_len(c.len(), r)) {
        Ok(())
    } else {
        Err(MapError::NotNearlyRegular { r })
    }
}

/// `Q_{r,k}(n) → Q_{r,k+1}(n)` for `r ∤ n − k`, where `k` is the length of
/// the first cycle and `n` the size of the ground set.
///
/// The other cycles go through [`delta`]; the point it singles out is
/// appended to the first cycle.
pub fn phi(sigma: &Permutation, r: u32) -> Result<Permutation, MapError> {
    check_modulus(r)?;
    let k = sigma.first_cycle().ok_or(MapError::Empty)?.len();
    let rest_len = sigma.len() - k;
    if rest_len.is_multiple_of(ru(r)) {
        return Err(MapError::SizeDivisible { size: rest_len, r });
    }
    check_tail_regular(sigma, r)?;
    Ok(phi_unchecked(sigma.clone(), r))
}

pub(crate) fn phi_unchecked(sigma: Permutation, r: u32) -> Permutation {
    let (mut first, rest) = sigma.split_first().expect("nonempty");
    let (x, pi_tilde) = delta_unchecked(rest, r);
    first.push(x);
    pi_tilde.prepend(first)
}

/// Inverse of [`phi`]: `Q_{r,k+1}(n) → Q_{r,k}(n)` for `r ∤ n − k`.
pub fn alpha(pi: &Permutation, r: u32) -> Result<Permutation, MapError> {
    check_modulus(r)?;
    let len = pi.first_cycle().ok_or(MapError::Empty)?.len();
    if len < 2 {
        return Err(MapError::Invalid(PermError::EmptyCycle));
    }
    // Removing the last entry of the first cycle leaves n − k other points
    // once it is reinserted.
    let rest_len = pi.len() - len + 1;
    if rest_len.is_multiple_of(ru(r)) {
        return Err(MapError::SizeDivisible { size: rest_len, r });
    }
    check_tail_regular(pi, r)?;
    Ok(alpha_unchecked(pi.clone(), r))
}

pub(crate) fn alpha_unchecked(pi: Permutation, r: u32) -> Permutation {
    let (mut first, rest) = pi.split_first().expect("nonempty");
    let x = first.pop().expect("first cycle has at least two entries");
    delta_inv_unchecked(x, rest, r).prepend(first)
}

fn check_reg_multiple(sigma: &Permutation, r: u32) -> Result<(), MapError> {
    check_modulus(r)?;
    if !sigma.len().is_multiple_of(ru(r)) {
        return Err(MapError::SizeNotMultiple { size: sigma.len(), r });
    }
    check_regular(sigma, r)
}

/// `Reg_r(rn) → NReg*_r(rn)`. A first cycle of length `rk + i` is grown to
/// length `rk + r` by `r − i` applications of [`phi`] and colored `i`.
pub fn lambda(sigma: &Permutation, r: u32) -> Result<EnrichedPermutation, MapError> {
    check_reg_multiple(sigma, r)?;
    if sigma.is_empty() {
        return Err(MapError::Empty);
    }
    let (first, rest) = lambda_unchecked(sigma.clone(), r);
    let mut colors = vec![None; rest.num_cycles() + 1];
    colors[0] = Some(first.color);
    Ok(EnrichedPermutation::from_parts_unchecked(
        rest.prepend(first.cycle),
        r,
        colors,
    ))
}

/// Splits `Λ(sigma)` into its colored first cycle and the regular remainder.
pub(crate) fn lambda_unchecked(sigma: Permutation, r: u32) -> (ColoredFirstCycle, Permutation) {
    let color = (sigma.first_cycle().expect("nonempty").len() % ru(r)) as u32;
    let mut p = sigma;
    for _ in color..r {
        p = phi_unchecked(p, r);
    }
    let (cycle, rest) = p.split_first().expect("nonempty");
    (ColoredFirstCycle { cycle, color }, rest)
}

/// Inverse of [`lambda`]: a first cycle colored `c` is shrunk by `r − c`
/// applications of [`alpha`].
pub fn lambda_inv(tau: &EnrichedPermutation) -> Result<Permutation, MapError> {
    let r = tau.r();
    let base = tau.base();
    if base.is_empty() {
        return Err(MapError::Empty);
    }
    if !base.len().is_multiple_of(ru(r)) {
        return Err(MapError::SizeNotMultiple { size: base.len(), r });
    }
    // Enrichment guarantees a singular cycle carries a color and a regular
    // one does not.
    let color = tau.color(0).ok_or(MapError::NotNearlyRegular { r })?;
    if tau.num_colored() != 1 {
        return Err(MapError::NotNearlyRegular { r });
    }
    let (cycle, rest) = base.clone().split_first().expect("nonempty");
    Ok(lambda_inv_unchecked(ColoredFirstCycle { cycle, color }, rest, r))
}

pub(crate) fn lambda_inv_unchecked(first: ColoredFirstCycle, rest: Permutation, r: u32) -> Permutation {
    let mut p = rest.prepend(first.cycle);
    for _ in first.color..r {
        p = alpha_unchecked(p, r);
    }
    p
}

/// `Reg_r(rn) → Cyc*_r(rn)`: peel off one colored singular cycle with
/// [`lambda`] until nothing regular is left.
pub fn phi_star(sigma: &Permutation, r: u32) -> Result<EnrichedPermutation, MapError> {
    check_reg_multiple(sigma, r)?;
    Ok(phi_star_unchecked(sigma.clone(), r))
}

pub(crate) fn phi_star_unchecked(sigma: Permutation, r: u32) -> EnrichedPermutation {
    let mut cycles = Vec::new();
    let mut colors = Vec::new();
    let mut rest = sigma;
    while !rest.is_empty() {
        let (first, remainder) = lambda_unchecked(rest, r);
        cycles.push(first.cycle);
        colors.push(Some(first.color));
        rest = remainder;
    }
    // Each peeled cycle holds the minimum of what remained, so peel order is
    // canonical order.
    EnrichedPermutation::from_parts_unchecked(Permutation::from_canonical(cycles), r, colors)
}

/// Inverse of [`phi_star`]: undo the peeling innermost-first.
pub fn phi_star_inv(tau: &EnrichedPermutation) -> Result<Permutation, MapError> {
    let r = tau.r();
    if !tau.base().is_singular(r) {
        return Err(MapError::NotCyclePermutation { r });
    }
    Ok(phi_star_inv_unchecked(tau))
}

pub(crate) fn phi_star_inv_unchecked(tau: &EnrichedPermutation) -> Permutation {
    let r = tau.r();
    let mut acc = Permutation::empty();
    let pieces: Vec<_> = tau.colored_cycles().collect();
    for (cycle, color) in pieces.into_iter().rev() {
        let first = ColoredFirstCycle {
            cycle: cycle.to_vec(),
            color: color.expect("singular cycles are colored"),
        };
        acc = lambda_inv_unchecked(first, acc, r);
    }
    acc
}

/// Joins `r` disjoint cycles of equal length into one cycle: the first
/// cycle written from its minimum, followed by each later cycle opened at
/// its break point. `break_points[j]` must lie in `class[j + 1]`.
pub fn merge_cycle_class(class: &[Vec<Element>], break_points: &[Element]) -> Result<Permutation, MapError> {
    let (head, tail) = class.split_first().ok_or(MapError::EmptyClass)?;
    if break_points.len() != tail.len() {
        return Err(MapError::BreakPointCount {
            expected: tail.len(),
            found: break_points.len(),
        });
    }
    if tail.iter().any(|c| c.len() != head.len()) {
        return Err(MapError::LengthMismatch);
    }
    // Validates disjointness and the cycles themselves.
    let head = Permutation::from_cycles([head.clone()])?.into_cycles().remove(0);
    Permutation::from_cycles(class.iter().cloned())?;

    let mut merged = head;
    for (idx, (cycle, &b)) in tail.iter().zip(break_points).enumerate() {
        let pos = cycle
            .iter()
            .position(|&e| e == b)
            .ok_or(MapError::BreakPointNotInCycle {
                point: b,
                cycle: idx + 1,
            })?;
        merged.extend(cycle[pos..].iter().chain(&cycle[..pos]));
    }
    Ok(Permutation::from_cycles([merged])?)
}

/// The `r = 2` case of [`phi_star`]: a permutation of `2n` points with only
/// odd cycles goes to one with only even cycles. There is a single color, so
/// it is dropped.
pub fn odd_to_even(sigma: &Permutation) -> Result<Permutation, MapError> {
    Ok(phi_star(sigma, 2)?.into_base())
}

/// Inverse of [`odd_to_even`].
pub fn even_to_odd(tau: &Permutation) -> Result<Permutation, MapError> {
    phi_star_inv(&EnrichedPermutation::from_plain_r2(tau.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notation::{parse_enriched, parse_permutation};

    fn p(s: &str) -> Permutation {
        parse_permutation(s).unwrap()
    }

    #[test]
    fn delta_worked_example() {
        let out = delta(&p("(1 8 2 5)(3)(4)(6 7)"), 3).unwrap();
        assert_eq!(out.distinguished, 5);
        assert_eq!(out.rest, p("(1 8)(2)(3)(4)(6 7)"));
        assert_eq!(delta_inv(5, &out.rest, 3).unwrap(), p("(1 8 2 5)(3)(4)(6 7)"));
    }

    #[test]
    fn delta_small_cases() {
        assert_eq!(
            delta(&p("(1)"), 2).unwrap(),
            DeltaOutput {
                distinguished: 1,
                rest: Permutation::empty()
            }
        );
        assert_eq!(
            delta(&p("(5 6)"), 3).unwrap(),
            DeltaOutput {
                distinguished: 6,
                rest: p("(5)")
            }
        );
        assert_eq!(delta_inv(6, &p("(5)"), 3).unwrap(), p("(5 6)"));
        assert_eq!(delta_inv(2, &p("(3)(4)(6 7)"), 3).unwrap(), p("(2)(3)(4)(6 7)"));
        assert_eq!(delta_inv(1, &Permutation::empty(), 2).unwrap(), p("(1)"));
    }

    #[test]
    fn delta_errors() {
        assert_eq!(
            delta(&p("(1)(2)(3)"), 3),
            Err(MapError::SizeDivisible { size: 3, r: 3 })
        );
        assert_eq!(delta(&p("(1 2 3)(4)"), 3), Err(MapError::NotRegular { r: 3 }));
        assert_eq!(delta(&Permutation::empty(), 3), Err(MapError::Empty));
        assert_eq!(delta(&p("(1)"), 1), Err(MapError::InvalidModulus(1)));
        assert_eq!(delta_inv(3, &p("(3)"), 3), Err(MapError::Collision(3)));
        assert_eq!(
            delta_inv(3, &p("(1)(2)"), 3),
            Err(MapError::SizeDivisible { size: 3, r: 3 })
        );
    }

    #[test]
    fn delta_round_trip_on_subsets() {
        // every sigma in Reg_3(S), S ⊆ [7], |S| ≢ 0 mod 3
        let mut checked = 0;
        for mask in 1u32..(1 << 7) {
            let ground: Vec<Element> = (1..=7).filter(|i| mask & (1 << (i - 1)) != 0).collect();
            if ground.len().is_multiple_of(3) {
                continue;
            }
            for sigma in crate::family::Permutations::new(&ground).filter(|s| s.is_regular(3)) {
                let out = delta(&sigma, 3).unwrap();
                assert!(out.rest.is_regular(3));
                assert!(!out.rest.contains(out.distinguished));
                assert_eq!(delta_inv(out.distinguished, &out.rest, 3).unwrap(), sigma);
                checked += 1;
            }
        }
        assert!(checked > 0);
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi(&p("(3)(5 6)"), 3).unwrap(), p("(3 6)(5)"));
        assert_eq!(phi(&p("(3 6)(5)"), 3).unwrap(), p("(3 6 5)"));
        let a = p("(1 2 3 4 6)(5 10 8)(7)(9)");
        assert_eq!(
            delta(&p("(5 10 8)(7)(9)"), 2).unwrap(),
            DeltaOutput {
                distinguished: 8,
                rest: p("(5)(7 9 10)")
            }
        );
        assert_eq!(phi(&a, 2).unwrap(), p("(1 2 3 4 6 8)(5)(7 9 10)"));
        assert_eq!(alpha(&p("(3 6)(5)"), 3).unwrap(), p("(3)(5 6)"));
        assert_eq!(alpha(&p("(3 6 5)"), 3).unwrap(), p("(3 6)(5)"));
        assert_eq!(alpha(&p("(1 2 3 4 6 8)(5)(7 9 10)"), 2).unwrap(), a);
    }

    #[test]
    fn phi_errors() {
        // n − k = 3 is divisible by 3
        assert_eq!(phi(&p("(1)(2 3 4)"), 3), Err(MapError::SizeDivisible { size: 3, r: 3 }));
        assert_eq!(phi(&p("(1)(2 3 4)(5)"), 3), Err(MapError::NotNearlyRegular { r: 3 }));
        assert_eq!(alpha(&p("(1)(2)"), 3), Err(MapError::Invalid(PermError::EmptyCycle)));
        assert_eq!(phi(&Permutation::empty(), 3), Err(MapError::Empty));
    }

    #[test]
    fn lambda_examples() {
        let e = lambda(&p("(3)(5 6)"), 3).unwrap();
        assert_eq!(e.to_string(), "(3 6 5)_1");
        let e = lambda(&p("(1 2)(3 4)(5 6)"), 3).unwrap();
        assert_eq!(e.to_string(), "(1 2 4)_2 (3) (5 6)");
        assert_eq!(
            lambda_inv(&parse_enriched("(3 6 5)_1", 3).unwrap()).unwrap(),
            p("(3)(5 6)")
        );
        assert_eq!(
            lambda_inv(&parse_enriched("(1 2 4)_2 (3) (5 6)", 3).unwrap()).unwrap(),
            p("(1 2)(3 4)(5 6)")
        );
    }

    #[test]
    fn lambda_errors() {
        assert_eq!(lambda(&p("(1 2)"), 3), Err(MapError::SizeNotMultiple { size: 2, r: 3 }));
        assert_eq!(lambda(&p("(1 2 3)"), 3), Err(MapError::NotRegular { r: 3 }));
        assert_eq!(lambda(&Permutation::empty(), 3), Err(MapError::Empty));
        let two_colored = parse_enriched("(1 2 3)_1 (4 5 6)_2", 3).unwrap();
        assert_eq!(lambda_inv(&two_colored), Err(MapError::NotNearlyRegular { r: 3 }));
        let uncolored_first = parse_enriched("(1) (2 3 4)_1 (5 6)", 3).unwrap();
        assert_eq!(lambda_inv(&uncolored_first), Err(MapError::NotNearlyRegular { r: 3 }));
    }

    #[test]
    fn phi_star_example() {
        let e = phi_star(&p("(1 2)(3 4)(5 6)"), 3).unwrap();
        assert_eq!(e.to_string(), "(1 2 4)_2 (3 6 5)_1");
        assert_eq!(phi_star_inv(&e).unwrap(), p("(1 2)(3 4)(5 6)"));
        let empty = phi_star(&Permutation::empty(), 3).unwrap();
        assert!(empty.base().is_empty());
        assert_eq!(phi_star_inv(&empty).unwrap(), Permutation::empty());
        assert_eq!(
            phi_star_inv(&parse_enriched("(1 2)_1", 2).unwrap()).unwrap(),
            p("(1)(2)")
        );
        assert_eq!(
            phi_star_inv(&parse_enriched("(1 2 3)_1 (4)", 3).unwrap()),
            Err(MapError::NotCyclePermutation { r: 3 })
        );
    }

    #[test]
    fn psi_small_cases() {
        assert_eq!(psi(&Permutation::empty(), 1, 2).unwrap(), p("(1)"));
        let images: std::collections::BTreeSet<_> =
            (1..=3).map(|j| psi(&Permutation::identity(2), j, 2).unwrap()).collect();
        assert_eq!(images.len(), 3);
        assert!(images.iter().all(|t| t.is_regular(2) && t.len() == 3));
        let images: std::collections::BTreeSet<_> = (1..=2).map(|j| psi(&p("(1)"), j, 3).unwrap()).collect();
        assert_eq!(images, [p("(1)(2)"), p("(1 2)")].into_iter().collect());
        assert_eq!(psi(&p("(1)"), 3, 3), Err(MapError::IndexOutOfRange { j: 3, max: 2 }));
        assert_eq!(psi(&p("(2)"), 1, 3), Err(MapError::NotStandardGroundSet { n: 1 }));
        assert_eq!(
            psi(&Permutation::identity(2), 1, 3),
            Err(MapError::SizeDivisible { size: 3, r: 3 })
        );
        for j in 1..=2 {
            let t = psi(&p("(1)"), j, 3).unwrap();
            assert_eq!(psi_inv(&t, 3).unwrap(), (p("(1)"), j));
        }
    }

    #[test]
    fn merge_examples() {
        let class = [vec![1, 2], vec![3, 4]];
        assert_eq!(merge_cycle_class(&class, &[3]).unwrap(), p("(1 2 3 4)"));
        assert_eq!(merge_cycle_class(&class, &[4]).unwrap(), p("(1 2 4 3)"));
        let class = [vec![1, 2, 3], vec![4, 5, 6]];
        let outs: std::collections::BTreeSet<_> = (4..=6).map(|b| merge_cycle_class(&class, &[b]).unwrap()).collect();
        assert_eq!(outs.len(), 3);
        assert!(outs.iter().all(|c| c.num_cycles() == 1 && c.len() == 6));
        assert_eq!(
            merge_cycle_class(&[vec![1, 2], vec![3, 4]], &[1]),
            Err(MapError::BreakPointNotInCycle { point: 1, cycle: 1 })
        );
        assert_eq!(
            merge_cycle_class(&[vec![1, 2], vec![3]], &[3]),
            Err(MapError::LengthMismatch)
        );
        assert_eq!(
            merge_cycle_class(&[vec![1, 2], vec![3, 4]], &[]),
            Err(MapError::BreakPointCount { expected: 1, found: 0 })
        );
        assert!(matches!(
            merge_cycle_class(&[vec![1, 2], vec![2, 4]], &[4]),
            Err(MapError::Invalid(PermError::ElementInTwoCycles(2)))
        ));
        assert_eq!(merge_cycle_class(&[], &[]), Err(MapError::EmptyClass));
    }

    #[test]
    fn odd_even_duality() {
        let odd = p("(1 2 3)(4)(5 6 7)(8)");
        let even = odd_to_even(&odd).unwrap();
        assert!(even.is_singular(2));
        assert_eq!(even_to_odd(&even).unwrap(), odd);
    }
}
