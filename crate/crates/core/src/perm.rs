//! Permutations of finite sets of positive integers, kept in canonical cycle
//! notation: every cycle starts with its smallest element and cycles are
//! ordered by increasing minima.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_integer::Integer;
use thiserror::Error;

/// A point of the ground set.
pub type Element = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("0 is not a positive integer")]
    ZeroElement,
    #[error("empty cycle")]
    EmptyCycle,
    #[error("element {0} is repeated inside one cycle")]
    RepeatedElement(Element),
    #[error("element {0} appears in two cycles")]
    ElementInTwoCycles(Element),
    #[error("ground sets differ")]
    GroundSetMismatch,
    #[error("r must be at least 2, got {0}")]
    InvalidModulus(u32),
    #[error("color {color} outside 1..={max}")]
    ColorOutOfRange { color: u32, max: u32 },
    #[error("cycle {index} has length {len}, not divisible by {r}, and cannot carry a color")]
    ColorOnRegularCycle { index: usize, len: usize, r: u32 },
    #[error("cycle {index} has length {len}, divisible by {r}, and must carry a color")]
    MissingColor { index: usize, len: usize, r: u32 },
    #[error("color refers to cycle {0}, which does not exist")]
    NoSuchCycle(usize),
}

/// A permutation of a finite set of positive integers.
///
/// The cycle list is canonical at all times, so derived equality, ordering
/// and hashing are structural.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    cycles: Vec<Vec<Element>>,
}

impl Permutation {
    /// The permutation of the empty set.
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a permutation from cycles in any rotation and any order.
    pub fn from_cycles<I, C>(cycles: I) -> Result<Self, PermError>
    where
        I: IntoIterator<Item = C>,
        C: Into<Vec<Element>>,
    {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for cycle in cycles {
            let cycle: Vec<Element> = cycle.into();
            if cycle.is_empty() {
                return Err(PermError::EmptyCycle);
            }
            let mut local = BTreeSet::new();
            for &e in &cycle {
                if e == 0 {
                    return Err(PermError::ZeroElement);
                }
                if !local.insert(e) {
                    return Err(PermError::RepeatedElement(e));
                }
                if !seen.insert(e) {
                    return Err(PermError::ElementInTwoCycles(e));
                }
            }
            out.push(rotate_to_min(cycle));
        }
        out.sort_unstable_by_key(|c| c[0]);
        Ok(Self { cycles: out })
    }

    /// Identity on `{1, …, n}`.
    pub fn identity(n: u32) -> Self {
        Self {
            cycles: (1..=n).map(|i| vec![i]).collect(),
        }
    }

    /// Identity on an arbitrary ground set.
    pub fn identity_on(ground: &[Element]) -> Result<Self, PermError> {
        Self::from_cycles(ground.iter().map(|&e| vec![e]))
    }

    /// Builds the permutation sending `ground[i]` to `images[i]`.
    ///
    /// `images` must be a rearrangement of `ground`; this is not re-checked.
    pub(crate) fn from_images(ground: &[Element], images: &[Element]) -> Self {
        debug_assert_eq!(ground.len(), images.len());
        let index: HashMap<Element, usize> = ground.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let mut visited = vec![false; ground.len()];
        let mut cycles = Vec::new();
        // ground is sorted, so scanning it in order yields canonical cycles.
        for start in 0..ground.len() {
            if visited[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !visited[i] {
                visited[i] = true;
                cycle.push(ground[i]);
                i = index[&images[i]];
            }
            cycles.push(cycle);
        }
        Self { cycles }
    }

    /// Wraps cycles that are already canonical.
    pub(crate) fn from_canonical(cycles: Vec<Vec<Element>>) -> Self {
        debug_assert!(is_canonical(&cycles), "non-canonical cycles {cycles:?}");
        Self { cycles }
    }

    pub fn cycles(&self) -> &[Vec<Element>] {
        &self.cycles
    }

    pub fn into_cycles(self) -> Vec<Vec<Element>> {
        self.cycles
    }

    /// Number of points moved or fixed, i.e. the size of the ground set.
    pub fn len(&self) -> usize {
        self.cycles.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    pub fn num_cycles(&self) -> usize {
        self.cycles.len()
    }

    /// Sorted ground set.
    pub fn ground_set(&self) -> Vec<Element> {
        let mut g: Vec<Element> = self.cycles.iter().flatten().copied().collect();
        g.sort_unstable();
        g
    }

    /// Smallest element of the ground set.
    pub fn min_element(&self) -> Option<Element> {
        self.cycles.first().map(|c| c[0])
    }

    /// The cycle containing the minimum of the ground set.
    pub fn first_cycle(&self) -> Option<&[Element]> {
        self.cycles.first().map(Vec::as_slice)
    }

    /// Splits off the first cycle, returning it and the remaining permutation.
    pub(crate) fn split_first(mut self) -> Option<(Vec<Element>, Permutation)> {
        if self.cycles.is_empty() {
            return None;
        }
        let first = self.cycles.remove(0);
        Some((first, self))
    }

    /// Puts `cycle` in front of `self`. The cycle must start with an element
    /// smaller than everything in `self` and be disjoint from it.
    pub(crate) fn prepend(mut self, cycle: Vec<Element>) -> Self {
        debug_assert!(self.min_element().is_none_or(|m| cycle[0] < m));
        self.cycles.insert(0, cycle);
        debug_assert!(is_canonical(&self.cycles));
        self
    }

    pub fn contains(&self, e: Element) -> bool {
        self.cycles.iter().any(|c| c.contains(&e))
    }

    /// Image of `e`, or `None` if `e` is outside the ground set.
    pub fn apply(&self, e: Element) -> Option<Element> {
        self.cycles
            .iter()
            .find_map(|c| c.iter().position(|&x| x == e).map(|i| c[(i + 1) % c.len()]))
    }

    /// The map `e ↦ σ(e)` over the ground set.
    pub fn to_map(&self) -> BTreeMap<Element, Element> {
        let mut m = BTreeMap::new();
        for c in &self.cycles {
            for (i, &e) in c.iter().enumerate() {
                m.insert(e, c[(i + 1) % c.len()]);
            }
        }
        m
    }

    /// One-line notation over the sorted ground set.
    pub fn one_line(&self) -> Vec<Element> {
        self.to_map().into_values().collect()
    }

    /// `self` composed with itself `e` times; `power(0)` is the identity on
    /// the ground set.
    pub fn power(&self, e: u64) -> Self {
        let mut cycles = Vec::with_capacity(self.cycles.len());
        for c in &self.cycles {
            let len = c.len() as u64;
            let step = e % len;
            if step == 0 {
                cycles.extend(c.iter().map(|&x| vec![x]));
                continue;
            }
            let g = len.gcd(&step) as usize;
            let sub_len = c.len() / g;
            for start in 0..g {
                let mut sub = Vec::with_capacity(sub_len);
                let mut i = start;
                for _ in 0..sub_len {
                    sub.push(c[i]);
                    i = (i + step as usize) % c.len();
                }
                // `start` is the smallest position in its orbit but not
                // necessarily the smallest element.
                cycles.push(rotate_to_min(sub));
            }
        }
        cycles.sort_unstable_by_key(|c| c[0]);
        Self { cycles }
    }

    /// `self ∘ other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &Self) -> Result<Self, PermError> {
        let a = self.to_map();
        let b = other.to_map();
        if !a.keys().eq(b.keys()) {
            return Err(PermError::GroundSetMismatch);
        }
        let ground: Vec<Element> = b.keys().copied().collect();
        let images: Vec<Element> = b.values().map(|y| a[y]).collect();
        Ok(Self::from_images(&ground, &images))
    }

    pub fn inverse(&self) -> Self {
        let cycles = self
            .cycles
            .iter()
            .map(|c| {
                let mut rev = Vec::with_capacity(c.len());
                rev.push(c[0]);
                rev.extend(c[1..].iter().rev());
                rev
            })
            .collect();
        Self { cycles }
    }

    pub fn cycle_type(&self) -> CycleType {
        CycleType::from_lengths(self.cycles.iter().map(Vec::len))
    }

    /// No cycle length is divisible by `r`.
    pub fn is_regular(&self, r: u32) -> bool {
        self.cycles.iter().all(|c| !is_singular_len(c.len(), r))
    }

    /// Every cycle length is divisible by `r`.
    pub fn is_singular(&self, r: u32) -> bool {
        self.cycles.iter().all(|c| is_singular_len(c.len(), r))
    }

    /// Splits into the part made of `q`-regular cycles and the part made of
    /// `q`-singular cycles.
    pub fn split_parts(&self, q: u32) -> (Permutation, Permutation) {
        let (singular, regular): (Vec<_>, Vec<_>) =
            self.cycles.iter().cloned().partition(|c| is_singular_len(c.len(), q));
        (Self { cycles: regular }, Self { cycles: singular })
    }

    /// Disjoint union of two permutations.
    pub fn union(&self, other: &Self) -> Result<Self, PermError> {
        Self::from_cycles(self.cycles.iter().chain(other.cycles.iter()).cloned())
    }

    /// Renames elements through an order-preserving map.
    pub(crate) fn relabel_monotone(&self, f: impl Fn(Element) -> Element) -> Self {
        let cycles = self.cycles.iter().map(|c| c.iter().map(|&e| f(e)).collect()).collect();
        Self::from_canonical(cycles)
    }
}

pub(crate) fn is_singular_len(len: usize, r: u32) -> bool {
    len.is_multiple_of(r as usize)
}

fn rotate_to_min(mut cycle: Vec<Element>) -> Vec<Element> {
    let pos = cycle.iter().enumerate().min_by_key(|&(_, &e)| e).map_or(0, |(i, _)| i);
    cycle.rotate_left(pos);
    cycle
}

fn is_canonical(cycles: &[Vec<Element>]) -> bool {
    cycles.iter().all(|c| !c.is_empty() && c.iter().all(|&e| e >= c[0])) && cycles.windows(2).all(|w| w[0][0] < w[1][0])
}

/// A permutation whose `r`-singular cycles each carry a color in
/// `1..=r-1`. Regular cycles never carry a color.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EnrichedPermutation {
    base: Permutation,
    r: u32,
    /// Indexed like `base.cycles()`.
    colors: Vec<Option<u32>>,
}

impl EnrichedPermutation {
    /// `colors` is keyed by cycle index in `base`'s canonical order.
    pub fn new(base: Permutation, r: u32, colors: &BTreeMap<usize, u32>) -> Result<Self, PermError> {
        if let Some((&idx, _)) = colors.iter().find(|(&i, _)| i >= base.num_cycles()) {
            return Err(PermError::NoSuchCycle(idx));
        }
        let colors = (0..base.num_cycles()).map(|i| colors.get(&i).copied()).collect();
        Self::from_parts(base, r, colors)
    }

    /// Builds from `(cycle, color)` pairs in any order and rotation; colors
    /// travel with their cycles through canonicalization.
    pub fn from_colored_cycles<I>(r: u32, cycles: I) -> Result<Self, PermError>
    where
        I: IntoIterator<Item = (Vec<Element>, Option<u32>)>,
    {
        let (cycles, colors): (Vec<_>, Vec<_>) = cycles.into_iter().unzip();
        let mut by_min = BTreeMap::new();
        for (c, color) in cycles.iter().zip(&colors) {
            if let Some(&m) = c.iter().min() {
                by_min.insert(m, *color);
            }
        }
        let base = Permutation::from_cycles(cycles)?;
        let colors = base.cycles().iter().map(|c| by_min[&c[0]]).collect();
        Self::from_parts(base, r, colors)
    }

    fn from_parts(base: Permutation, r: u32, colors: Vec<Option<u32>>) -> Result<Self, PermError> {
        if r < 2 {
            return Err(PermError::InvalidModulus(r));
        }
        for (index, (c, color)) in base.cycles().iter().zip(&colors).enumerate() {
            let singular = is_singular_len(c.len(), r);
            match (singular, color) {
                (true, None) => {
                    return Err(PermError::MissingColor { index, len: c.len(), r });
                }
                (false, Some(_)) => {
                    return Err(PermError::ColorOnRegularCycle { index, len: c.len(), r });
                }
                (true, Some(color)) if *color == 0 || *color >= r => {
                    return Err(PermError::ColorOutOfRange {
                        color: *color,
                        max: r - 1,
                    });
                }
                _ => {}
            }
        }
        Ok(Self { base, r, colors })
    }

    /// Trusted constructor for values the bijections build by construction.
    pub(crate) fn from_parts_unchecked(base: Permutation, r: u32, colors: Vec<Option<u32>>) -> Self {
        debug_assert!(Self::from_parts(base.clone(), r, colors.clone()).is_ok());
        Self { base, r, colors }
    }

    /// For `r = 2` there is only one color, so every permutation has exactly
    /// one enrichment.
    pub fn from_plain_r2(base: Permutation) -> Self {
        let colors = base.cycles().iter().map(|c| (c.len() % 2 == 0).then_some(1)).collect();
        Self { base, r: 2, colors }
    }

    pub fn base(&self) -> &Permutation {
        &self.base
    }

    pub fn into_base(self) -> Permutation {
        self.base
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// Color of the cycle at canonical index `index`.
    pub fn color(&self, index: usize) -> Option<u32> {
        self.colors.get(index).copied().flatten()
    }

    pub fn colors(&self) -> &[Option<u32>] {
        &self.colors
    }

    /// Cycles paired with their colors, in canonical order.
    pub fn colored_cycles(&self) -> impl Iterator<Item = (&[Element], Option<u32>)> {
        self.base
            .cycles()
            .iter()
            .map(Vec::as_slice)
            .zip(self.colors.iter().copied())
    }

    /// Number of colored cycles.
    pub fn num_colored(&self) -> usize {
        self.colors.iter().filter(|c| c.is_some()).count()
    }
}

/// Multiset of cycle lengths `1^{k_1} 2^{k_2} ⋯`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CycleType {
    /// length ↦ multiplicity, multiplicities are never zero.
    parts: BTreeMap<u32, u32>,
}

impl CycleType {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_lengths(lengths: impl IntoIterator<Item = usize>) -> Self {
        let mut parts = BTreeMap::new();
        for len in lengths {
            *parts.entry(len as u32).or_insert(0) += 1;
        }
        Self { parts }
    }

    /// From `(length, multiplicity)` pairs; zero multiplicities are dropped
    /// and repeated lengths accumulate. Zero lengths are rejected.
    pub fn from_multiplicities(pairs: impl IntoIterator<Item = (u32, u32)>) -> Option<Self> {
        let mut parts = BTreeMap::new();
        for (len, k) in pairs {
            if len == 0 {
                return None;
            }
            if k > 0 {
                *parts.entry(len).or_insert(0) += k;
            }
        }
        Some(Self { parts })
    }

    /// `|ρ|`, the sum of all lengths.
    pub fn total(&self) -> u64 {
        self.parts.iter().map(|(&l, &k)| u64::from(l) * u64::from(k)).sum()
    }

    pub fn multiplicity(&self, len: u32) -> u32 {
        self.parts.get(&len).copied().unwrap_or(0)
    }

    /// `(length, multiplicity)` pairs by increasing length.
    pub fn parts(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.parts.iter().map(|(&l, &k)| (l, k))
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn num_cycles(&self) -> u64 {
        self.parts.values().map(|&k| u64::from(k)).sum()
    }

    /// Parses `"1^2,4^2"`; a bare length means multiplicity one. Commas and
    /// whitespace both separate parts. `""` and `"∅"` are the empty type.
    pub fn parse(text: &str) -> Option<Self> {
        let text = text.trim();
        if text.is_empty() || text == "∅" {
            return Some(Self::empty());
        }
        let mut pairs = Vec::new();
        for tok in text.split(|c: char| c == ',' || c.is_whitespace()) {
            if tok.is_empty() {
                continue;
            }
            let (len, k) = match tok.split_once('^') {
                Some((l, k)) => (l.parse().ok()?, k.parse().ok()?),
                None => (tok.parse().ok()?, 1),
            };
            pairs.push((len, k));
        }
        Self::from_multiplicities(pairs)
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return f.write_str("∅");
        }
        for (i, (l, k)) in self.parts().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{l}^{k}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(cycles: &[&[Element]]) -> Permutation {
        Permutation::from_cycles(cycles.iter().map(|c| c.to_vec())).unwrap()
    }

    #[test]
    fn canonical_rotation_and_order() {
        let a = p(&[&[5, 6], &[2, 1], &[4, 3]]);
        assert_eq!(a.cycles(), &[vec![1, 2], vec![3, 4], vec![5, 6]]);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(
            Permutation::from_cycles([vec![1, 2, 1]]),
            Err(PermError::RepeatedElement(1))
        );
        assert_eq!(
            Permutation::from_cycles([vec![1, 2], vec![2]]),
            Err(PermError::ElementInTwoCycles(2))
        );
        assert_eq!(Permutation::from_cycles([vec![0]]), Err(PermError::ZeroElement));
        assert_eq!(
            Permutation::from_cycles([Vec::<Element>::new()]),
            Err(PermError::EmptyCycle)
        );
    }

    #[test]
    fn power_examples() {
        let root = p(&[&[1, 5, 2, 6, 3, 7, 4, 8]]);
        assert_eq!(root.power(2), p(&[&[1, 2, 3, 4], &[5, 6, 7, 8]]));
        assert_eq!(root.power(1), root);
        assert_eq!(p(&[&[1, 2, 3]]).power(3), Permutation::identity(3));
        assert_eq!(root.power(0), Permutation::identity(8));
        assert_eq!(Permutation::empty().power(5), Permutation::empty());
    }

    #[test]
    fn power_rotates_subcycles_to_their_minimum() {
        // (3 1 2)^2 = (3 2 1) = (1 3 2)
        let c = p(&[&[3, 1, 2]]);
        assert_eq!(c.power(2), p(&[&[1, 3, 2]]));
        let c = p(&[&[4, 3, 2, 1]]);
        assert_eq!(c.power(2), p(&[&[1, 3], &[2, 4]]));
    }

    #[test]
    fn compose_and_inverse() {
        let a = p(&[&[1, 2, 3], &[4]]);
        let b = p(&[&[1, 4], &[2], &[3]]);
        // a∘b: 1→4→4, 4→1→2, 2→2→3, 3→3→1
        assert_eq!(a.compose(&b).unwrap(), p(&[&[1, 4, 2, 3]]));
        assert_eq!(a.compose(&a.inverse()).unwrap(), Permutation::identity(4));
        assert_eq!(a.compose(&Permutation::identity(3)), Err(PermError::GroundSetMismatch));
    }

    #[test]
    fn cycle_type_examples() {
        let s = p(&[&[1, 2], &[3, 4], &[5, 9, 7, 8], &[6, 10, 11, 13], &[12]]);
        assert_eq!(
            s.cycle_type(),
            CycleType::from_multiplicities([(1, 1), (2, 2), (4, 2)]).unwrap()
        );
        assert!(Permutation::empty().cycle_type().is_empty());
        assert_eq!(
            Permutation::identity(4).cycle_type(),
            CycleType::from_multiplicities([(1, 4)]).unwrap()
        );
    }

    #[test]
    fn split_parts_examples() {
        let s = p(&[&[1, 2], &[3, 4], &[5, 9, 7, 8], &[6, 10, 11, 13], &[12]]);
        let (reg, sing) = s.split_parts(2);
        assert_eq!(reg, p(&[&[12]]));
        assert_eq!(sing, p(&[&[1, 2], &[3, 4], &[5, 9, 7, 8], &[6, 10, 11, 13]]));
        let (reg, sing) = Permutation::identity(5).split_parts(2);
        assert_eq!((reg, sing), (Permutation::identity(5), Permutation::empty()));
        let (reg, sing) = p(&[&[1, 2, 3]]).split_parts(3);
        assert_eq!((reg, sing), (Permutation::empty(), p(&[&[1, 2, 3]])));
    }

    #[test]
    fn enriched_validation() {
        let base = p(&[&[1, 2, 4], &[3], &[5, 6]]);
        let ok = EnrichedPermutation::new(base.clone(), 3, &BTreeMap::from([(0, 2)])).unwrap();
        assert_eq!(ok.color(0), Some(2));
        assert_eq!(ok.num_colored(), 1);
        assert!(matches!(
            EnrichedPermutation::new(base.clone(), 3, &BTreeMap::from([(0, 3)])),
            Err(PermError::ColorOutOfRange { color: 3, max: 2 })
        ));
        assert!(matches!(
            EnrichedPermutation::new(base.clone(), 3, &BTreeMap::from([(0, 1), (2, 1)])),
            Err(PermError::ColorOnRegularCycle { index: 2, .. })
        ));
        assert!(matches!(
            EnrichedPermutation::new(base.clone(), 3, &BTreeMap::new()),
            Err(PermError::MissingColor { index: 0, .. })
        ));
        assert!(matches!(
            EnrichedPermutation::new(base, 1, &BTreeMap::new()),
            Err(PermError::InvalidModulus(1))
        ));
    }

    #[test]
    fn colors_follow_cycles_through_canonicalization() {
        let e =
            EnrichedPermutation::from_colored_cycles(3, [(vec![6, 5, 3], Some(1)), (vec![4, 1, 2], Some(2))]).unwrap();
        assert_eq!(e.base().cycles(), &[vec![1, 2, 4], vec![3, 6, 5]]);
        assert_eq!(e.colors(), &[Some(2), Some(1)]);
    }

    #[test]
    fn r2_enrichment_is_unique() {
        let base = p(&[&[1, 2], &[3], &[4, 5, 6, 7]]);
        let e = EnrichedPermutation::from_plain_r2(base.clone());
        assert_eq!(e.colors(), &[Some(1), None, Some(1)]);
        assert_eq!(e.into_base(), base);
    }

    #[test]
    fn cycle_type_text() {
        let t = CycleType::parse("1^2,4^2").unwrap();
        assert_eq!(t.total(), 10);
        assert_eq!(t.to_string(), "1^2,4^2");
        assert_eq!(
            CycleType::parse("2 2 4^1"),
            CycleType::from_multiplicities([(2, 2), (4, 1)])
        );
        assert_eq!(CycleType::parse(""), Some(CycleType::empty()));
        assert_eq!(CycleType::parse("∅"), Some(CycleType::empty()));
        assert_eq!(CycleType::parse("0^1"), None);
        assert_eq!(CycleType::parse("a^1"), None);
    }
}
