//! Randomized invariants beyond the exhaustive ranges. These complement the
//! verification suites and are not part of the acceptance gate.

use permroot::bijections;
use permroot::notation::{parse, parse_permutation, Parsed};
use permroot::perm::{Element, Permutation};
use proptest::prelude::*;

/// Cycles of the permutation `i -> image[i - 1]` of `{1, …, n}`.
fn from_one_line(image: &[Element]) -> Permutation {
    let mut seen = vec![false; image.len()];
    let mut cycles = Vec::new();
    for start in 0..image.len() {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            cycle.push(i as Element + 1);
            i = image[i] as usize - 1;
        }
        cycles.push(cycle);
    }
    Permutation::from_cycles(cycles).expect("one-line images are permutations")
}

fn permutation(max_n: u32) -> impl Strategy<Value = Permutation> {
    (0..=max_n)
        .prop_flat_map(|n| Just((1..=n).collect::<Vec<Element>>()).prop_shuffle())
        .prop_map(|image| from_one_line(&image))
}

/// Writes the cycles in a scrambled but equivalent way: each cycle rotated
/// and the cycle order reversed.
fn scrambled_text(p: &Permutation, rotation: usize) -> String {
    p.cycles()
        .iter()
        .rev()
        .map(|c| {
            let k = rotation % c.len();
            let items: Vec<String> = c[k..].iter().chain(&c[..k]).map(|e| e.to_string()).collect();
            format!("({})", items.join(" "))
        })
        .collect::<Vec<_>>()
        .join("")
}

proptest! {
    #[test]
    fn parse_inverts_format(p in permutation(30)) {
        let text = p.to_string();
        prop_assert_eq!(parse_permutation(&text).unwrap(), p.clone());
        let json = Parsed::Plain(p.clone()).to_json().to_string();
        prop_assert_eq!(Parsed::from_json(&json).unwrap(), Parsed::Plain(p));
    }

    #[test]
    fn format_normalizes_idempotently(p in permutation(20), rotation in 0usize..7) {
        let once = parse_permutation(&scrambled_text(&p, rotation)).unwrap().to_string();
        prop_assert_eq!(&once, &p.to_string());
        prop_assert_eq!(parse_permutation(&once).unwrap().to_string(), once);
    }

    #[test]
    fn powers_add(p in permutation(10), e1 in 0u64..=8, e2 in 0u64..=8) {
        let lhs = p.power(e1 + e2);
        let rhs = p.power(e1).compose(&p.power(e2)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn split_parts_recombine(p in permutation(20), q in 2u32..=6) {
        let (regular, singular) = p.split_parts(q);
        prop_assert!(regular.is_regular(q));
        prop_assert!(singular.is_singular(q));
        prop_assert_eq!(regular.num_cycles() + singular.num_cycles(), p.num_cycles());
        prop_assert_eq!(regular.union(&singular).unwrap(), p);
    }

    #[test]
    fn phi_star_round_trips_on_large_regular_inputs(
        (r, p) in (2u32..=4)
            .prop_flat_map(|r| (Just(r), 1u32..=6))
            .prop_flat_map(|(r, m)| (Just(r), Just((1..=r * m).collect::<Vec<Element>>()).prop_shuffle()))
            .prop_map(|(r, image)| (r, from_one_line(&image)))
            .prop_filter("r-regular", |(r, p)| p.is_regular(*r))
    ) {
        let tau = bijections::phi_star(&p, r).unwrap();
        prop_assert!(tau.base().is_singular(r));
        let text = tau.to_string();
        let reparsed = match parse(&text, Some(r)).unwrap() {
            Parsed::Enriched(t) => t,
            Parsed::Plain(_) => unreachable!(),
        };
        prop_assert_eq!(bijections::phi_star_inv(&reparsed).unwrap(), p);
    }
}
