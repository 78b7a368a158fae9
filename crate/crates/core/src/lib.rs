//! Bijections between `r`-regular permutations and enriched `r`-cycle
//! permutations, `r`-th root criteria, and exact counts of the families
//! involved.

pub mod bijections;
pub mod counting;
pub mod family;
pub mod notation;
pub mod oeis;
pub mod perm;
pub mod roots;
pub mod verify;

pub use family::{classify, enumerate, Family, FamilyError, Permutations};
pub use notation::{parse, parse_enriched, parse_permutation, ParseError, Parsed};
pub use perm::{CycleType, Element, EnrichedPermutation, PermError, Permutation};
