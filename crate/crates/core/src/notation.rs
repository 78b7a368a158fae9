//! Text and JSON forms of permutations.
//!
//! Canonical text is byte-exact: cycles are written `(a b c)`, a colored
//! cycle gets a `_c` suffix, cycles are separated by one space and the empty
//! permutation is the empty string. The reader is more forgiving about
//! whitespace: any run of ASCII whitespace (or none) may separate cycles, so
//! `(1 2)(3 4)` is accepted as well as `(1 2) (3 4)`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perm::{Element, EnrichedPermutation, PermError, Permutation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: &'static str },
    #[error("number at byte {pos} does not fit in 32 bits")]
    Overflow { pos: usize },
    #[error("cycle {index} carries a color but no r was given")]
    UnexpectedColor { index: usize },
    #[error(transparent)]
    Invalid(#[from] PermError),
    #[error("invalid JSON: {0}")]
    Json(String),
}

/// A parsed value: enriched when an `r` was supplied, plain otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Parsed {
    Plain(Permutation),
    Enriched(EnrichedPermutation),
}

impl Parsed {
    pub fn base(&self) -> &Permutation {
        match self {
            Parsed::Plain(p) => p,
            Parsed::Enriched(e) => e.base(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let doc = match self {
            Parsed::Plain(p) => PermutationJson {
                cycles: p.cycles().to_vec(),
                colors: None,
                r: None,
            },
            Parsed::Enriched(e) => PermutationJson {
                cycles: e.base().cycles().to_vec(),
                colors: Some(
                    e.colors()
                        .iter()
                        .enumerate()
                        .filter_map(|(i, c)| c.map(|c| (i, c)))
                        .collect(),
                ),
                r: Some(e.r()),
            },
        };
        serde_json::to_value(doc).expect("plain data serializes")
    }

    /// Reads `{"cycles": [[1,2,4],[3]], "colors": {"0": 2}, "r": 3}`.
    /// Color keys index into `cycles` as given, before canonicalization.
    pub fn from_json(text: &str) -> Result<Self, ParseError> {
        let doc: PermutationJson = serde_json::from_str(text).map_err(|e| ParseError::Json(e.to_string()))?;
        match (doc.r, doc.colors) {
            (None, None) => Ok(Parsed::Plain(Permutation::from_cycles(doc.cycles)?)),
            (None, Some(colors)) => match colors.keys().next() {
                Some(&index) => Err(ParseError::UnexpectedColor { index }),
                None => Ok(Parsed::Plain(Permutation::from_cycles(doc.cycles)?)),
            },
            (Some(r), colors) => {
                let colors = colors.unwrap_or_default();
                if let Some(&bad) = colors.keys().find(|&&i| i >= doc.cycles.len()) {
                    return Err(PermError::NoSuchCycle(bad).into());
                }
                let pairs = doc
                    .cycles
                    .into_iter()
                    .enumerate()
                    .map(|(i, c)| (c, colors.get(&i).copied()));
                Ok(Parsed::Enriched(EnrichedPermutation::from_colored_cycles(r, pairs)?))
            }
        }
    }
}

impl fmt::Display for Parsed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Parsed::Plain(p) => p.fmt(f),
            Parsed::Enriched(e) => e.fmt(f),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PermutationJson {
    cycles: Vec<Vec<Element>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    colors: Option<BTreeMap<usize, u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    r: Option<u32>,
}

/// Parses cycle notation. With `r` the result is enriched and every
/// `r`-singular cycle must carry a subscript; without `r` subscripts are
/// rejected.
pub fn parse(text: &str, r: Option<u32>) -> Result<Parsed, ParseError> {
    let raw = parse_raw(text)?;
    match r {
        None => {
            if let Some(index) = raw.iter().position(|(_, c)| c.is_some()) {
                return Err(ParseError::UnexpectedColor { index });
            }
            Ok(Parsed::Plain(Permutation::from_cycles(
                raw.into_iter().map(|(c, _)| c),
            )?))
        }
        Some(r) => Ok(Parsed::Enriched(EnrichedPermutation::from_colored_cycles(r, raw)?)),
    }
}

pub fn parse_permutation(text: &str) -> Result<Permutation, ParseError> {
    match parse(text, None)? {
        Parsed::Plain(p) => Ok(p),
        Parsed::Enriched(_) => unreachable!(),
    }
}

pub fn parse_enriched(text: &str, r: u32) -> Result<EnrichedPermutation, ParseError> {
    match parse(text, Some(r))? {
        Parsed::Enriched(e) => Ok(e),
        Parsed::Plain(_) => unreachable!(),
    }
}

type RawCycles = Vec<(Vec<Element>, Option<u32>)>;

/// Tokenizes without any semantic checks.
fn parse_raw(text: &str) -> Result<RawCycles, ParseError> {
    let bytes = text.as_bytes();
    let mut pos = 0;
    let mut out = Vec::new();
    let skip_ws = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
    };
    loop {
        skip_ws(&mut pos);
        if pos == bytes.len() {
            return Ok(out);
        }
        if bytes[pos] != b'(' {
            return Err(ParseError::Syntax {
                pos,
                msg: "expected '('",
            });
        }
        pos += 1;
        let mut cycle = Vec::new();
        loop {
            let before = pos;
            skip_ws(&mut pos);
            match bytes.get(pos) {
                Some(b')') => {
                    if cycle.is_empty() {
                        return Err(ParseError::Syntax {
                            pos,
                            msg: "empty cycle",
                        });
                    }
                    pos += 1;
                    break;
                }
                Some(b) if b.is_ascii_digit() => {
                    if !cycle.is_empty() && before == pos {
                        return Err(ParseError::Syntax {
                            pos,
                            msg: "expected whitespace",
                        });
                    }
                    cycle.push(read_number(bytes, &mut pos)?);
                }
                Some(_) => {
                    return Err(ParseError::Syntax {
                        pos,
                        msg: "expected a number or ')'",
                    })
                }
                None => {
                    return Err(ParseError::Syntax {
                        pos,
                        msg: "unterminated cycle",
                    })
                }
            }
        }
        let color = if bytes.get(pos) == Some(&b'_') {
            pos += 1;
            if !bytes.get(pos).is_some_and(u8::is_ascii_digit) {
                return Err(ParseError::Syntax {
                    pos,
                    msg: "expected a color after '_'",
                });
            }
            Some(read_number(bytes, &mut pos)?)
        } else {
            None
        };
        out.push((cycle, color));
    }
}

fn read_number(bytes: &[u8], pos: &mut usize) -> Result<u32, ParseError> {
    let start = *pos;
    let mut value: u32 = 0;
    while let Some(&b) = bytes.get(*pos).filter(|b| b.is_ascii_digit()) {
        value = value
            .checked_mul(10)
            .and_then(|v| v.checked_add(u32::from(b - b'0')))
            .ok_or(ParseError::Overflow { pos: start })?;
        *pos += 1;
    }
    Ok(value)
}

fn write_cycle(f: &mut fmt::Formatter<'_>, cycle: &[Element]) -> fmt::Result {
    f.write_str("(")?;
    for (i, e) in cycle.iter().enumerate() {
        if i > 0 {
            f.write_str(" ")?;
        }
        write!(f, "{e}")?;
    }
    f.write_str(")")
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.cycles().iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write_cycle(f, c)?;
        }
        Ok(())
    }
}

impl fmt::Display for EnrichedPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (c, color)) in self.colored_cycles().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write_cycle(f, c)?;
            if let Some(color) = color {
                write!(f, "_{color}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enriched_example() {
        let e = parse_enriched("(1 2 4)_2 (3) (5 6)", 3).unwrap();
        assert_eq!(e.base().cycles(), &[vec![1, 2, 4], vec![3], vec![5, 6]]);
        assert_eq!(e.colors(), &[Some(2), None, None]);
        assert_eq!(e.to_string(), "(1 2 4)_2 (3) (5 6)");
    }

    #[test]
    fn empty_and_rotation() {
        assert_eq!(parse_permutation("").unwrap(), Permutation::empty());
        assert_eq!(parse_permutation("  ").unwrap(), Permutation::empty());
        assert_eq!(parse_permutation("(2 1)").unwrap().to_string(), "(1 2)");
        assert_eq!(Permutation::empty().to_string(), "");
        assert_eq!(Permutation::identity(2).to_string(), "(1) (2)");
    }

    #[test]
    fn lenient_separators() {
        let a = parse_permutation("(1 2 3 4)(5 6 7 8)").unwrap();
        let b = parse_permutation("(5 6 7 8) ( 1  2 3 4 )").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "(1 2 3 4) (5 6 7 8)");
    }

    #[test]
    fn semantic_errors() {
        assert_eq!(
            parse_permutation("(1 2 1)"),
            Err(ParseError::Invalid(PermError::RepeatedElement(1)))
        );
        assert_eq!(
            parse_permutation("(1 2) (2 3)"),
            Err(ParseError::Invalid(PermError::ElementInTwoCycles(2)))
        );
        assert!(matches!(
            parse_enriched("(1 2 4)_3 (5)", 3),
            Err(ParseError::Invalid(PermError::ColorOutOfRange { color: 3, max: 2 }))
        ));
        assert!(matches!(
            parse_enriched("(1 2 4)_0", 3),
            Err(ParseError::Invalid(PermError::ColorOutOfRange { color: 0, .. }))
        ));
        assert!(matches!(
            parse_enriched("(1 2)_1", 3),
            Err(ParseError::Invalid(PermError::ColorOnRegularCycle { .. }))
        ));
        assert!(matches!(
            parse_enriched("(1 2 3)", 3),
            Err(ParseError::Invalid(PermError::MissingColor { .. }))
        ));
        assert_eq!(
            parse_permutation("(1 2)_1"),
            Err(ParseError::UnexpectedColor { index: 0 })
        );
        assert_eq!(
            parse_permutation("(0)"),
            Err(ParseError::Invalid(PermError::ZeroElement))
        );
    }

    #[test]
    fn syntax_errors() {
        for bad in [
            "(", "()", "(1 2", "1 2", "(1,2)", "(1 2)_", "(1 2)_x", "(1 2))", "(1(2))",
        ] {
            assert!(
                matches!(parse_permutation(bad), Err(ParseError::Syntax { .. })),
                "{bad:?} should be a syntax error"
            );
        }
        assert_eq!(parse_permutation("(4294967296)"), Err(ParseError::Overflow { pos: 1 }));
    }

    #[test]
    fn json_forms() {
        let e = Parsed::Enriched(parse_enriched("(1 2 4)_2 (3) (5 6)", 3).unwrap());
        let v = e.to_json();
        assert_eq!(
            v.to_string(),
            r#"{"colors":{"0":2},"cycles":[[1,2,4],[3],[5,6]],"r":3}"#
        );
        assert_eq!(Parsed::from_json(&v.to_string()).unwrap(), e);

        // Keys index the input list, not the canonical order.
        let back = Parsed::from_json(r#"{"cycles": [[6,5],[3],[4,1,2]], "colors": {"2": 2}, "r": 3}"#).unwrap();
        assert_eq!(back, e);

        let plain = Parsed::from_json(r#"{"cycles": [[2,1]]}"#).unwrap();
        assert_eq!(plain.to_string(), "(1 2)");
        assert_eq!(plain.to_json().to_string(), r#"{"cycles":[[1,2]]}"#);

        assert!(matches!(
            Parsed::from_json(r#"{"cycles": [[1]], "colors": {"0": 1}}"#),
            Err(ParseError::UnexpectedColor { index: 0 })
        ));
        assert!(matches!(
            Parsed::from_json(r#"{"cycles": [[1,2,3]], "colors": {"4": 1}, "r": 3}"#),
            Err(ParseError::Invalid(PermError::NoSuchCycle(4)))
        ));
        assert!(matches!(Parsed::from_json("[1]"), Err(ParseError::Json(_))));
    }
}
