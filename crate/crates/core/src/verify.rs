//! Named, rerunnable verification suites.
//!
//! Each suite checks one or more properties over a parameter grid and
//! returns one [`VerificationReport`] per property. Reports are
//! deterministic: instances are checked in a fixed order (in parallel when
//! asked, merged back in that order) and the first failure is the one
//! reported. Counterexamples start with the offending permutation in cycle
//! notation, so they can be pasted straight into the command line tool.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::path::Path;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::bijections;
use crate::counting::{self, CountError, FirstParity, Method};
use crate::family::{self, Family, FamilyError, Permutations, DEFAULT_ENUMERATION_BOUND};
use crate::notation::{self, Parsed};
use crate::oeis::{self, OeisClient, OeisError, OeisId, Source};
use crate::perm::{CycleType, Element, EnrichedPermutation, Permutation};
use crate::roots::{self, RootQuery};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// Outcome of checking one property over a range of instances.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub property_id: String,
    pub range: Value,
    pub status: Status,
    pub counterexample: Option<String>,
    pub counts_checked: u64,
    /// Not serialized, so reports of identical runs are byte-identical.
    #[serde(skip)]
    pub wall_time: Duration,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
        };
        write!(
            f,
            "{status} {} (checked {}, {:.2?}) range {}",
            self.property_id, self.counts_checked, self.wall_time, self.range
        )?;
        if let Some(c) = &self.counterexample {
            write!(f, "\n  counterexample: {c}")?;
        }
        Ok(())
    }
}

/// Running count of checks and the first failure seen.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Tally {
    checked: u64,
    counterexample: Option<String>,
}

impl Tally {
    /// Records one checked instance.
    pub fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        self.require(ok, describe);
    }

    /// Records a failure without counting an instance, for whole-range
    /// conditions such as "the image has the expected size".
    pub fn require(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        if !ok && self.counterexample.is_none() {
            self.counterexample = Some(describe());
        }
    }

    /// Appends `later`; the earlier counterexample wins.
    pub fn merge(&mut self, later: Tally) {
        self.checked += later.checked;
        if self.counterexample.is_none() {
            self.counterexample = later.counterexample;
        }
    }

    pub fn checked(&self) -> u64 {
        self.checked
    }

    /// A report that fails when a counterexample was recorded or nothing
    /// was checked at all.
    pub fn into_report(self, property_id: impl Into<String>, range: Value, wall_time: Duration) -> VerificationReport {
        let counterexample = match (self.counterexample, self.checked) {
            (Some(c), _) => Some(c),
            (None, 0) => Some("no instances in range".to_owned()),
            (None, _) => None,
        };
        VerificationReport {
            property_id: property_id.into(),
            range,
            status: if counterexample.is_some() {
                Status::Fail
            } else {
                Status::Pass
            },
            counterexample,
            counts_checked: self.checked,
            wall_time,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
    #[error("suite {suite} takes no parameter {key:?}")]
    UnknownParameter { suite: String, key: String },
    #[error("bad parameter {key:?}: {msg}")]
    BadParameter { key: String, msg: String },
    #[error(transparent)]
    Count(#[from] CountError),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Oeis(#[from] OeisError),
    #[error("could not start worker threads: {0}")]
    Threads(String),
}

/// Named lists of integer parameters, e.g. `r = [2, 3, 4]`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Grid(BTreeMap<String, Vec<u32>>);

impl Grid {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, key: &str, values: impl IntoIterator<Item = u32>) -> Self {
        self.set(key, values);
        self
    }

    pub fn set(&mut self, key: &str, values: impl IntoIterator<Item = u32>) {
        self.0.insert(key.to_owned(), values.into_iter().collect());
    }

    pub fn get(&self, key: &str) -> Option<&[u32]> {
        self.0.get(key).map(Vec::as_slice)
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.0.keys().map(String::as_str)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Parses `key=values` where values is a comma-separated list of
    /// integers or inclusive ranges `a..b`, e.g. `n=1..8` or `r=2,3,9`.
    pub fn set_assignment(&mut self, text: &str) -> Result<(), VerifyError> {
        let (key, values) = text.split_once('=').ok_or_else(|| VerifyError::BadParameter {
            key: text.to_owned(),
            msg: "expected key=values".to_owned(),
        })?;
        let values = parse_values(values).map_err(|msg| VerifyError::BadParameter {
            key: key.to_owned(),
            msg,
        })?;
        self.set(key.trim(), values);
        Ok(())
    }

    fn or(&self, key: &str, default: impl IntoIterator<Item = u32>) -> Vec<u32> {
        match self.get(key) {
            Some(v) => v.to_vec(),
            None => default.into_iter().collect(),
        }
    }
}

/// Parses `2,3,5..7` into `[2, 3, 5, 6, 7]`.
pub fn parse_values(text: &str) -> Result<Vec<u32>, String> {
    let mut out = Vec::new();
    for item in text.split(',').map(str::trim) {
        let num = |s: &str| {
            s.trim()
                .parse::<u32>()
                .map_err(|_| format!("{s:?} is not a non-negative integer"))
        };
        match item.split_once("..") {
            Some((a, b)) => {
                let (a, b) = (num(a)?, num(b.trim_start_matches('='))?);
                if a > b {
                    return Err(format!("empty range {item}"));
                }
                out.extend(a..=b);
            }
            None => out.push(num(item)?),
        }
    }
    Ok(out)
}

/// A registered suite: its id, the properties it reports on, and the grid
/// keys it accepts.
#[derive(Debug, Clone, Copy)]
pub struct SuiteInfo {
    pub id: &'static str,
    pub properties: &'static [&'static str],
    pub params: &'static [&'static str],
    pub description: &'static str,
}

pub const SUITES: &[SuiteInfo] = &[
    SuiteInfo {
        id: "perm-core",
        properties: &[
            "perm.parse-format",
            "perm.split-parts",
            "perm.family-partition",
            "perm.power-additivity",
        ],
        params: &["n", "r", "power_n"],
        description: "notation round trips, regular/singular split, family streams, powers",
    },
    SuiteInfo {
        id: "round-trips",
        properties: &[
            "bij.delta-roundtrip",
            "bij.phi-alpha-roundtrip",
            "bij.lambda-roundtrip",
            "bij.phi-star-roundtrip",
        ],
        params: &["r", "size"],
        description: "every map composed with its inverse, on all of S_size",
    },
    SuiteInfo {
        id: "phi-bijection",
        properties: &["bij.phi-star-bijective", "bij.length-color-law"],
        params: &["r", "n"],
        description: "Reg_r(rn) to enriched Cyc_r(rn) is a bijection obeying the length/color law",
    },
    SuiteInfo {
        id: "odd-even",
        properties: &["bij.odd-first-phi", "bij.odd-to-even-roundtrip"],
        params: &["size"],
        description: "phi between odd/even first-cycle classes for r = 2",
    },
    SuiteInfo {
        id: "psi-bijection",
        properties: &["bij.psi-bijection"],
        params: &["r", "n"],
        description: "Reg_r(n) x [n+1] to Reg_r(n+1)",
    },
    SuiteInfo {
        id: "roots",
        properties: &[
            "roots.oracle-equivalence",
            "roots.prime-power-consistency",
            "roots.witness-soundness",
            "roots.regular-inclusion",
        ],
        params: &["r", "n"],
        description: "root criteria against brute force over S_n",
    },
    SuiteInfo {
        id: "counting",
        properties: &["count.triple-agreement", "count.closed-forms"],
        params: &["r", "n", "r_max", "n_max"],
        description: "formula, recurrence and enumeration agree; closed forms match enumeration",
    },
    SuiteInfo {
        id: "bmw-strong",
        properties: &["count.cyc-le-reg"],
        params: &["r", "n"],
        description: "|Cyc_r(n)| <= |Reg_r(n)|, equal exactly when r = 2 and n is even",
    },
    SuiteInfo {
        id: "cyc-square",
        properties: &["count.cyc-square-below-reg"],
        params: &["r", "m"],
        description: "|Cyc_{r^2}(mr^2)| < |Reg_r(mr^2)|",
    },
    SuiteInfo {
        id: "cyc4-reg2",
        properties: &["count.double-cyc4-below-reg2"],
        params: &["m"],
        description: "2|Cyc_4(4m)| < |Reg_2(4m)| for m >= 4, ratio 33/16 at m = 4",
    },
    SuiteInfo {
        id: "prime-power-bounds",
        properties: &[
            "count.cyc-qr-merge-bound",
            "count.reg-over-cyc-qr-bound",
            "count.roots-over-cyc-qr-bound",
        ],
        params: &[],
        description: "lower bounds against |Cyc_{q,r}(mqr)| on small grids",
    },
    SuiteInfo {
        id: "singular-type",
        properties: &["count.singular-type-ratio"],
        params: &["q", "n"],
        description: "n|S_{rho,q}(n)| >= |S_{rho,q}(n+1)| when q | n+1, equal iff rho is empty",
    },
    SuiteInfo {
        id: "step-cases",
        properties: &["prob.step-cases"],
        params: &["r", "n"],
        description: "p_r(n) against p_r(n+1) by residue of n+1, with exact equality sets",
    },
    SuiteInfo {
        id: "monotone",
        properties: &["prob.monotone", "prob.non-prime-power-example"],
        params: &["r", "n"],
        description: "p_r(n) >= p_r(n+1) for prime powers; p_6(4) < p_6(5)",
    },
    SuiteInfo {
        id: "tables",
        properties: &["prob.tables"],
        params: &[],
        description: "published tables of p_r(n), r in {2,3,4,5,8,9}, n <= 12",
    },
    SuiteInfo {
        id: "oeis",
        properties: &["oeis.A247005", "oeis.A001818"],
        params: &[],
        description: "vendored OEIS snapshots against computed counts",
    },
];

/// Id of the suite that runs every registered suite with default bounds.
pub const ALL_SUITES: &str = "all";

pub fn suite_info(id: &str) -> Option<&'static SuiteInfo> {
    SUITES.iter().find(|s| s.id == id)
}

/// Runs a suite single-threaded.
pub fn run_suite(id: &str, grid: &Grid) -> Result<Vec<VerificationReport>, VerifyError> {
    run_suite_with_jobs(id, grid, 1)
}

/// Runs a suite, spreading instances over `jobs` threads. The reports are
/// identical for every value of `jobs`.
pub fn run_suite_with_jobs(id: &str, grid: &Grid, jobs: usize) -> Result<Vec<VerificationReport>, VerifyError> {
    let pool = if jobs > 1 {
        Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build()
                .map_err(|e| VerifyError::Threads(e.to_string()))?,
        )
    } else {
        None
    };
    let ctx = Ctx { pool };
    if id == ALL_SUITES {
        if let Some(key) = grid.keys().next() {
            return Err(VerifyError::UnknownParameter {
                suite: id.to_owned(),
                key: key.to_owned(),
            });
        }
        let mut out = Vec::new();
        for suite in SUITES {
            out.extend(dispatch(&ctx, suite.id, grid)?);
        }
        return Ok(out);
    }
    let info = suite_info(id).ok_or_else(|| VerifyError::UnknownSuite(id.to_owned()))?;
    if let Some(key) = grid.keys().find(|k| !info.params.contains(k)) {
        return Err(VerifyError::UnknownParameter {
            suite: id.to_owned(),
            key: key.to_owned(),
        });
    }
    dispatch(&ctx, id, grid)
}

fn dispatch(ctx: &Ctx, id: &str, grid: &Grid) -> Result<Vec<VerificationReport>, VerifyError> {
    match id {
        "perm-core" => perm_core(ctx, grid),
        "round-trips" => round_trips(ctx, grid),
        "phi-bijection" => phi_bijection(ctx, grid),
        "odd-even" => odd_even(ctx, grid),
        "psi-bijection" => psi_bijection(ctx, grid),
        "roots" => roots_suite(ctx, grid),
        "counting" => counting_suite(ctx, grid),
        "bmw-strong" => cyc_le_reg_suite(grid),
        "cyc-square" => cyc_square_suite(grid),
        "cyc4-reg2" => cyc4_reg2(grid),
        "prime-power-bounds" => prime_power_bounds(),
        "singular-type" => singular_type(ctx, grid),
        "step-cases" => step_cases(grid),
        "monotone" => monotone(grid),
        "tables" => tables(),
        "oeis" => oeis_suite(),
        other => Err(VerifyError::UnknownSuite(other.to_owned())),
    }
}

struct Ctx {
    pool: Option<rayon::ThreadPool>,
}

impl Ctx {
    /// Applies `f` to every item, in parallel when a pool is configured,
    /// returning results in item order.
    fn map<I: Sync, T: Send>(&self, items: &[I], f: impl Fn(&I) -> T + Sync + Send) -> Vec<T> {
        match &self.pool {
            Some(pool) => pool.install(|| items.par_iter().map(&f).collect()),
            None => items.iter().map(f).collect(),
        }
    }
}

/// Merges per-instance tallies, `K` properties at a time, in order.
fn merge_all<const K: usize>(parts: Vec<[Tally; K]>) -> [Tally; K] {
    let mut acc: [Tally; K] = std::array::from_fn(|_| Tally::default());
    for part in parts {
        for (a, t) in acc.iter_mut().zip(part) {
            a.merge(t);
        }
    }
    acc
}

/// Turns the `K` tallies into reports named after the suite's properties.
fn reports<const K: usize>(suite: &str, tallies: [Tally; K], range: Value, start: Instant) -> Vec<VerificationReport> {
    let info = suite_info(suite).expect("registered suite");
    debug_assert_eq!(info.properties.len(), K);
    let elapsed = start.elapsed();
    tallies
        .into_iter()
        .zip(info.properties)
        .map(|(t, id)| t.into_report(*id, range.clone(), elapsed))
        .collect()
}

fn ground(n: u32) -> Vec<Element> {
    (1..=n).collect()
}

fn factorial_u64(n: u32) -> u64 {
    (1..=u64::from(n)).product()
}

/// The `k`-th permutation of `[n]` in lexicographic order.
fn unrank(n: u32, mut k: u64) -> Permutation {
    let mut pool = ground(n);
    let mut images = Vec::with_capacity(n as usize);
    for i in (0..n).rev() {
        let block = factorial_u64(i);
        images.push(pool.remove((k / block) as usize));
        k %= block;
    }
    Permutation::from_images(&ground(n), &images)
}

/// `σ` written with every cycle rotated one step and the cycles in reverse
/// order, with no separators: a valid but non-canonical spelling.
fn scrambled(p: &Permutation) -> String {
    p.cycles()
        .iter()
        .rev()
        .map(|c| {
            let mut c = c.clone();
            c.rotate_left(1);
            let body: Vec<String> = c.iter().map(u32::to_string).collect();
            format!("({})", body.join(" "))
        })
        .collect()
}

/// Colors each `r`-singular cycle of `p` with `1 + (index mod (r − 1))`.
fn color_singular(p: &Permutation, r: u32) -> EnrichedPermutation {
    let colors: BTreeMap<usize, u32> = p
        .cycles()
        .iter()
        .enumerate()
        .filter(|(_, c)| c.len() % r as usize == 0)
        .map(|(i, _)| (i, 1 + i as u32 % (r - 1)))
        .collect();
    EnrichedPermutation::new(p.clone(), r, &colors).expect("colors sit on singular cycles")
}

fn perm_core(ctx: &Ctx, grid: &Grid) -> Result<Vec<VerificationReport>, VerifyError> {
    let start = Instant::now();
    let ns = grid.or("n", 0..=7);
    let rs = grid.or("r", [2, 3, 4]);
    let power_ns = grid.or("power_n", 1..=10);
    check_moduli(&rs)?;

    let per_n = ctx.map(&ns, |&n| {
        let mut t: [Tally; 3] = Default::default();
        let [parse, split, _] = &mut t;
        for p in Permutations::of_size(n) {
            let text = p.to_string();
            let ok = notation::parse_permutation(&text).as_ref() == Ok(&p)
                && notation::parse_permutation(&scrambled(&p))
                    .map(|q| q.to_string())
                    .as_deref()
                    == Ok(text.as_str())
                && Parsed::from_json(&Parsed::Plain(p.clone()).to_json().to_string()) == Ok(Parsed::Plain(p.clone()));
            let enriched_ok = rs.iter().all(|&r| {
                let e = color_singular(&p, r);
                let parsed = Parsed::Enriched(e.clone());
                notation::parse_enriched(&e.to_string(), r).as_ref() == Ok(&e)
                    && Parsed::from_json(&parsed.to_json().to_string()) == Ok(parsed)
            });
            parse.check(ok && enriched_ok, || format!("{p} ; parse/format round trip differs"));
            for &q in &rs {
                let (reg, sing) = p.split_parts(q);
                let ok = reg.is_regular(q)
                    && sing.cycles().iter().all(|c| c.len() % q as usize == 0)
                    && reg.num_cycles() + sing.num_cycles() == p.num_cycles()
                    && reg.union(&sing).as_ref() == Ok(&p);
                split.check(ok, || format!("{p} ; q={q} ; split parts do not recombine"));
            }
        }
        let family = rs
            .iter()
            .map(|&r| family_partition(n, r))
            .fold(Tally::default(), |mut a, b| {
                a.merge(b);
                a
            });
        t[2] = family;
        t
    });
    let [parse, split, family] = merge_all(per_n);

    let power_parts = ctx.map(&power_ns, |&n| {
        let mut t = Tally::default();
        let total = factorial_u64(n);
        let samples = total.min(720);
        let step = total / samples;
        for s in 0..samples {
            let p = unrank(n, s * step);
            let powers: Vec<Permutation> = (0..=16).map(|e| p.power(e)).collect();
            for e1 in 0..=8usize {
                for e2 in 0..=8usize {
                    let ok = powers[e1].compose(&powers[e2]).as_ref() == Ok(&powers[e1 + e2]);
                    t.check(ok, || format!("{p} ; power {e1}+{e2} is not additive"));
                }
            }
        }
        t
    });
    let mut power = Tally::default();
    power_parts.into_iter().for_each(|t| power.merge(t));

    let range = json!({ "n": ns, "r": rs, "power_n": power_ns });
    Ok(reports("perm-core", [parse, split, family, power], range, start))
}

/// Checks that the enumeration streams of the `r`-families on `[n]` fit
/// together: the first-cycle-length classes with `r ∤ k` partition the
/// regular stream and those with `r | k` make up the nearly regular one.
fn family_partition(n: u32, r: u32) -> Tally {
    let mut t = Tally::default();
    let stream = |f: Family| -> HashSet<Permutation> {
        family::enumerate(&f, DEFAULT_ENUMERATION_BOUND.max(n))
            .expect("valid family")
            .collect()
    };
    let regular = stream(Family::Regular { r, n });
    let nearly = stream(Family::NearlyRegular { r, n });
    let cycle = stream(Family::Cycle { r, n });
    let by_k: Vec<HashSet<Permutation>> = (1..=n).map(|k| stream(Family::FirstCycleLength { r, k, n })).collect();
    if n == 0 {
        // only the empty permutation, which is regular and has no first cycle
        let empty = Permutation::empty();
        let ok = regular.contains(&empty) && !nearly.contains(&empty) && cycle.contains(&empty);
        t.check(ok, || format!("{empty} ; r={r} ; streams for n = 0 are wrong"));
        return t;
    }
    for p in Permutations::of_size(n) {
        let ks: Vec<u32> = (1..=n).filter(|&k| by_k[k as usize - 1].contains(&p)).collect();
        let in_regular_classes = ks.iter().filter(|&&k| k % r != 0).count();
        let in_nearly_classes = ks.iter().filter(|&&k| k % r == 0).count();
        let ok = ks.len() <= 1
            && regular.contains(&p) == (in_regular_classes == 1)
            && nearly.contains(&p) == (in_nearly_classes == 1)
            && regular.contains(&p) == p.is_regular(r)
            && cycle.contains(&p) == p.cycles().iter().all(|c| c.len() % r as usize == 0);
        t.check(ok, || format!("{p} ; r={r} ; family streams disagree"));
    }
    t
}

fn check_moduli(rs: &[u32]) -> Result<(), VerifyError> {
    match rs.iter().find(|&&r| r < 2) {
        Some(r) => Err(VerifyError::BadParameter {
            key: "r".into(),
            msg: format!("modulus {r} < 2"),
        }),
        None => Ok(()),
    }
}

/// Exhaustive ground-set sizes used when no explicit list is given.
fn default_sizes(r: u32) -> Vec<u32> {
    let max = if r == 3 { 9 } else { 8 };
    (1..=max).collect()
}

fn round_trips(ctx: &Ctx, grid: &Grid) -> Result<Vec<VerificationReport>, VerifyError> {
    let start = Instant::now();
    let rs = grid.or("r", [2, 3, 4]);
    check_moduli(&rs)?;
    let instances: Vec<(u32, u32)> = rs
        .iter()
        .flat_map(|&r| grid.or("size", default_sizes(r)).into_iter().map(move |s| (r, s)))
        .collect();
    let parts = ctx.map(&instances, |&(r, size)| round_trip_instance(r, size));
    let range = json!({ "instances": instances_json(&instances, "r", "size") });
    Ok(reports("round-trips", merge_all(parts), range, start))
}

fn instances_json(instances: &[(u32, u32)], first: &str, second: &str) -> Value {
    let mut by_r: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    for &(r, s) in instances {
        by_r.entry(r).or_default().push(s);
    }
    by_r.into_iter()
        .map(|(r, s)| {
            let mut entry = serde_json::Map::new();
            entry.insert(first.into(), r.into());
            entry.insert(second.into(), s.into());
            Value::Object(entry)
        })
        .collect()
}

fn round_trip_instance(r: u32, size: u32) -> [Tally; 4] {
    let mut t: [Tally; 4] = Default::default();
    let [delta, phi_alpha, lambda, phi_star] = &mut t;
    let ru = r as usize;
    let n = size as usize;
    if !n.is_multiple_of(ru) {
        for sigma in Permutations::of_size(size).filter(|p| p.is_regular(r)) {
            let ok = match bijections::delta(&sigma, r) {
                Ok(out) => {
                    out.rest.is_regular(r)
                        && !out.rest.contains(out.distinguished)
                        && bijections::delta_inv(out.distinguished, &out.rest, r).as_ref() == Ok(&sigma)
                }
                Err(_) => false,
            };
            delta.check(ok, || format!("{sigma} ; r={r} ; delta_inv(delta(σ)) ≠ σ"));
        }
    }
    if !n.is_multiple_of(ru) {
        // the other direction: every (x, π) with π regular on [n] ∖ {x}
        for x in 1..=size {
            let rest: Vec<Element> = ground(size).into_iter().filter(|&e| e != x).collect();
            for pi in Permutations::new(&rest).filter(|p| p.is_regular(r)) {
                let ok = bijections::delta_inv(x, &pi, r)
                    .and_then(|s| bijections::delta(&s, r))
                    .is_ok_and(|out| out.distinguished == x && out.rest == pi);
                delta.check(ok, || format!("{pi} ; r={r} x={x} ; delta(delta_inv(x, π)) ≠ (x, π)"));
            }
        }
    }
    for sigma in Permutations::of_size(size) {
        let Some(k) = sigma.first_cycle().map(<[Element]>::len) else {
            continue;
        };
        if !sigma.cycles()[1..].iter().all(|c| c.len() % ru != 0) {
            continue;
        }
        if !(n - k).is_multiple_of(ru) {
            let ok = bijections::phi(&sigma, r).is_ok_and(|image| {
                image.first_cycle().map(<[Element]>::len) == Some(k + 1)
                    && image.cycles()[1..].iter().all(|c| c.len() % ru != 0)
                    && bijections::alpha(&image, r).as_ref() == Ok(&sigma)
            });
            phi_alpha.check(ok, || format!("{sigma} ; r={r} ; alpha(phi(σ)) ≠ σ"));
        }
        if k >= 2 && !(n - k + 1).is_multiple_of(ru) {
            let ok = bijections::alpha(&sigma, r).is_ok_and(|pre| {
                pre.first_cycle().map(<[Element]>::len) == Some(k - 1)
                    && bijections::phi(&pre, r).as_ref() == Ok(&sigma)
            });
            phi_alpha.check(ok, || format!("{sigma} ; r={r} ; phi(alpha(σ)) ≠ σ"));
        }
    }
    if n.is_multiple_of(ru) {
        for sigma in Permutations::of_size(size).filter(|p| p.is_regular(r)) {
            let ok = bijections::lambda(&sigma, r).is_ok_and(|tau| {
                let first_ok = tau.color(0).is_some() && tau.base().cycles()[1..].iter().all(|c| c.len() % ru != 0);
                first_ok && bijections::lambda_inv(&tau).as_ref() == Ok(&sigma)
            });
            lambda.check(ok, || format!("{sigma} ; r={r} ; lambda_inv(lambda(σ)) ≠ σ"));
            let ok =
                bijections::phi_star(&sigma, r).is_ok_and(|tau| bijections::phi_star_inv(&tau).as_ref() == Ok(&sigma));
            phi_star.check(ok, || format!("{sigma} ; r={r} ; Phi_inv(Phi(σ)) ≠ σ"));
        }
    }
    t
}

fn phi_bijection(ctx: &Ctx, grid: &Grid) -> Result<Vec<VerificationReport>, VerifyError> {
    let start = Instant::now();
    let rs = grid.or("r", [2, 3, 4]);
    check_moduli(&rs)?;
    let instances: Vec<(u32, u32)> = rs
        .iter()
        .flat_map(|&r| {
            let default = (1..=default_sizes(r).len() as u32 / r).collect::<Vec<_>>();
            grid.or("n", default).into_iter().map(move |n| (r, n))
        })
        .collect();
    let parts = ctx.map(&instances, |&(r, n)| phi_bijection_instance(r, n));
    let range = json!({ "instances": instances_json(&instances, "r", "n") });
    Ok(reports("phi-bijection", merge_all(parts), range, start))
}

/// `Σ_{σ ∈ Cyc_r(size)} (r − 1)^{#cycles}`, by enumeration.
fn enriched_cycle_count(r: u32, size: u32) -> BigUint {
    Permutations::of_size(size)
        .filter(|p| p.cycles().iter().all(|c| c.len() % r as usize == 0))
        .map(|p| BigUint::from(r - 1).pow(p.num_cycles() as u32))
        .sum()
}

fn phi_bijection_instance(r: u32, n: u32) -> [Tally; 2] {
    let mut t: [Tally; 2] = Default::default();
    let [bijective, law] = &mut t;
    let size = r * n;
    let ru = r as usize;
    let mut image = HashSet::new();
    let mut domain = 0u64;
    for sigma in Permutations::of_size(size).filter(|p| p.is_regular(r)) {
        domain += 1;
        let first_len = sigma.first_cycle().map_or(0, <[Element]>::len);
        let (k, i) = (first_len / ru, (first_len % ru) as u32);
        let expected_len = ru * k + ru;
        match (bijections::phi_star(&sigma, r), bijections::lambda(&sigma, r)) {
            (Ok(tau), Ok(lam)) => {
                let valid = tau
                    .colored_cycles()
                    .all(|(c, color)| c.len() % ru == 0 && color.is_some_and(|x| (1..r).contains(&x)));
                let fresh = image.insert(tau.clone());
                bijective.check(valid && fresh, || {
                    format!("{sigma} ; r={r} ; image {tau} is invalid or already hit")
                });
                let lam_ok =
                    lam.base().first_cycle().map(<[Element]>::len) == Some(expected_len) && lam.color(0) == Some(i);
                let tau_ok =
                    tau.base().first_cycle().map(<[Element]>::len) == Some(expected_len) && tau.color(0) == Some(i);
                law.check(lam_ok && tau_ok, || {
                    format!("{sigma} ; r={r} ; first cycle of length {first_len} should become length {expected_len} colored {i}")
                });
            }
            (Err(e), _) | (_, Err(e)) => {
                bijective.check(false, || format!("{sigma} ; r={r} ; {e}"));
                law.check(false, || format!("{sigma} ; r={r} ; {e}"));
            }
        }
    }
    let target = enriched_cycle_count(r, size);
    let image_len = BigUint::from(image.len());
    bijective.require(image_len == target && BigUint::from(domain) == target, || {
        format!(
            "r={r} n={n} ; |Reg| = {domain}, |image| = {}, |Cyc*| = {target}",
            image.len()
        )
    });
    t
}

fn odd_even(ctx: &Ctx, grid: &Grid) -> Result<Vec<VerificationReport>, VerifyError> {
    let start = Instant::now();
    let sizes = grid.or("size", 1..=9);
    let parts = ctx.map(&sizes, |&size| odd_even_instance(size));
    let parts: Vec<[Tally; 2]> = parts.into_iter().collect::<Result<_, _>>()?;
    Ok(reports("odd-even", merge_all(parts), json!({ "size": sizes }), start))
}

fn odd_even_instance(size: u32) -> Result<[Tally; 2], VerifyError> {
    let mut t: [Tally; 2] = Default::default();
    let [classes, odd_even] = &mut t;
    let bound = DEFAULT_ENUMERATION_BOUND.max(size);
    for k in 1..=size {
        // even size: length 2k−1 → 2k; odd size: length 2k → 2k+1
        let (from, to, formula) = if size.is_multiple_of(2) {
            if 2 * k - 1 > size {
                break;
            }
            (
                Family::OddFirstOdd { n: size, k },
                Family::OddFirstEven { n: size, k },
                counting::count_odd_first(size, k, FirstParity::Even)?,
            )
        } else {
            if 2 * k + 1 > size {
                break;
            }
            (
                Family::OddFirstEven { n: size, k },
                Family::OddFirstOdd { n: size, k: k + 1 },
                counting::count_odd_first(size, k + 1, FirstParity::Odd)?,
            )
        };
        let mut image = HashSet::new();
        for sigma in family::enumerate(&from, bound)? {
            let ok = bijections::phi(&sigma, 2)
                .is_ok_and(|tau| family::classify(&tau, &to) == Ok(true) && image.insert(tau));
            classes.check(ok, || format!("{sigma} ; phi leaves {to} or collides"));
        }
        let target = family::enumerate(&to, bound)?.count();
        classes.require(image.len() == target && BigUint::from(target) == formula, || {
            format!(
                "{from} → {to} ; image {} , enumerated {target}, formula {formula}",
                image.len()
            )
        });
    }
    if size.is_multiple_of(2) {
        for sigma in Permutations::of_size(size).filter(|p| p.is_regular(2)) {
            let ok = bijections::odd_to_even(&sigma).is_ok_and(|tau| {
                tau.cycles().iter().all(|c| c.len() % 2 == 0) && bijections::even_to_odd(&tau).as_ref() == Ok(&sigma)
            });
            odd_even.check(ok, || format!("{sigma} ; even_to_odd(odd_to_even(σ)) ≠ σ"));
        }
    }
    Ok(t)
}

fn psi_bijection(ctx: &Ctx, grid: &Grid) -> Result<Vec<VerificationReport>, VerifyError> {
    let start = Instant::now();
    let rs = grid.or("r", [2, 3, 4]);
    check_moduli(&rs)?;
    let ns = grid.or("n", 0..=7);
    let instances: Vec<(u32, u32)> = rs
        .iter()
        .flat_map(|&r| ns.iter().filter(move |&&n| (n + 1) % r != 0).map(move |&n| (r, n)))
        .collect();
    let parts = ctx.map(&instances, |&(r, n)| {
        let mut t = Tally::default();
        let mut image = HashSet::new();
        for sigma in Permutations::of_size(n).filter(|p| p.is_regular(r)) {
            for j in 1..=n + 1 {
                let ok = bijections::psi(&sigma, j, r).is_ok_and(|tau| {
                    tau.is_regular(r)
                        && tau.ground_set() == ground(n + 1)
                        && bijections::psi_inv(&tau, r) == Ok((sigma.clone(), j))
                        && image.insert(tau)
                });
                t.check(ok, || {
                    format!("{sigma} ; r={r} j={j} ; psi is not inverted by psi_inv or collides")
                });
            }
        }
        let target = Permutations::of_size(n + 1).filter(|p| p.is_regular(r)).count();
        t.require(image.len() == target, || {
            format!(
                "r={r} n={n} ; image has {} elements, Reg_r(n+1) has {target}",
                image.len()
            )
        });
        [t]
    });
    let range = json!({ "instances": instances_json(&instances, "r", "n") });
    Ok(reports("psi-bijection", merge_all(parts), range, start))
}

fn roots_suite(ctx: &Ctx, grid: &Grid) -> Result<Vec<VerificationReport>, VerifyError> {
    let start = Instant::now();
    let rs = grid.or("r", 2..=9);
    check_moduli(&rs)?;
    let ns = grid.or("n", 0..=8);
    if let Some(n) = ns.iter().find(|&&n| n as usize > roots::BRUTE_FORCE_LIMIT) {
        return Err(VerifyError::BadParameter {
            key: "n".into(),
            msg: format!("{n} exceeds the brute-force limit {}", roots::BRUTE_FORCE_LIMIT),
        });
    }
    let instances: Vec<(u32, u32)> = rs.iter().flat_map(|&r| ns.iter().map(move |&n| (r, n))).collect();
    let parts = ctx.map(&instances, |&(r, n)| {
        let mut t: [Tally; 4] = Default::default();
        let [oracle, consistency, witness, inclusion] = &mut t;
        let table = roots::power_table(&ground(n), u64::from(r)).expect("n within limit");
        let factorization = roots::prime_power(r);
        for sigma in Permutations::of_size(n) {
            let exists = table.contains_key(&sigma);
            let general = roots::has_root_general(&sigma, r);
            let query = RootQuery::new(sigma.clone(), r).has_root();
            oracle.check(general == exists && query == exists, || {
                format!("{sigma} ; r={r} ; criterion says {general}, brute force says {exists}")
            });
            if let Some((q, l)) = factorization {
                let pp = roots::has_root_prime_power(&sigma, q, l).expect("q is prime");
                consistency.check(pp == general, || {
                    format!("{sigma} ; r={r} ; prime-power rule says {pp}, general rule says {general}")
                });
                if sigma.is_regular(q) {
                    inclusion.check(pp, || format!("{sigma} ; r={r} ; {q}-regular but no root"));
                }
            }
        }
        for (sigma, pi) in &table {
            witness.check(pi.power(u64::from(r)) == *sigma, || {
                format!("{pi} ; r={r} ; stored root does not power to {sigma}")
            });
        }
        if n <= 5 {
            for sigma in Permutations::of_size(n) {
                let found = roots::find_root_bruteforce(&sigma, u64::from(r)).expect("n within limit");
                let ok = match &found {
                    Some(pi) => pi.power(u64::from(r)) == sigma && table.get(&sigma) == Some(pi),
                    None => !table.contains_key(&sigma),
                };
                witness.check(ok, || format!("{sigma} ; r={r} ; search witness disagrees with table"));
            }
        }
        t
    });
    let range = json!({ "r": rs, "n": ns });
    Ok(reports("roots", merge_all(parts), range, start))
}

fn counting_suite(ctx: &Ctx, grid: &Grid) -> Result<Vec<VerificationReport>, VerifyError> {
    let start = Instant::now();
    let rs = grid.or("r", [2, 3, 4]);
    check_moduli(&rs)?;
    let ns = grid.or("n", 0..=8);
    let r_max = grid.or("r_max", [9]).into_iter().max().unwrap_or(9);
    let n_max = grid.or("n_max", [60]).into_iter().max().unwrap_or(60);
    if let Some(&n) = ns.iter().find(|&&n| n > DEFAULT_ENUMERATION_BOUND) {
        return Err(FamilyError::BoundExceeded {
            n,
            bound: DEFAULT_ENUMERATION_BOUND,
        }
        .into());
    }

    let parts = ctx.map(&ns, |&n| enumeration_checks(n, &rs));
    let parts: Vec<[Tally; 2]> = parts.into_iter().collect::<Result<_, _>>()?;
    let [mut triple, closed] = merge_all(parts);

    let grid_points: Vec<(u32, u32)> = (2..=r_max).flat_map(|r| (0..=n_max).map(move |n| (r, n))).collect();
    let formula_parts = ctx.map(&grid_points, |&(r, n)| -> Result<Tally, CountError> {
        let mut t = Tally::default();
        for (name, f) in [
            ("Reg", counting::count_reg as fn(u32, u32, Method) -> _),
            ("Cyc", counting::count_cyc),
        ] {
            let a = f(r, n, Method::Formula)?;
            let b = f(r, n, Method::Recurrence)?;
            t.check(a == b, || {
                format!("r={r} n={n} ; |{name}| formula {a} ≠ recurrence {b}")
            });
        }
        Ok(t)
    });
    for t in formula_parts {
        triple.merge(t?);
    }
    let range = json!({ "r": rs, "n": ns, "r_max": r_max, "n_max": n_max });
    Ok(reports("counting", [triple, closed], range, start))
}

/// Exhaustive counts over `S_n` compared with every counting route.
fn enumeration_checks(n: u32, rs: &[u32]) -> Result<[Tally; 2], VerifyError> {
    let mut t: [Tally; 2] = Default::default();
    let [triple, closed] = &mut t;
    let all: Vec<Permutation> = Permutations::of_size(n).collect();
    let count = |pred: &dyn Fn(&Permutation) -> bool| BigUint::from(all.iter().filter(|p| pred(p)).count());

    for &r in rs {
        let ru = r as usize;
        let reg = count(&|p| p.is_regular(r));
        let cyc = count(&|p| p.cycles().iter().all(|c| c.len() % ru == 0));
        for (name, enumerated, f) in [
            (
                "Reg",
                &reg,
                counting::count_reg as fn(u32, u32, Method) -> Result<BigUint, CountError>,
            ),
            ("Cyc", &cyc, counting::count_cyc),
        ] {
            let formula = f(r, n, Method::Formula)?;
            let recurrence = f(r, n, Method::Recurrence)?;
            let listed = f(r, n, Method::enumerate())?;
            let ok = formula == *enumerated && recurrence == *enumerated && listed == *enumerated;
            triple.check(ok, || {
                format!("r={r} n={n} ; |{name}| formula {formula}, recurrence {recurrence}, enumeration {enumerated}")
            });
        }
        if n.is_multiple_of(r) {
            let enriched = counting::count_enriched_cyc(r, n)?;
            let direct: BigUint = all
                .iter()
                .filter(|p| p.cycles().iter().all(|c| c.len() % ru == 0))
                .map(|p| BigUint::from(r - 1).pow(p.num_cycles() as u32))
                .sum();
            closed.check(enriched == direct && enriched == reg, || {
                format!("r={r} n={n} ; |Cyc*| DP {enriched}, enumeration {direct}, |Reg| {reg}")
            });
        }
        let proportion = counting::regular_proportion(r, n)?;
        let ratio = counting::ratio(reg.clone(), counting::factorial(u64::from(n)));
        closed.check(proportion == ratio, || {
            format!("r={r} n={n} ; product {proportion} ≠ |Reg|/n! = {ratio}")
        });
        for k in 1..=n {
            let enumerated = count(&|p| {
                p.first_cycle().map(<[Element]>::len) == Some(k as usize)
                    && p.cycles()[1..].iter().all(|c| c.len() % ru != 0)
            });
            let formula = counting::count_q_family(r, k, n)?;
            closed.check(formula == enumerated, || {
                format!("r={r} k={k} n={n} ; |Q| formula {formula}, enumeration {enumerated}")
            });
            if k < n && !(n - k).is_multiple_of(r) {
                let next = counting::count_q_family(r, k + 1, n)?;
                closed.check(next == formula, || {
                    format!("r={r} k={k} n={n} ; |Q_k| {formula} ≠ |Q_k+1| {next}")
                });
            }
        }
    }

    for k in 1..=n {
        for (parity, len) in [(FirstParity::Odd, 2 * k - 1), (FirstParity::Even, 2 * k)] {
            if len > n {
                continue;
            }
            let enumerated = count(&|p| {
                p.first_cycle().map(<[Element]>::len) == Some(len as usize)
                    && p.cycles()[1..].iter().all(|c| c.len() % 2 == 1)
            });
            let formula = counting::count_odd_first(n, k, parity)?;
            closed.check(formula == enumerated, || {
                format!("n={n} first length {len} ; closed form {formula}, enumeration {enumerated}")
            });
        }
    }

    for q in [2u32, 3] {
        for r in [2u32, 3] {
            let enumerated = count(&|p| roots::is_qr_divisible(&p.cycle_type(), q, r));
            let dp = counting::count_cyc_qr(q, r, n)?;
            closed.check(dp == enumerated, || {
                format!("q={q} r={r} n={n} ; |Cyc_q,r| DP {dp}, enumeration {enumerated}")
            });
        }
        let mut by_type: HashMap<CycleType, u64> = HashMap::new();
        for p in &all {
            *by_type.entry(p.split_parts(q).1.cycle_type()).or_default() += 1;
        }
        for rho in counting::cycle_types_with_step(n, q) {
            let enumerated = BigUint::from(by_type.get(&rho).copied().unwrap_or(0));
            let formula = counting::count_s_rho_q(&rho, q, n)?;
            closed.check(formula == enumerated, || {
                format!("rho={rho} q={q} n={n} ; |S_rho,q| formula {formula}, enumeration {enumerated}")
            });
        }
    }

    if n as usize <= roots::BRUTE_FORCE_LIMIT.min(7) {
        for r in 2..=9u32 {
            let dp = counting::count_roots(r, n)?;
            let brute = counting::count_roots_bruteforce(r, n)?;
            closed.check(dp == brute, || {
                format!("r={r} n={n} ; |S_n^r| {dp} ≠ brute force {brute}")
            });
        }
    }
    Ok(t)
}

fn cyc_le_reg_suite(grid: &Grid) -> Result<Vec<VerificationReport>, VerifyError> {
    let start = Instant::now();
    let rs = grid.or("r", 2..=9);
    check_moduli(&rs)?;
    let ns = grid.or("n", 1..=60);
    let mut t = Tally::default();
    for &r in &rs {
        for &n in &ns {
            let cyc = counting::count_cyc(r, n, Method::Formula)?;
            let reg = counting::count_reg(r, n, Method::Formula)?;
            let equal_expected = r == 2 && n % 2 == 0;
            t.check(cyc <= reg && (cyc == reg) == equal_expected, || {
                format!("r={r} n={n} ; |Cyc| = {cyc}, |Reg| = {reg}")
            });
        }
    }
    Ok(reports("bmw-strong", [t], json!({ "r": rs, "n": ns }), start))
}

fn cyc_square_suite(grid: &Grid) -> Result<Vec<VerificationReport>, VerifyError> {
    let start = Instant::now();
    let rs = grid.or("r", [2, 3]);
    check_moduli(&rs)?;
    let ms = grid.or("m", 1..=4);
    let mut t = Tally::default();
    for &r in &rs {
        for &m in &ms {
            let n = m * r * r;
            let cyc = counting::count_cyc(r * r, n, Method::Formula)?;
            let reg = counting::count_reg(r, n, Method::Formula)?;
            t.check(cyc < reg, || format!("r={r} m={m} ; |Cyc_r²| = {cyc}, |Reg_r| = {reg}"));
        }
    }
    Ok(reports("cyc-square", [t], json!({ "r": rs, "m": ms }), start))
}

fn cyc4_reg2(grid: &Grid) -> Result<Vec<VerificationReport>, VerifyError> {
    let start = Instant::now();
    let ms = grid.or("m", 4..=15);
    let mut t = Tally::default();
    for &m in &ms {
        let cyc = counting::count_cyc(4, 4 * m, Method::Formula)?;
        let reg = counting::count_reg(2, 4 * m, Method::Formula)?;
        t.check(BigUint::from(2u32) * &cyc < reg, || format!("m={m} ; 2·{cyc} ≥ {reg}"));
        if m == 4 {
            let ratio = counting::ratio(reg, cyc);
            let expected = BigRational::new(33.into(), 16.into());
            t.check(ratio == expected, || format!("m=4 ; ratio {ratio} ≠ 33/16"));
        }
    }
    Ok(reports("cyc4-reg2", [t], json!({ "m": ms }), start))
}

/// `(q, r, m)` for the merge and regular bounds.
const MERGE_GRID: &[(u32, u32, u32)] = &[(2, 2, 1), (2, 2, 2), (2, 2, 3), (2, 4, 1), (3, 3, 1)];
/// `(q, l, m)` for the root bound: prime powers `r = q^l > 2` with `mqr ≤ 16`.
const ROOT_GRID: &[(u32, u32, u32)] = &[(2, 2, 1), (2, 2, 2), (2, 3, 1), (3, 1, 1)];

fn prime_power_bounds() -> Result<Vec<VerificationReport>, VerifyError> {
    let start = Instant::now();
    let mut t: [Tally; 3] = Default::default();
    let [merge, regular, roots_bound] = &mut t;
    for &(q, r, m) in MERGE_GRID {
        let n = m * q * r;
        let qr = counting::count_cyc_qr(q, r, n)?;
        let factor = BigUint::from(m * q).pow(r - 1);
        let cyc = counting::count_cyc(q * r, n, Method::Formula)?;
        merge.check(cyc >= &factor * &qr, || {
            format!("q={q} r={r} m={m} ; |Cyc_qr| = {cyc} < {factor}·{qr}")
        });
        let reg = counting::count_reg(q, n, Method::Formula)?;
        regular.check(reg > &factor * &qr, || {
            format!("q={q} r={r} m={m} ; |Reg_q| = {reg} ≤ {factor}·{qr}")
        });
    }
    for &(q, l, m) in ROOT_GRID {
        let r = q.pow(l);
        let n = m * q * r;
        let qr = counting::count_cyc_qr(q, r, n)?;
        let with_root = counting::count_roots(r, n)?;
        roots_bound.check(with_root > BigUint::from(n) * &qr, || {
            format!("q={q} l={l} m={m} ; |S^r| = {with_root} ≤ {n}·{qr}")
        });
    }
    let range = json!({ "merge_and_regular": MERGE_GRID, "roots": ROOT_GRID });
    Ok(reports("prime-power-bounds", t, range, start))
}

fn singular_type(ctx: &Ctx, grid: &Grid) -> Result<Vec<VerificationReport>, VerifyError> {
    let start = Instant::now();
    let qs = grid.or("q", [2, 3]);
    check_moduli(&qs)?;
    let ns = grid.or("n", 1..=7);
    if let Some(&n) = ns.iter().find(|&&n| n + 1 > DEFAULT_ENUMERATION_BOUND) {
        return Err(FamilyError::BoundExceeded {
            n: n + 1,
            bound: DEFAULT_ENUMERATION_BOUND,
        }
        .into());
    }
    let instances: Vec<(u32, u32)> = qs
        .iter()
        .flat_map(|&q| {
            ns.iter()
                .filter(move |&&n| n >= 1 && (n + 1) % q == 0)
                .map(move |&n| (q, n))
        })
        .collect();
    let parts = ctx.map(&instances, |&(q, n)| -> Result<[Tally; 1], VerifyError> {
        let mut t = Tally::default();
        let tally_types = |size: u32| {
            let mut by_type: HashMap<CycleType, u64> = HashMap::new();
            for p in Permutations::of_size(size) {
                *by_type.entry(p.split_parts(q).1.cycle_type()).or_default() += 1;
            }
            by_type
        };
        let (here, next) = (tally_types(n), tally_types(n + 1));
        for rho in counting::cycle_types_with_step(n, q) {
            let a = BigUint::from(here.get(&rho).copied().unwrap_or(0));
            let b = BigUint::from(next.get(&rho).copied().unwrap_or(0));
            let formulas_agree =
                counting::count_s_rho_q(&rho, q, n)? == a && counting::count_s_rho_q(&rho, q, n + 1)? == b;
            let lhs = BigUint::from(n) * &a;
            let ok = formulas_agree && lhs >= b && (lhs == b) == rho.is_empty();
            t.check(ok, || format!("rho={rho} q={q} n={n} ; n·{a} vs {b}"));
        }
        Ok([t])
    });
    let parts: Vec<[Tally; 1]> = parts.into_iter().collect::<Result<_, _>>()?;
    let range = json!({ "instances": instances_json(&instances, "q", "n") });
    Ok(reports("singular-type", merge_all(parts), range, start))
}

const PRIME_POWERS: [u32; 6] = [2, 3, 4, 5, 8, 9];

/// `p_r(1), …, p_r(n_max + 1)`, index 0 unused.
fn probabilities(r: u32, n_max: u32) -> Result<Vec<BigRational>, VerifyError> {
    let mut out = vec![BigRational::one()];
    for n in 1..=n_max + 1 {
        out.push(counting::prob_root(r, n)?);
    }
    Ok(out)
}

fn prime_power_params(grid: &Grid) -> Result<(Vec<u32>, Vec<u32>), VerifyError> {
    let rs = grid.or("r", PRIME_POWERS);
    if let Some(r) = rs.iter().find(|&&r| roots::prime_power(r).is_none()) {
        return Err(VerifyError::BadParameter {
            key: "r".into(),
            msg: format!("{r} is not a prime power"),
        });
    }
    let ns = grid.or("n", 1..=40);
    if ns.contains(&0) {
        return Err(VerifyError::BadParameter {
            key: "n".into(),
            msg: "n must be positive".into(),
        });
    }
    Ok((rs, ns))
}

fn step_cases(grid: &Grid) -> Result<Vec<VerificationReport>, VerifyError> {
    let start = Instant::now();
    let (rs, ns) = prime_power_params(grid)?;
    let mut t = Tally::default();
    for &r in &rs {
        let (q, _) = roots::prime_power(r).expect("checked");
        let p = probabilities(r, ns.iter().copied().max().unwrap_or(0))?;
        for &n in &ns {
            let (now, next) = (&p[n as usize], &p[n as usize + 1]);
            let m = n + 1;
            let (ok, case) = if m % q != 0 {
                (now == next, "equal")
            } else if m % (q * r) != 0 {
                let scaled = next * BigRational::new((n + 1).into(), n.into());
                let equality = (1..r).any(|k| m == k * q);
                (*now >= scaled && (*now == scaled) == equality, "p(n) ≥ (n+1)/n·p(n+1)")
            } else {
                let equality = r == 2 && n == 3;
                (now >= next && (now == next) == equality, "p(n) ≥ p(n+1)")
            };
            t.check(ok, || {
                format!("r={r} n={n} ; expected {case} with exact equality set, p(n) = {now}, p(n+1) = {next}")
            });
        }
    }
    Ok(reports("step-cases", [t], json!({ "r": rs, "n": ns }), start))
}

fn monotone(grid: &Grid) -> Result<Vec<VerificationReport>, VerifyError> {
    let start = Instant::now();
    let (rs, ns) = prime_power_params(grid)?;
    let mut t = Tally::default();
    for &r in &rs {
        let p = probabilities(r, ns.iter().copied().max().unwrap_or(0))?;
        for &n in &ns {
            let (now, next) = (&p[n as usize], &p[n as usize + 1]);
            t.check(now >= next, || format!("r={r} n={n} ; p(n) = {now} < p(n+1) = {next}"));
        }
    }
    let mut example = Tally::default();
    let (p4, p5) = (counting::prob_root(6, 4)?, counting::prob_root(6, 5)?);
    let sixth = |num: i64, den: i64| BigRational::new(num.into(), den.into());
    example.check(p4 == sixth(1, 6) && p5 == sixth(1, 3) && p4 < p5, || {
        format!("r=6 ; p(4) = {p4}, p(5) = {p5}, expected 1/6 < 1/3")
    });
    let range = json!({ "r": rs, "n": ns });
    Ok(reports("monotone", [t, example], range, start))
}

/// Published values of `p_r(n)`, `n = 1..=12`, keyed by `r`.
pub fn published_tables() -> BTreeMap<u32, Vec<BigRational>> {
    let raw: BTreeMap<String, Vec<String>> =
        serde_json::from_str(include_str!("../fixtures/tables/root_probabilities.json"))
            .expect("fixture is valid JSON");
    raw.into_iter()
        .map(|(r, values)| {
            let r = r.parse().expect("numeric key");
            let values = values.iter().map(|v| v.parse().expect("rational")).collect();
            (r, values)
        })
        .collect()
}

fn tables() -> Result<Vec<VerificationReport>, VerifyError> {
    let start = Instant::now();
    let mut t = Tally::default();
    let published = published_tables();
    for (&r, values) in &published {
        for (n, expected) in (1u32..).zip(values) {
            let computed = counting::prob_root(r, n)?;
            t.check(computed == *expected, || {
                format!("r={r} n={n} ; computed {computed}, published {expected}")
            });
        }
    }
    let range = json!({ "r": published.keys().collect::<Vec<_>>(), "n": [1, 12] });
    Ok(reports("tables", [t], range, start))
}

/// The counts this library computes for the OEIS sequences it knows:
/// A247005 is `|S_n^2|` and A001818 is `|Reg_2(2n)| = ((2n−1)!!)²`.
pub fn builtin_generator(id: &OeisId) -> Option<fn(u64) -> BigUint> {
    fn squares(n: u64) -> BigUint {
        counting::count_roots(2, n as u32).unwrap_or_else(|_| BigUint::zero())
    }
    fn double_factorial_squares(n: u64) -> BigUint {
        counting::count_reg(2, 2 * n as u32, Method::Formula).unwrap_or_else(|_| BigUint::zero())
    }
    match id.as_str() {
        "A247005" => Some(squares),
        "A001818" => Some(double_factorial_squares),
        _ => None,
    }
}

fn oeis_suite() -> Result<Vec<VerificationReport>, VerifyError> {
    // vendored snapshots only: this suite never touches the network
    let client = OeisClient::new(std::env::temp_dir(), false);
    let mut out = Vec::new();
    for (id, upto) in [("A247005", 12), ("A001818", 10)] {
        let id = id.parse::<OeisId>()?;
        let seq = client.fetch(&id, Source::Fixture)?;
        let generator = builtin_generator(&id).expect("generator registered");
        out.push(oeis::cross_check(&seq, generator, upto)?);
    }
    Ok(out)
}

/// Outcome of comparing a report file with a golden file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoldenComparison {
    pub equal: bool,
    /// JSON pointer to the first difference, when there is one.
    pub first_difference: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GoldenError {
    #[error("cannot read {path}: {msg}")]
    Io { path: String, msg: String },
    #[error("{path} is not valid JSON: {msg}")]
    Json { path: String, msg: String },
    #[error("{path} does not hold verification reports: {msg}")]
    Schema { path: String, msg: String },
}

/// Compares two report files after normalization: both must hold a report
/// or an array of reports; wall-time fields are dropped and keys sorted.
pub fn golden_compare(report_path: &Path, golden_path: &Path) -> Result<GoldenComparison, GoldenError> {
    let report = load_normalized(report_path)?;
    let golden = load_normalized(golden_path)?;
    let first_difference = first_difference(&report, &golden, String::new());
    Ok(GoldenComparison {
        equal: first_difference.is_none(),
        first_difference,
    })
}

/// Canonical JSON text of a list of reports, as stored in golden files.
pub fn reports_to_json(reports: &[VerificationReport]) -> String {
    let mut text = serde_json::to_string_pretty(reports).expect("reports serialize");
    text.push('\n');
    text
}

fn load_normalized(path: &Path) -> Result<Value, GoldenError> {
    let p = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| GoldenError::Io {
        path: p.clone(),
        msg: e.to_string(),
    })?;
    let value: Value = serde_json::from_str(&text).map_err(|e| GoldenError::Json {
        path: p.clone(),
        msg: e.to_string(),
    })?;
    let mut items = match value {
        Value::Array(items) => items,
        single @ Value::Object(_) => vec![single],
        _ => {
            return Err(GoldenError::Schema {
                path: p,
                msg: "expected an object or array".into(),
            })
        }
    };
    for (i, item) in items.iter_mut().enumerate() {
        let schema = |msg: String| GoldenError::Schema {
            path: p.clone(),
            msg: format!("entry {i}: {msg}"),
        };
        let Value::Object(map) = item else {
            return Err(schema("not an object".into()));
        };
        map.retain(|k, _| !k.starts_with("wall_time"));
        let report: VerificationReport =
            serde_json::from_value(Value::Object(map.clone())).map_err(|e| schema(e.to_string()))?;
        if report.passed() == report.counterexample.is_some() {
            return Err(schema("status and counterexample disagree".into()));
        }
    }
    Ok(Value::Array(items))
}

fn first_difference(a: &Value, b: &Value, pointer: String) -> Option<String> {
    match (a, b) {
        (Value::Object(x), Value::Object(y)) => {
            let keys: std::collections::BTreeSet<&String> = x.keys().chain(y.keys()).collect();
            keys.into_iter().find_map(|k| match (x.get(k), y.get(k)) {
                (Some(u), Some(v)) => first_difference(u, v, format!("{pointer}/{k}")),
                _ => Some(format!("{pointer}/{k}")),
            })
        }
        (Value::Array(x), Value::Array(y)) => x
            .iter()
            .zip(y)
            .enumerate()
            .find_map(|(i, (u, v))| first_difference(u, v, format!("{pointer}/{i}")))
            .or_else(|| (x.len() != y.len()).then(|| format!("{pointer}/{}", x.len().min(y.len())))),
        _ => (a != b).then(|| if pointer.is_empty() { "/".to_owned() } else { pointer }),
    }
}
