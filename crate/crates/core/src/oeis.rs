//! OEIS b-file retrieval for cross-checking computed sequences.
//!
//! Three sources are supported: snapshots compiled into the crate, a local
//! cache directory, and (behind the `network` feature and an explicit opt-in)
//! the OEIS web site. Fetching from the network stores the b-file in the
//! cache.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::verify::{Tally, VerificationReport};

/// Environment variable naming the cache directory.
pub const CACHE_DIR_ENV: &str = "PERMROOT_CACHE_DIR";
/// Environment variable that, when set to `1`, allows network fetches.
pub const NETWORK_ENV: &str = "PERMROOT_NETWORK";

const FIXTURES: &[(&str, &str)] = &[
    ("A001818", include_str!("../fixtures/oeis/b001818.txt")),
    ("A247005", include_str!("../fixtures/oeis/b247005.txt")),
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OeisError {
    #[error("malformed OEIS id {0:?}: expected 'A' followed by six digits")]
    InvalidId(String),
    #[error("{0} was not found on the server")]
    NotFound(OeisId),
    #[error("no vendored snapshot of {0}")]
    NoFixture(OeisId),
    #[error("{id} is not cached in {dir}")]
    NotCached { id: OeisId, dir: String },
    #[error("b-file line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("network access is disabled")]
    NetworkDisabled,
    #[error("network error: {0}")]
    Network(String),
    #[error("i/o error on {path}: {msg}")]
    Io { path: String, msg: String },
    #[error("need terms up to index {needed}, but the sequence stops at {available:?}")]
    InsufficientTerms { needed: u64, available: Option<u64> },
}

/// A validated OEIS A-number such as `A247005`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct OeisId(String);

impl OeisId {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Name of the b-file on the server and in the cache, e.g. `b247005.txt`.
    pub fn bfile_name(&self) -> String {
        format!("b{}.txt", &self.0[1..])
    }
}

impl FromStr for OeisId {
    type Err = OeisError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let b = s.as_bytes();
        if b.len() == 7 && b[0] == b'A' && b[1..].iter().all(u8::is_ascii_digit) {
            Ok(OeisId(s.to_owned()))
        } else {
            Err(OeisError::InvalidId(s.to_owned()))
        }
    }
}

impl TryFrom<String> for OeisId {
    type Error = OeisError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<OeisId> for String {
    fn from(id: OeisId) -> String {
        id.0
    }
}

impl fmt::Display for OeisId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// The terms of one sequence, with strictly increasing indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceRef {
    pub id: OeisId,
    pub terms: Vec<(u64, BigUint)>,
}

impl SequenceRef {
    pub fn term(&self, index: u64) -> Option<&BigUint> {
        self.terms
            .binary_search_by_key(&index, |(i, _)| *i)
            .ok()
            .map(|pos| &self.terms[pos].1)
    }

    pub fn last_index(&self) -> Option<u64> {
        self.terms.last().map(|(i, _)| *i)
    }
}

/// Parses b-file text: one `index value` pair per line, blank lines and
/// lines starting with `#` ignored, indices strictly increasing.
pub fn parse_bfile(text: &str) -> Result<Vec<(u64, BigUint)>, OeisError> {
    let mut terms: Vec<(u64, BigUint)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |msg: &str| OeisError::Parse {
            line: lineno + 1,
            msg: msg.to_owned(),
        };
        let mut fields = line.split_whitespace();
        let (Some(index), Some(value), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(err("expected exactly two fields"));
        };
        let index: u64 = index.parse().map_err(|_| err("index is not a non-negative integer"))?;
        if value.is_empty() || !value.bytes().all(|c| c.is_ascii_digit()) {
            return Err(err("value is not a non-negative integer"));
        }
        let value =
            BigUint::parse_bytes(value.as_bytes(), 10).ok_or_else(|| err("value is not a non-negative integer"))?;
        if terms.last().is_some_and(|(prev, _)| *prev >= index) {
            return Err(err("indices must be strictly increasing"));
        }
        terms.push((index, value));
    }
    Ok(terms)
}

/// Where [`OeisClient::fetch`] reads from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    Network,
    Cache,
    Fixture,
}

impl FromStr for Source {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "network" => Ok(Source::Network),
            "cache" => Ok(Source::Cache),
            "fixture" => Ok(Source::Fixture),
            other => Err(format!("unknown source {other:?}")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct OeisClient {
    cache_dir: PathBuf,
    allow_network: bool,
    base_url: String,
}

impl OeisClient {
    /// Client reading the cache location from `PERMROOT_CACHE_DIR` (falling
    /// back to a per-user cache directory) with network access enabled only
    /// when `PERMROOT_NETWORK=1`.
    pub fn from_env() -> Self {
        let cache_dir = std::env::var_os(CACHE_DIR_ENV)
            .map(PathBuf::from)
            .unwrap_or_else(default_cache_dir);
        let allow_network = std::env::var(NETWORK_ENV).is_ok_and(|v| v == "1");
        Self::new(cache_dir, allow_network)
    }

    pub fn new(cache_dir: impl Into<PathBuf>, allow_network: bool) -> Self {
        Self {
            cache_dir: cache_dir.into(),
            allow_network,
            base_url: "https://oeis.org".to_owned(),
        }
    }

    pub fn with_network(mut self, allow: bool) -> Self {
        self.allow_network = allow;
        self
    }

    pub fn with_base_url(mut self, url: impl Into<String>) -> Self {
        self.base_url = url.into();
        self
    }

    pub fn cache_dir(&self) -> &Path {
        &self.cache_dir
    }

    pub fn fetch(&self, id: &OeisId, source: Source) -> Result<SequenceRef, OeisError> {
        let text = match source {
            Source::Fixture => fixture_text(id)?.to_owned(),
            Source::Cache => self.read_cache(id)?,
            Source::Network => {
                let text = self.download(id)?;
                // parse before caching so a bad response is never stored
                parse_bfile(&text)?;
                self.write_cache(id, &text)?;
                text
            }
        };
        Ok(SequenceRef {
            id: id.clone(),
            terms: parse_bfile(&text)?,
        })
    }

    fn cache_path(&self, id: &OeisId) -> PathBuf {
        self.cache_dir.join(id.bfile_name())
    }

    fn read_cache(&self, id: &OeisId) -> Result<String, OeisError> {
        let path = self.cache_path(id);
        match std::fs::read_to_string(&path) {
            Ok(text) => Ok(text),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Err(OeisError::NotCached {
                id: id.clone(),
                dir: self.cache_dir.display().to_string(),
            }),
            Err(e) => Err(io_error(&path, e)),
        }
    }

    /// Writes to a temporary file in the cache directory and renames it into
    /// place, so readers never observe a partial b-file.
    pub fn write_cache(&self, id: &OeisId, text: &str) -> Result<(), OeisError> {
        use std::io::Write;
        std::fs::create_dir_all(&self.cache_dir).map_err(|e| io_error(&self.cache_dir, e))?;
        let mut tmp = tempfile::NamedTempFile::new_in(&self.cache_dir).map_err(|e| io_error(&self.cache_dir, e))?;
        tmp.write_all(text.as_bytes()).map_err(|e| io_error(tmp.path(), e))?;
        let path = self.cache_path(id);
        tmp.persist(&path).map_err(|e| io_error(&path, e.error))?;
        Ok(())
    }

    #[cfg(feature = "network")]
    fn download(&self, id: &OeisId) -> Result<String, OeisError> {
        if !self.allow_network {
            return Err(OeisError::NetworkDisabled);
        }
        let url = format!("{}/{}/{}", self.base_url, id, id.bfile_name());
        let agent: ureq::Agent = ureq::Agent::config_builder()
            .timeout_global(Some(std::time::Duration::from_secs(30)))
            .build()
            .into();
        match agent.get(&url).call() {
            Ok(mut response) => response
                .body_mut()
                .read_to_string()
                .map_err(|e| OeisError::Network(e.to_string())),
            Err(ureq::Error::StatusCode(404)) => Err(OeisError::NotFound(id.clone())),
            Err(e) => Err(OeisError::Network(e.to_string())),
        }
    }

    #[cfg(not(feature = "network"))]
    fn download(&self, _id: &OeisId) -> Result<String, OeisError> {
        Err(OeisError::NetworkDisabled)
    }
}

fn default_cache_dir() -> PathBuf {
    let base = std::env::var_os("XDG_CACHE_HOME")
        .map(PathBuf::from)
        .or_else(|| std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache")))
        .unwrap_or_else(std::env::temp_dir);
    base.join("permroot").join("oeis")
}

fn io_error(path: &Path, e: std::io::Error) -> OeisError {
    OeisError::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    }
}

/// The vendored b-file text for `id`.
pub fn fixture_text(id: &OeisId) -> Result<&'static str, OeisError> {
    FIXTURES
        .iter()
        .find(|(name, _)| *name == id.as_str())
        .map(|(_, text)| *text)
        .ok_or_else(|| OeisError::NoFixture(id.clone()))
}

/// Compares every term of `seq` with index at most `upto` against
/// `generator`. The report fails at the first index where they differ.
pub fn cross_check(
    seq: &SequenceRef,
    generator: impl Fn(u64) -> BigUint,
    upto: u64,
) -> Result<VerificationReport, OeisError> {
    let available = seq.last_index();
    if available.is_none_or(|last| last < upto) {
        return Err(OeisError::InsufficientTerms {
            needed: upto,
            available,
        });
    }
    let start = Instant::now();
    let mut tally = Tally::default();
    for (index, expected) in seq.terms.iter().take_while(|(i, _)| *i <= upto) {
        let computed = generator(*index);
        tally.check(computed == *expected, || {
            format!("index {index}: sequence has {expected}, computed {computed}")
        });
    }
    let range = serde_json::json!({
        "from": seq.terms[0].0,
        "upto": upto,
    });
    Ok(tally.into_report(format!("oeis.{}", seq.id), range, start.elapsed()))
}
