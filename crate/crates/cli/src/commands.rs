//! Subcommand implementations. Each one prints its result and returns an
//! error carrying the exit status when something goes wrong.

use std::io::BufRead;
use std::path::Path;

use num_bigint::BigUint;
use num_rational::BigRational;
use permroot::bijections::{self, MapError};
use permroot::counting::{self, CountError, FirstParity, Method};
use permroot::family::{self, Family, FamilyError};
use permroot::notation::{self, ParseError, Parsed};
use permroot::oeis::{self, OeisClient, OeisError, OeisId, Source, NETWORK_ENV};
use permroot::perm::CycleType;
use permroot::roots::{self, RootQuery, BRUTE_FORCE_LIMIT};
use permroot::verify::{self, Grid, VerifyError};
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::{
    CliConfig, FamilyArgs, FamilyName, InputForm, MapName, MethodName, Modulus, OutputFormat, ProbKind, SourceName,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error("verification failed: {0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Usage(_) | CliError::Input(_) => 2,
        }
    }
}

macro_rules! input_error {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Input(e.to_string())
            }
        }
    )*};
}

input_error!(ParseError, MapError, FamilyError, OeisError, std::io::Error);

impl From<CountError> for CliError {
    fn from(e: CountError) -> Self {
        match e {
            CountError::InvalidParameters(_) | CountError::BeyondOracle { .. } => CliError::Usage(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<VerifyError> for CliError {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::UnknownSuite(_) | VerifyError::UnknownParameter { .. } | VerifyError::BadParameter { .. } => {
                CliError::Usage(e.to_string())
            }
            other => CliError::Input(other.to_string()),
        }
    }
}

type CliResult = Result<(), CliError>;

fn usage<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Usage(msg.into()))
}

fn print_json(value: &Value) {
    println!("{}", serde_json::to_string(value).expect("JSON values serialize"));
}

/// The single argument, or every non-blank line of standard input.
fn inputs(arg: Option<String>) -> Result<Vec<String>, CliError> {
    if let Some(text) = arg {
        return Ok(vec![text]);
    }
    let mut out = Vec::new();
    for line in std::io::stdin().lock().lines() {
        let line = line?;
        if !line.trim().is_empty() {
            out.push(line);
        }
    }
    Ok(out)
}

fn rational_json(q: &BigRational) -> Value {
    json!({ "num": q.numer().to_string(), "den": q.denom().to_string() })
}

fn resolve_modulus(m: Modulus) -> Result<u32, CliError> {
    match (m.r, m.q, m.l) {
        (Some(r), None, None) => Ok(r),
        (None, Some(q), Some(l)) => {
            if !roots::is_prime(q) {
                return usage(format!("q = {q} is not prime"));
            }
            if l == 0 {
                return usage("l must be at least 1");
            }
            q.checked_pow(l)
                .ok_or_else(|| CliError::Usage(format!("{q}^{l} does not fit in 32 bits")))
        }
        _ => usage("give either --r or both --q and --l"),
    }
}

pub fn map(
    config: &CliConfig,
    name: MapName,
    r: u32,
    x: Option<u32>,
    j: Option<u32>,
    permutation: Option<String>,
) -> CliResult {
    if r < 2 {
        return usage(format!("r must be at least 2, got {r}"));
    }
    match name {
        MapName::DeltaInv if x.is_none() => return usage("delta-inv needs --x"),
        MapName::Psi if j.is_none() => return usage("psi needs --j"),
        _ => {}
    }
    let enriched_input = matches!(name, MapName::LambdaInv | MapName::PhiStarInv);
    for text in inputs(permutation)? {
        let mut record = Map::new();
        record.insert("map".into(), json!(map_label(name)));
        record.insert("r".into(), json!(r));
        record.insert("input".into(), json!(text.trim()));
        let output = if enriched_input {
            let tau = notation::parse_enriched(&text, r)?;
            let sigma = match name {
                MapName::LambdaInv => bijections::lambda_inv(&tau)?,
                _ => bijections::phi_star_inv(&tau)?,
            };
            sigma.to_string()
        } else {
            let sigma = notation::parse_permutation(&text)?;
            match name {
                MapName::Delta => {
                    let out = bijections::delta(&sigma, r)?;
                    record.insert("x".into(), json!(out.distinguished));
                    record.insert("rest".into(), json!(out.rest.to_string()));
                    format!("x={} {}", out.distinguished, out.rest)
                }
                MapName::DeltaInv => {
                    let x = x.expect("checked above");
                    record.insert("x".into(), json!(x));
                    bijections::delta_inv(x, &sigma, r)?.to_string()
                }
                MapName::Phi => bijections::phi(&sigma, r)?.to_string(),
                MapName::Alpha => bijections::alpha(&sigma, r)?.to_string(),
                MapName::Lambda => bijections::lambda(&sigma, r)?.to_string(),
                MapName::PhiStar => bijections::phi_star(&sigma, r)?.to_string(),
                MapName::Psi => {
                    let j = j.expect("checked above");
                    record.insert("j".into(), json!(j));
                    bijections::psi(&sigma, j, r)?.to_string()
                }
                MapName::PsiInv => {
                    let (rest, j) = bijections::psi_inv(&sigma, r)?;
                    record.insert("j".into(), json!(j));
                    record.insert("rest".into(), json!(rest.to_string()));
                    format!("j={j} {rest}")
                }
                MapName::LambdaInv | MapName::PhiStarInv => unreachable!(),
            }
        };
        match config.output {
            OutputFormat::Text => println!("{output}"),
            OutputFormat::Json => {
                record.insert("output".into(), json!(output));
                print_json(&Value::Object(record));
            }
        }
    }
    Ok(())
}

fn map_label(name: MapName) -> &'static str {
    match name {
        MapName::Delta => "delta",
        MapName::DeltaInv => "delta-inv",
        MapName::Phi => "phi",
        MapName::Alpha => "alpha",
        MapName::Lambda => "lambda",
        MapName::LambdaInv => "lambda-inv",
        MapName::PhiStar => "Phi",
        MapName::PhiStarInv => "Phi-inv",
        MapName::Psi => "psi",
        MapName::PsiInv => "psi-inv",
    }
}

pub fn root(config: &CliConfig, modulus: Modulus, permutation: Option<String>) -> CliResult {
    let r = resolve_modulus(modulus)?;
    if r < 2 {
        return usage(format!("r must be at least 2, got {r}"));
    }
    for text in inputs(permutation)? {
        let sigma = notation::parse_permutation(&text)?;
        let query = RootQuery::new(sigma.clone(), r);
        let verdict = query.has_root();
        let criterion = match query.factorization {
            Some(_) => "prime-power",
            None => "general",
        };
        let witness = if sigma.len() <= BRUTE_FORCE_LIMIT {
            let found =
                roots::find_root_bruteforce(&sigma, u64::from(r)).map_err(|e| CliError::Input(e.to_string()))?;
            if found.is_some() != verdict {
                return Err(CliError::Failed(format!(
                    "criterion says {verdict} but brute force says {} for {sigma}",
                    found.is_some()
                )));
            }
            found
        } else {
            None
        };
        match config.output {
            OutputFormat::Text => match (verdict, &witness) {
                (true, Some(w)) => println!("yes {w}"),
                (true, None) => println!("yes"),
                (false, _) => println!("no"),
            },
            OutputFormat::Json => print_json(&json!({
                "permutation": sigma.to_string(),
                "r": r,
                "has_root": verdict,
                "criterion": criterion,
                "witness": witness.map(|w| w.to_string()),
            })),
        }
    }
    Ok(())
}

/// A family selected on the command line, resolved against its parameters.
struct Resolved {
    label: String,
    params: Map<String, Value>,
    /// Enumerable family, if membership can be tested permutation by
    /// permutation.
    family: Option<Family>,
    /// Weight of each enumerated member; the enriched family counts every
    /// permutation once per coloring.
    enriched_r: Option<u32>,
}

fn need(value: Option<u32>, flag: &str, family: &str) -> Result<u32, CliError> {
    value.ok_or_else(|| CliError::Usage(format!("{family} needs --{flag}")))
}

fn parse_rho(text: Option<&str>) -> Result<CycleType, CliError> {
    let text = text.ok_or_else(|| CliError::Usage("s-rho needs --rho".into()))?;
    CycleType::parse(text).ok_or_else(|| CliError::Usage(format!("cannot parse cycle type {text:?}")))
}

fn resolve_family(a: &FamilyArgs) -> Result<Resolved, CliError> {
    let n = a.n;
    let mut params = Map::new();
    let mut put = |key: &str, v: Value| {
        params.insert(key.to_owned(), v);
    };
    let (family, enriched_r, name) = match a.family {
        FamilyName::Reg => {
            let r = need(a.r, "r", "reg")?;
            put("r", json!(r));
            (Some(Family::Regular { r, n }), None, "reg")
        }
        FamilyName::Cyc => {
            let r = need(a.r, "r", "cyc")?;
            put("r", json!(r));
            (Some(Family::Cycle { r, n }), None, "cyc")
        }
        FamilyName::EnrichedCyc => {
            let r = need(a.r, "r", "enriched-cyc")?;
            put("r", json!(r));
            (Some(Family::Cycle { r, n }), Some(r), "enriched-cyc")
        }
        FamilyName::NearlyRegular => {
            let r = need(a.r, "r", "nearly-regular")?;
            put("r", json!(r));
            (Some(Family::NearlyRegular { r, n }), None, "nearly-regular")
        }
        FamilyName::Q => {
            let r = need(a.r, "r", "q")?;
            let k = need(a.k, "k", "q")?;
            put("r", json!(r));
            put("k", json!(k));
            (Some(Family::FirstCycleLength { r, k, n }), None, "q")
        }
        FamilyName::OddFirstOdd => {
            let k = need(a.k, "k", "odd-first-odd")?;
            put("k", json!(k));
            (Some(Family::OddFirstOdd { n, k }), None, "odd-first-odd")
        }
        FamilyName::OddFirstEven => {
            let k = need(a.k, "k", "odd-first-even")?;
            put("k", json!(k));
            (Some(Family::OddFirstEven { n, k }), None, "odd-first-even")
        }
        FamilyName::CycQr => {
            let q = need(a.q, "q", "cyc-qr")?;
            let r = need(a.r, "r", "cyc-qr")?;
            put("q", json!(q));
            put("r", json!(r));
            (Some(Family::QrDivisible { q, r, n }), None, "cyc-qr")
        }
        FamilyName::SRho => {
            let q = need(a.q, "q", "s-rho")?;
            let rho = parse_rho(a.rho.as_deref())?;
            put("q", json!(q));
            put("rho", json!(rho.to_string()));
            (Some(Family::SingularType { rho, q, n }), None, "s-rho")
        }
        FamilyName::Roots => {
            let r = need(a.r, "r", "roots")?;
            put("r", json!(r));
            (Some(Family::WithRoot { r, n }), None, "roots")
        }
    };
    params.insert("n".into(), json!(n));
    if let Some(f) = &family {
        f.validate()?;
    }
    Ok(Resolved {
        label: name.to_owned(),
        params,
        family,
        enriched_r,
    })
}

fn closed_form(a: &FamilyArgs, method: Method) -> Result<Option<BigUint>, CliError> {
    let n = a.n;
    let r = a.r.unwrap_or(0);
    let k = a.k.unwrap_or(0);
    let value = match (a.family, method) {
        (FamilyName::Reg, m) => counting::count_reg(r, n, m)?,
        (FamilyName::Cyc, m) => counting::count_cyc(r, n, m)?,
        (FamilyName::EnrichedCyc, Method::Formula) => {
            if !n.is_multiple_of(r) {
                BigUint::default()
            } else {
                counting::count_enriched_cyc(r, n)?
            }
        }
        (FamilyName::Q, Method::Formula) => counting::count_q_family(r, k, n)?,
        (FamilyName::NearlyRegular, Method::Formula) => {
            // the first cycle has some r-singular length k
            let mut total = BigUint::default();
            let mut len = r;
            while len <= n {
                total += counting::count_q_family(r, len, n)?;
                len += r;
            }
            total
        }
        (FamilyName::OddFirstOdd, Method::Formula) => counting::count_odd_first(n, k, FirstParity::Odd)?,
        (FamilyName::OddFirstEven, Method::Formula) => counting::count_odd_first(n, k, FirstParity::Even)?,
        (FamilyName::CycQr, Method::Formula) => counting::count_cyc_qr(a.q.unwrap_or(0), r, n)?,
        (FamilyName::SRho, Method::Formula) => {
            counting::count_s_rho_q(&parse_rho(a.rho.as_deref())?, a.q.unwrap_or(0), n)?
        }
        (FamilyName::Roots, Method::Formula) => counting::count_roots(r, n)?,
        _ => return Ok(None),
    };
    Ok(Some(value))
}

fn enumerated(resolved: &Resolved, bound: u32) -> Result<BigUint, CliError> {
    let family = resolved.family.as_ref().expect("every family is enumerable");
    let members = family::enumerate(family, bound)?;
    Ok(match resolved.enriched_r {
        Some(r) => members.map(|p| BigUint::from(r - 1).pow(p.num_cycles() as u32)).sum(),
        None => BigUint::from(members.count()),
    })
}

pub fn count(config: &CliConfig, a: &FamilyArgs, method: MethodName) -> CliResult {
    let resolved = resolve_family(a)?;
    let bound = config.enumeration_bound;
    let wanted: &[(&str, MethodName)] = &[
        ("formula", MethodName::Formula),
        ("recurrence", MethodName::Recurrence),
        ("enumerate", MethodName::Enumerate),
    ];
    let mut values: Vec<(&str, BigUint)> = Vec::new();
    for &(label, m) in wanted {
        if method != MethodName::All && method != m {
            continue;
        }
        let value = match m {
            MethodName::Formula => closed_form(a, Method::Formula)?,
            MethodName::Recurrence => closed_form(a, Method::Recurrence)?,
            _ if a.n > bound && method == MethodName::All => None,
            _ => Some(enumerated(&resolved, bound)?),
        };
        match value {
            Some(v) => values.push((label, v)),
            None if method != MethodName::All => {
                return usage(format!("{} has no {label} method", resolved.label));
            }
            None => {}
        }
    }
    let value = values[0].1.clone();
    let agree = values.iter().all(|(_, v)| *v == value);
    match config.output {
        OutputFormat::Text => {
            if values.len() == 1 {
                println!("{value}");
            } else {
                for (label, v) in &values {
                    println!("{label}: {v}");
                }
            }
        }
        OutputFormat::Json => {
            let methods: Map<String, Value> = values
                .iter()
                .map(|(l, v)| ((*l).to_owned(), json!(v.to_string())))
                .collect();
            print_json(&json!({
                "family": resolved.label,
                "params": resolved.params,
                "methods": methods,
                "value": value.to_string(),
            }));
        }
    }
    if !agree {
        return Err(CliError::Failed(format!("methods disagree for {}", resolved.label)));
    }
    Ok(())
}

pub fn prob(config: &CliConfig, modulus: Modulus, n: u32, kind: ProbKind, method: MethodName) -> CliResult {
    let r = resolve_modulus(modulus)?;
    let bound = config.enumeration_bound;
    let total = counting::factorial(u64::from(n));
    let family = match kind {
        ProbKind::Roots => Family::WithRoot { r, n },
        ProbKind::Regular => Family::Regular { r, n },
    };
    family.validate()?;
    let mut values: Vec<(&str, BigRational)> = Vec::new();
    if matches!(method, MethodName::Formula | MethodName::All) {
        let q = match kind {
            ProbKind::Roots => counting::prob_root(r, n)?,
            ProbKind::Regular => counting::regular_proportion(r, n)?,
        };
        values.push(("formula", q));
    }
    if method == MethodName::Recurrence {
        match kind {
            ProbKind::Regular => values.push((
                "recurrence",
                counting::ratio(counting::count_reg(r, n, Method::Recurrence)?, total.clone()),
            )),
            ProbKind::Roots => return usage("the root probability has no recurrence method"),
        }
    }
    let enumerate = match method {
        MethodName::Enumerate => true,
        MethodName::All => n <= bound && (kind == ProbKind::Regular || n as usize <= BRUTE_FORCE_LIMIT),
        _ => false,
    };
    if enumerate {
        let members = BigUint::from(family::enumerate(&family, bound)?.count());
        values.push(("enumerate", counting::ratio(members, total)));
    }
    let value = values[0].1.clone();
    let agree = values.iter().all(|(_, v)| *v == value);
    match config.output {
        OutputFormat::Text => {
            if values.len() == 1 {
                println!("{value}");
            } else {
                for (label, v) in &values {
                    println!("{label}: {v}");
                }
            }
        }
        OutputFormat::Json => {
            let methods: Map<String, Value> = values
                .iter()
                .map(|(l, v)| ((*l).to_owned(), rational_json(v)))
                .collect();
            let label = match kind {
                ProbKind::Roots => "roots",
                ProbKind::Regular => "regular",
            };
            print_json(&json!({
                "family": label,
                "params": { "r": r, "n": n },
                "methods": methods,
                "value": rational_json(&value),
            }));
        }
    }
    if !agree {
        return Err(CliError::Failed("methods disagree".into()));
    }
    Ok(())
}

pub fn enumerate(config: &CliConfig, a: &FamilyArgs) -> CliResult {
    let resolved = resolve_family(a)?;
    let family = resolved.family.as_ref().expect("every family is enumerable");
    for p in family::enumerate(family, config.enumeration_bound)? {
        match config.output {
            OutputFormat::Text => println!("{p}"),
            OutputFormat::Json => print_json(&Parsed::Plain(p).to_json()),
        }
    }
    Ok(())
}

pub fn verify(
    config: &CliConfig,
    suite: Option<&str>,
    list: bool,
    assignments: &[String],
    output: Option<&Path>,
    golden: Option<&Path>,
) -> CliResult {
    if list {
        for info in verify::SUITES {
            match config.output {
                OutputFormat::Text => println!("{:<20} {}", info.id, info.description),
                OutputFormat::Json => print_json(&json!({
                    "id": info.id,
                    "properties": info.properties,
                    "params": info.params,
                    "description": info.description,
                })),
            }
        }
        return Ok(());
    }
    let suite = suite.expect("clap requires --suite without --list");
    let mut grid = Grid::new();
    for a in assignments {
        grid.set_assignment(a)?;
    }
    let reports = verify::run_suite_with_jobs(suite, &grid, config.parallelism)?;
    let text = verify::reports_to_json(&reports);
    match config.output {
        OutputFormat::Text => {
            for r in &reports {
                println!("{r}");
                if let Some(c) = &r.counterexample {
                    println!("  counterexample: {c}");
                }
            }
        }
        OutputFormat::Json => print!("{text}"),
    }
    if let Some(path) = output {
        std::fs::write(path, &text).map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?;
    }
    if let Some(golden) = golden {
        let scratch;
        let report_path = match output {
            Some(p) => p,
            None => {
                scratch = tempfile::NamedTempFile::new()?;
                std::fs::write(scratch.path(), &text)?;
                scratch.path()
            }
        };
        let cmp = verify::golden_compare(report_path, golden).map_err(|e| CliError::Input(e.to_string()))?;
        if !cmp.equal {
            return Err(CliError::Failed(format!(
                "reports differ from {} at {}",
                golden.display(),
                cmp.first_difference.unwrap_or_default()
            )));
        }
    }
    let failed: Vec<&str> = reports
        .iter()
        .filter(|r| !r.passed())
        .map(|r| r.property_id.as_str())
        .collect();
    if !failed.is_empty() {
        return Err(CliError::Failed(failed.join(", ")));
    }
    Ok(())
}

pub fn oeis(config: &CliConfig, id: &str, source: SourceName, check: bool, upto: Option<u64>) -> CliResult {
    let id: OeisId = id.parse()?;
    let network_opt_in = source == SourceName::Network || std::env::var(NETWORK_ENV).is_ok_and(|v| v == "1");
    if source == SourceName::Network && config.offline {
        return usage("--offline forbids --source network");
    }
    let client = OeisClient::from_env().with_network(network_opt_in && !config.offline);
    let source = match source {
        SourceName::Fixture => Source::Fixture,
        SourceName::Cache => Source::Cache,
        SourceName::Network => Source::Network,
    };
    let seq = client.fetch(&id, source)?;
    if !check {
        match config.output {
            OutputFormat::Text => {
                for (n, v) in &seq.terms {
                    println!("{n} {v}");
                }
            }
            OutputFormat::Json => {
                let terms: Vec<Value> = seq.terms.iter().map(|(n, v)| json!([n, v.to_string()])).collect();
                print_json(&json!({ "id": id.as_str(), "terms": terms }));
            }
        }
        return Ok(());
    }
    let generator =
        verify::builtin_generator(&id).ok_or_else(|| CliError::Usage(format!("no built-in generator for {id}")))?;
    let upto = upto.or(seq.last_index()).unwrap_or(0);
    let report = oeis::cross_check(&seq, generator, upto)?;
    match config.output {
        OutputFormat::Text => {
            println!("{report}");
            if let Some(c) = &report.counterexample {
                println!("  counterexample: {c}");
            }
        }
        OutputFormat::Json => print!("{}", verify::reports_to_json(std::slice::from_ref(&report))),
    }
    if !report.passed() {
        return Err(CliError::Failed(report.property_id));
    }
    Ok(())
}

pub fn format(config: &CliConfig, r: Option<u32>, input: InputForm, permutation: Option<String>) -> CliResult {
    for text in inputs(permutation)? {
        let parsed = match input {
            InputForm::Text => notation::parse(&text, r)?,
            InputForm::Json => Parsed::from_json(&text)?,
        };
        match config.output {
            OutputFormat::Text => println!("{parsed}"),
            OutputFormat::Json => print_json(&parsed.to_json()),
        }
    }
    Ok(())
}
