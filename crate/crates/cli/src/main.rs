//! `permroot`: bijections, root queries, exact counts and verification
//! suites for permutations, from the command line.
//!
//! Exit status: 0 on success, 1 when a verification fails, 2 on a usage or
//! input error.

mod commands;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "permroot",
    version,
    about = "Regular/singular cycle bijections, roots and exact counts of permutations"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    /// Worker threads for verification suites; output does not depend on it.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    jobs: u32,
    /// Never touch the network.
    #[arg(long, global = true)]
    offline: bool,
    /// Largest n for which families are enumerated over S_n.
    #[arg(long, global = true, default_value_t = permroot::family::DEFAULT_ENUMERATION_BOUND,
          value_parser = clap::value_parser!(u32).range(1..))]
    enumeration_bound: u32,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

/// Settings shared by every subcommand.
#[derive(Debug, Clone, Copy)]
pub struct CliConfig {
    pub enumeration_bound: u32,
    pub parallelism: usize,
    pub output: OutputFormat,
    pub offline: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Apply one of the maps to permutations given as an argument or on
    /// standard input, one per line.
    Map(MapArgs),
    /// Decide whether a permutation has an r-th root, with a witness when
    /// n <= 8.
    Root(RootArgs),
    /// Exact size of a family, by every available method.
    Count(CountArgs),
    /// Exact probability p_r(n) that a random permutation of [n] has an
    /// r-th root.
    Prob(ProbArgs),
    /// List the members of a family on [n].
    Enumerate(FamilyArgs),
    /// Run a named verification suite.
    Verify(VerifyArgs),
    /// Read an OEIS b-file and optionally cross-check it.
    Oeis(OeisArgs),
    /// Rewrite permutations in canonical cycle notation.
    Format(FormatArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MapName {
    #[value(name = "delta")]
    Delta,
    #[value(name = "delta-inv")]
    DeltaInv,
    #[value(name = "phi")]
    Phi,
    #[value(name = "alpha")]
    Alpha,
    #[value(name = "lambda")]
    Lambda,
    #[value(name = "lambda-inv")]
    LambdaInv,
    #[value(name = "Phi")]
    PhiStar,
    #[value(name = "Phi-inv")]
    PhiStarInv,
    #[value(name = "psi")]
    Psi,
    #[value(name = "psi-inv")]
    PsiInv,
}

#[derive(Debug, Args)]
struct MapArgs {
    #[arg(value_enum)]
    map: MapName,
    #[arg(long)]
    r: u32,
    /// Point to insert, for delta-inv.
    #[arg(long)]
    x: Option<u32>,
    /// Label to insert, for psi.
    #[arg(long)]
    j: Option<u32>,
    /// Cycle notation; read from standard input when omitted.
    permutation: Option<String>,
}

#[derive(Debug, Args)]
struct RootArgs {
    #[command(flatten)]
    modulus: Modulus,
    permutation: Option<String>,
}

/// `r` given directly, or as `q^l`.
#[derive(Debug, Args, Clone, Copy)]
pub struct Modulus {
    #[arg(long)]
    r: Option<u32>,
    #[arg(long, requires = "l", conflicts_with = "r")]
    q: Option<u32>,
    #[arg(long, requires = "q")]
    l: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyName {
    /// Reg_r(n): no cycle length divisible by r.
    Reg,
    /// Cyc_r(n): every cycle length divisible by r.
    Cyc,
    /// Cyc*_r(n): r-cycle permutations with each cycle colored 1..r-1.
    EnrichedCyc,
    /// NReg_r(n): first cycle r-singular, the rest r-regular.
    NearlyRegular,
    /// Q_{r,k}(n): first cycle of length k, the rest r-regular.
    Q,
    /// Odd cycles, the first of length 2k-1.
    OddFirstOdd,
    /// Odd cycles except the first, of length 2k.
    OddFirstEven,
    /// Cyc_{q,r}(n): lengths multiples of q, multiplicities multiples of r.
    CycQr,
    /// S_{rho,q}(n): q-singular part of cycle type rho.
    SRho,
    /// S_n^r: permutations with an r-th root.
    Roots,
}

#[derive(Debug, Args)]
pub struct FamilyArgs {
    #[arg(value_enum)]
    family: FamilyName,
    #[arg(long)]
    r: Option<u32>,
    #[arg(long)]
    q: Option<u32>,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    n: u32,
    /// Cycle type such as "1^2,4^2".
    #[arg(long)]
    rho: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodName {
    Formula,
    Recurrence,
    Enumerate,
    /// Every method the family supports; enumeration only up to the bound.
    All,
}

#[derive(Debug, Args)]
struct CountArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long, value_enum, default_value_t = MethodName::All)]
    method: MethodName,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProbKind {
    /// p_r(n), the probability of having an r-th root.
    Roots,
    /// The proportion of r-regular permutations.
    Regular,
}

#[derive(Debug, Args)]
struct ProbArgs {
    #[command(flatten)]
    modulus: Modulus,
    #[arg(long)]
    n: u32,
    #[arg(long, value_enum, default_value_t = ProbKind::Roots)]
    of: ProbKind,
    #[arg(long, value_enum, default_value_t = MethodName::All)]
    method: MethodName,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Suite id, or "all".
    #[arg(long, required_unless_present = "list")]
    suite: Option<String>,
    /// List the registered suites.
    #[arg(long)]
    list: bool,
    /// Parameter lists such as "2,3" or "1..8".
    #[arg(long)]
    r: Option<String>,
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    q: Option<String>,
    #[arg(long)]
    k: Option<String>,
    #[arg(long)]
    m: Option<String>,
    /// Any other grid parameter, as key=values.
    #[arg(long = "param")]
    params: Vec<String>,
    /// Write the JSON reports to this file.
    #[arg(long)]
    output: Option<std::path::PathBuf>,
    /// Compare the JSON reports with this golden file.
    #[arg(long)]
    golden: Option<std::path::PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SourceName {
    Fixture,
    Cache,
    Network,
}

#[derive(Debug, Args)]
struct OeisArgs {
    #[arg(long)]
    id: String,
    #[arg(long, value_enum, default_value_t = SourceName::Fixture)]
    source: SourceName,
    /// Compare with the counts this library computes for the sequence.
    #[arg(long)]
    check: bool,
    /// Largest index compared by --check.
    #[arg(long)]
    upto: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InputForm {
    Text,
    Json,
}

#[derive(Debug, Args)]
struct FormatArgs {
    /// Colors are allowed when r is given.
    #[arg(long)]
    r: Option<u32>,
    #[arg(long, value_enum, default_value_t = InputForm::Text)]
    input: InputForm,
    permutation: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = CliConfig {
        enumeration_bound: cli.enumeration_bound,
        parallelism: cli.jobs as usize,
        output: cli.format,
        offline: cli.offline,
    };
    let result = match cli.command {
        Command::Map(a) => commands::map(&config, a.map, a.r, a.x, a.j, a.permutation),
        Command::Root(a) => commands::root(&config, a.modulus, a.permutation),
        Command::Count(a) => commands::count(&config, &a.family, a.method),
        Command::Prob(a) => commands::prob(&config, a.modulus, a.n, a.of, a.method),
        Command::Enumerate(a) => commands::enumerate(&config, &a),
        Command::Verify(a) => {
            let mut assignments = a.params.clone();
            for (key, value) in [("r", &a.r), ("n", &a.n), ("q", &a.q), ("k", &a.k), ("m", &a.m)] {
                if let Some(v) = value {
                    assignments.push(format!("{key}={v}"));
                }
            }
            commands::verify(
                &config,
                a.suite.as_deref(),
                a.list,
                &assignments,
                a.output.as_deref(),
                a.golden.as_deref(),
            )
        }
        Command::Oeis(a) => commands::oeis(&config, &a.id, a.source, a.check, a.upto),
        Command::Format(a) => commands::format(&config, a.r, a.input, a.permutation),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("permroot: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
