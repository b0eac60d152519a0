use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use dickson_core::engine::{Mode, DEFAULT_SEED};

/// Factor x^(p+1) - 1 over Z/p^e and search cyclic LCD codes over Z/p^2.
#[derive(Debug, Parser)]
#[command(name = "dickson", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Factor x^(p+1) - 1 over Z/p^e and print the factorization as JSON.
    Factor(FactorArgs),
    /// Lift selected conjugate pairs only (targeted mode).
    Lift(LiftArgs),
    /// Check a factorization JSON document by exact multiplication.
    Verify(VerifyArgs),
    /// Time the engine against the Cantor-Zassenhaus + Hensel baseline.
    Bench(BenchArgs),
    /// Minimum-distance search over generator subsets for codes over Z/p^2.
    Codes(CodesArgs),
}

/// A fixed seed, or `random` for one drawn from the OS.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeedArg {
    Fixed(u64),
    Random,
}

impl SeedArg {
    pub fn resolve(self) -> u64 {
        match self {
            SeedArg::Fixed(s) => s,
            SeedArg::Random => rand::random(),
        }
    }
}

impl FromStr for SeedArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "random" {
            return Ok(SeedArg::Random);
        }
        s.parse()
            .map(SeedArg::Fixed)
            .map_err(|_| format!("expected an unsigned integer or \"random\", got {s:?}"))
    }
}

/// `A..B` (inclusive) or a single value `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Span(pub RangeInclusive<u64>);

impl FromStr for Span {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let num = |t: &str| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| format!("expected N or A..B, got {s:?}"))
        };
        match s.split_once("..") {
            Some((a, b)) => {
                let b = b.strip_prefix('=').unwrap_or(b);
                let (a, b) = (num(a)?, num(b)?);
                if a > b {
                    return Err(format!("empty range {s:?}"));
                }
                Ok(Span(a..=b))
            }
            None => {
                let a = num(s)?;
                Ok(Span(a..=a))
            }
        }
    }
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse().map_err(|e: dickson_core::Error| e.to_string())
}

#[derive(Debug, Args)]
pub struct FactorArgs {
    /// Odd prime p.
    #[arg(long)]
    pub p: u64,
    /// Precision exponent e (ring Z/p^e).
    #[arg(long, default_value_t = 1)]
    pub e: u32,
    /// generator or targeted.
    #[arg(long, default_value = "generator", value_parser = parse_mode)]
    pub mode: Mode,
    /// Pair indices for targeted mode, comma separated (default: all).
    #[arg(long, value_delimiter = ',')]
    pub indices: Option<Vec<usize>>,
    /// Seed for the primitive-quadratic search, or "random".
    #[arg(long, default_value_t = SeedArg::Fixed(DEFAULT_SEED))]
    pub seed: SeedArg,
    /// Skip the product check.
    #[arg(long)]
    pub no_verify: bool,
    /// Write JSON here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LiftArgs {
    /// Odd prime p.
    #[arg(long)]
    pub p: u64,
    /// Target precision exponent e.
    #[arg(long)]
    pub e: u32,
    /// Pair indices to lift, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub index: Vec<usize>,
    /// Seed for the primitive-quadratic search, or "random".
    #[arg(long, default_value_t = SeedArg::Fixed(DEFAULT_SEED))]
    pub seed: SeedArg,
    /// Include S and A at every precision level.
    #[arg(long)]
    pub trace: bool,
    /// Write JSON here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Factorization JSON as written by `factor`.
    pub input: PathBuf,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Smallest prime of the sweep.
    #[arg(long, conflicts_with_all = ["p", "primes"])]
    pub pmin: Option<u64>,
    /// Largest prime of the sweep.
    #[arg(long, requires = "pmin")]
    pub pmax: Option<u64>,
    /// Primes in the sweep, spaced geometrically between pmin and pmax.
    #[arg(long, default_value_t = 8)]
    pub count: usize,
    /// Explicit comma-separated primes.
    #[arg(long, value_delimiter = ',')]
    pub primes: Option<Vec<u64>>,
    /// Single prime for a precision sweep over --e.
    #[arg(long)]
    pub p: Option<u64>,
    /// Precision: N, or A..B for a sweep (with --p).
    #[arg(long, default_value = "1")]
    pub e: Span,
    /// Timed rounds per point (median taken), after one discarded warm-up round.
    #[arg(long, default_value_t = 5)]
    pub reps: usize,
    /// First seed for the engine and baseline runs, or "random".
    #[arg(long, default_value_t = SeedArg::Fixed(1))]
    pub seed: SeedArg,
    /// Time only the engine.
    #[arg(long)]
    pub no_baseline: bool,
    /// CSV destination (default stdout).
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CodesArgs {
    /// Odd prime p; codes have length p + 1 over Z/p^2.
    #[arg(long)]
    pub p: u64,
    /// Ranks to search: N or A..B.
    #[arg(long, default_value = "1..2", conflicts_with = "symmetry")]
    pub rank: Span,
    /// Run the all-but-two-factors experiment instead of the rank search.
    #[arg(long)]
    pub symmetry: bool,
    /// Samples per code when exhaustive search is over budget.
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: u64,
    /// Sampling seed, or "random".
    #[arg(long, default_value_t = SeedArg::Fixed(7))]
    pub seed: SeedArg,
    /// Seed for the factorization (fixes the factor order).
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub factor_seed: u64,
    /// Worker threads (default: available parallelism).
    #[arg(long)]
    pub workers: Option<usize>,
    /// Exhaustive budget in raw messages (default: $DICKSON_BUDGET or 1e9).
    #[arg(long)]
    pub budget: Option<u128>,
    /// CSV destination (default stdout).
    #[arg(long)]
    pub output: Option<PathBuf>,
}

impl std::fmt::Display for SeedArg {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SeedArg::Fixed(s) => write!(f, "{s}"),
            SeedArg::Random => f.write_str("random"),
        }
    }
}
