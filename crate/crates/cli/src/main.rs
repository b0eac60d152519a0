mod args;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use serde_json::{json, Value};

use args::{BenchArgs, Cli, CodesArgs, Command, FactorArgs, LiftArgs, VerifyArgs};
use dickson_core::arith::{is_prime, next_prime};
use dickson_core::baseline::{bench_precision, bench_suite, write_bench_csv, BenchConfig};
use dickson_core::engine::{factor, lift_trace, FactorDocument, FactorOptions, Mode};
use dickson_core::graycodes::{
    search_codes, symmetry_experiment, write_code_csv, SearchConfig, DEFAULT_BUDGET,
};
use dickson_core::Error;

/// Message and exit status: 1 for usage errors, 2 for failed checks.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            message: message.into(),
        }
    }

    fn check(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidPrime(p) => Failure::usage(format!("p must be an odd prime (got {p})")),
            Error::VerificationFailed { .. }
            | Error::IncompleteFactorization { .. }
            | Error::InternalInconsistency(_)
            | Error::IntegralityViolation { .. }
            | Error::SingularSeed { .. } => Failure::check(e.to_string()),
            other => Failure::usage(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| Failure::usage(format!("{}: {e}", p.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn emit_json(doc: &Value, path: Option<&Path>) -> Outcome {
    let mut out = sink(path)?;
    serde_json::to_writer_pretty(&mut out, doc).map_err(|e| Failure::usage(e.to_string()))?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

fn check_e(e: u32) -> Outcome {
    if e == 0 {
        return Err(Failure::usage("e must be at least 1"));
    }
    Ok(())
}

fn cmd_factor(a: FactorArgs) -> Outcome {
    check_e(a.e)?;
    if a.indices.is_some() && a.mode != Mode::Targeted {
        return Err(Failure::usage("--indices requires --mode targeted"));
    }
    let opts = FactorOptions {
        mode: a.mode,
        indices: a.indices,
        seed: a.seed.resolve(),
        verify: !a.no_verify,
        primitive: None,
    };
    let f = factor(a.p, a.e, &opts)?;
    emit_json(&f.to_json(), a.output.as_deref())
}

fn cmd_lift(a: LiftArgs) -> Outcome {
    check_e(a.e)?;
    let opts = FactorOptions {
        seed: a.seed.resolve(),
        ..FactorOptions::targeted(a.index.clone())
    };
    let f = factor(a.p, a.e, &opts)?;
    let mut doc = f.to_json();
    if a.trace {
        let mut traces = Vec::new();
        for &i in f.indices() {
            let steps: Vec<Value> = lift_trace(a.p, a.e, i, &opts)?
                .iter()
                .map(|s| {
                    json!({
                        "level": s.level,
                        "s": s.s.to_string().parse::<serde_json::Number>().unwrap(),
                        "a": s.a.to_string().parse::<serde_json::Number>().unwrap(),
                    })
                })
                .collect();
            traces.push(json!({ "index": i, "steps": steps }));
        }
        doc["trace"] = Value::Array(traces);
    }
    emit_json(&doc, a.output.as_deref())
}

fn cmd_verify(a: VerifyArgs) -> Outcome {
    let text = std::fs::read_to_string(&a.input)
        .map_err(|e| Failure::usage(format!("{}: {e}", a.input.display())))?;
    let doc: Value =
        serde_json::from_str(&text).map_err(|e| Failure::usage(format!("malformed JSON: {e}")))?;
    let parsed = FactorDocument::parse(&doc)?;
    if parsed.verify()? {
        println!(
            "ok: product equals x^{} - 1 over {}",
            parsed.modulus.prime() + 1,
            parsed.modulus
        );
        Ok(())
    } else {
        Err(Failure::check(format!(
            "product does not equal x^{} - 1 over {}",
            parsed.modulus.prime() + 1,
            parsed.modulus
        )))
    }
}

/// `count` primes spread geometrically over `[lo, hi]`, ascending, distinct.
fn prime_sweep(lo: u64, hi: u64, count: usize) -> Vec<u64> {
    let lo = lo.max(3);
    if lo > hi || count == 0 {
        return Vec::new();
    }
    let mut out: Vec<u64> = (0..count)
        .map(|i| {
            let t = if count == 1 {
                0.0
            } else {
                i as f64 / (count - 1) as f64
            };
            let x = (lo as f64) * (hi as f64 / lo as f64).powf(t);
            next_prime(x.round() as u64)
        })
        .filter(|&q| q <= hi)
        .collect();
    out.dedup();
    out
}

fn cmd_bench(a: BenchArgs) -> Outcome {
    let cfg = BenchConfig {
        repetitions: a.reps.max(1),
        seed: a.seed.resolve(),
        baseline: !a.no_baseline,
        ..BenchConfig::default()
    };
    let (e_lo, e_hi) = (*a.e.0.start(), *a.e.0.end());
    if e_lo == 0 || e_hi > u64::from(u32::MAX) {
        return Err(Failure::usage("e must be at least 1"));
    }
    let rows = match (a.p, a.pmin, &a.primes) {
        (Some(p), _, _) => {
            let es: Vec<u32> = (e_lo as u32..=e_hi as u32).collect();
            bench_precision(p, &es, &cfg)?
        }
        (None, pmin, primes) => {
            if e_lo != e_hi {
                return Err(Failure::usage("an e range needs --p"));
            }
            let ps = match (pmin, primes) {
                (Some(lo), _) => prime_sweep(lo, a.pmax.unwrap_or(lo), a.count),
                (None, Some(list)) => list.clone(),
                (None, None) => return Err(Failure::usage("give --pmin/--pmax, --primes or --p")),
            };
            if ps.is_empty() {
                return Err(Failure::usage("the prime sweep is empty"));
            }
            if let Some(&bad) = ps.iter().find(|&&q| q % 2 == 0 || !is_prime(q)) {
                return Err(Failure::usage(format!("p must be an odd prime (got {bad})")));
            }
            bench_suite(&ps, e_lo as u32, &cfg)?
        }
    };
    let out = sink(a.output.as_deref())?;
    write_bench_csv(&rows, out)?;
    Ok(())
}

fn budget(flag: Option<u128>) -> Result<u128, Failure> {
    if let Some(b) = flag {
        return Ok(b);
    }
    match std::env::var("DICKSON_BUDGET") {
        Ok(v) => v
            .trim()
            .parse::<f64>()
            .ok()
            .filter(|b| b.is_finite() && *b >= 0.0)
            .map(|b| b as u128)
            .ok_or_else(|| Failure::usage(format!("DICKSON_BUDGET must be a number, got {v:?}"))),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn cmd_codes(a: CodesArgs) -> Outcome {
    let cfg = SearchConfig {
        workers: a
            .workers
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, usize::from))
            .max(1),
        budget: budget(a.budget)?,
        samples: a.samples,
        rng_seed: a.seed.resolve(),
    };
    if cfg.samples == 0 {
        return Err(Failure::usage("--samples must be at least 1"));
    }
    let opts = FactorOptions {
        seed: a.factor_seed,
        ..FactorOptions::default()
    };
    let f = factor(a.p, 2, &opts)?;
    let rows = if a.symmetry {
        symmetry_experiment(&f, &cfg)?
    } else {
        let (lo, hi) = (*a.rank.0.start() as usize, *a.rank.0.end() as usize);
        search_codes(&f, lo..=hi, &cfg)?
    };
    let out = sink(a.output.as_deref())?;
    write_code_csv(&rows, out)?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let outcome = match cli.command {
        Command::Factor(a) => cmd_factor(a),
        Command::Lift(a) => cmd_lift(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Codes(a) => cmd_codes(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
