//! Wall-clock comparison of the engine against the CZ + Hensel baseline.

use std::io::Write;
use std::time::Duration;

use cpu_time::ThreadTime;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::baseline_factor;
use crate::engine::{factor, FactorOptions};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct BenchConfig {
    /// Timed rounds per point, after one discarded warm-up round.
    pub repetitions: usize,
    pub seed: u64,
    /// Also time the baseline.
    pub baseline: bool,
    /// Calls are repeated until one measurement spans at least this much
    /// thread CPU time.
    pub min_batch: Duration,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            repetitions: 5,
            seed: 1,
            baseline: true,
            min_batch: Duration::from_millis(20),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub p: u64,
    pub e: u32,
    pub engine_ms: f64,
    pub baseline_ms: Option<f64>,
    pub ratio: Option<f64>,
}

fn median(mut times: Vec<f64>) -> f64 {
    times.sort_by(f64::total_cmp);
    let n = times.len();
    if n % 2 == 1 {
        times[n / 2]
    } else {
        (times[n / 2 - 1] + times[n / 2]) / 2.0
    }
}

/// Milliseconds per call for one batch: `call` runs with consecutive
/// counters from `*next` until the batch spans `min_batch`. Time is the
/// calling thread's CPU time, so host steal and preemption are not counted.
fn batch_ms<F: FnMut(u64) -> Result<()>>(min_batch: Duration, next: &mut u64, mut call: F) -> Result<f64> {
    let start = ThreadTime::now();
    let mut calls = 0u32;
    loop {
        call(*next)?;
        *next += 1;
        calls += 1;
        let elapsed = start.elapsed();
        if elapsed >= min_batch {
            return Ok(elapsed.as_secs_f64() * 1e3 / f64::from(calls));
        }
    }
}

/// Engine call: a cold primitive-quadratic search under a fresh seed, with
/// verification off.
fn engine_call(p: u64, e: u32, seed: u64) -> Result<()> {
    let opts = FactorOptions {
        seed,
        verify: false,
        ..FactorOptions::default()
    };
    factor(p, e, &opts).map(drop)
}

/// Times every `(p, e)` point. Each round visits all points once in a fresh
/// shuffled order, so a slowdown, even a periodic one, spoils at most a
/// sample or two per point instead of every sample of a few neighbours. The
/// first round is a discarded warm-up.
fn sweep(points: &[(u64, u32)], cfg: &BenchConfig) -> Result<Vec<BenchRow>> {
    let reps = cfg.repetitions.max(1);
    let mut engine = vec![Vec::with_capacity(reps); points.len()];
    let mut base = vec![Vec::with_capacity(reps); points.len()];
    let mut next_engine = vec![0u64; points.len()];
    let mut next_base = vec![0u64; points.len()];
    let mut order: Vec<usize> = (0..points.len()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for round in 0..=reps {
        order.shuffle(&mut rng);
        for &k in &order {
            let (p, e) = points[k];
            let t = batch_ms(cfg.min_batch, &mut next_engine[k], |j| {
                engine_call(p, e, cfg.seed.wrapping_add(j))
            })?;
            if round > 0 {
                engine[k].push(t);
            }
            if cfg.baseline {
                let t = batch_ms(cfg.min_batch, &mut next_base[k], |j| {
                    baseline_factor(p, e, cfg.seed.wrapping_add(j)).map(drop)
                })?;
                if round > 0 {
                    base[k].push(t);
                }
            }
        }
    }
    Ok(points
        .iter()
        .zip(engine.into_iter().zip(base))
        .map(|(&(p, e), (en, ba))| {
            let engine_ms = median(en);
            let baseline_ms = cfg.baseline.then(|| median(ba));
            BenchRow {
                p,
                e,
                engine_ms,
                baseline_ms,
                ratio: baseline_ms.map(|b| b / engine_ms),
            }
        })
        .collect())
}

/// One row per prime at fixed precision.
pub fn bench_suite(p_values: &[u64], e: u32, cfg: &BenchConfig) -> Result<Vec<BenchRow>> {
    if p_values.is_empty() {
        return Err(Error::InvalidArgument("empty prime sweep".into()));
    }
    let points: Vec<(u64, u32)> = p_values.iter().map(|&p| (p, e)).collect();
    sweep(&points, cfg)
}

/// One row per precision at a fixed prime.
pub fn bench_precision(p: u64, e_values: &[u32], cfg: &BenchConfig) -> Result<Vec<BenchRow>> {
    if e_values.is_empty() {
        return Err(Error::InvalidArgument("empty precision sweep".into()));
    }
    let points: Vec<(u64, u32)> = e_values.iter().map(|&e| (p, e)).collect();
    sweep(&points, cfg)
}

pub fn write_bench_csv<W: Write>(rows: &[BenchRow], out: W) -> Result<()> {
    let io = |e: csv::Error| Error::InvalidArgument(format!("csv output: {e}"));
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["p", "e", "engine_ms", "baseline_ms", "ratio"])
        .map_err(io)?;
    let opt = |v: Option<f64>, digits: usize| v.map(|v| format!("{v:.digits$}")).unwrap_or_default();
    for r in rows {
        w.write_record([
            r.p.to_string(),
            r.e.to_string(),
            format!("{:.6}", r.engine_ms),
            opt(r.baseline_ms, 6),
            opt(r.ratio, 2),
        ])
        .map_err(io)?;
    }
    w.flush()
        .map_err(|e| Error::InvalidArgument(format!("csv output: {e}")))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Fit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

/// Ordinary least squares `y = slope·x + intercept`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Fit {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    Fit {
        slope,
        intercept: my - slope * mx,
        r2: if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) },
    }
}

/// Least squares on `(ln x, ln y)`; the slope is the growth exponent.
pub fn loglog_fit(xs: &[f64], ys: &[f64]) -> Fit {
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    linear_fit(&lx, &ly)
}
