//! Best-subset search per rank and the pair-breaking experiment.

use std::collections::BTreeMap;
use std::io::Write;
use std::ops::RangeInclusive;

use serde::Serialize;

use super::distance::{min_distance, min_distance_exhaustive, DistanceResult, SearchConfig};
use super::{build_code, classify_pairing, griesmer_max_d, CyclicCodeSpec, PairingClass};
use crate::engine::Factorization;
use crate::error::{Error, Result};

/// One CSV row: a code, its pairing class and its measured distance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CodeRow {
    pub p: u64,
    pub rank: usize,
    pub log_size: u64,
    pub subset_bitmask: u64,
    pub pairing_class: &'static str,
    pub d: u64,
    pub method: &'static str,
    pub samples: u64,
    pub griesmer_2k: u64,
    pub griesmer_k: u64,
}

impl CodeRow {
    fn new(f: &Factorization, code: &CyclicCodeSpec, dist: &DistanceResult) -> Self {
        let pairing = classify_pairing(&code.factor_indices, f).class();
        Self {
            p: code.p,
            rank: code.rank,
            log_size: code.gray.log_size,
            subset_bitmask: code.bitmask(),
            pairing_class: pairing.as_str(),
            d: dist.d,
            method: dist.method.as_str(),
            samples: dist.samples_used,
            griesmer_2k: code.gray.griesmer_d,
            griesmer_k: griesmer_max_d(code.gray.length, code.rank as u64, code.p),
        }
    }
}

fn subset_of(mask: u64, nf: usize) -> Vec<usize> {
    (0..nf).filter(|i| mask >> i & 1 == 1).collect()
}

/// For each rank in `ranks`, the subset with the largest distance (ties to
/// the smallest bitmask). Ranks no subset reaches are skipped.
pub fn search_codes(
    f: &Factorization,
    ranks: RangeInclusive<usize>,
    cfg: &SearchConfig,
) -> Result<Vec<CodeRow>> {
    let n = f.prime() as usize + 1;
    if ranks.is_empty() || *ranks.start() == 0 || *ranks.end() >= n {
        return Err(Error::InvalidArgument(format!(
            "rank range {}..{} outside 1..{}",
            ranks.start(),
            ranks.end(),
            n - 1
        )));
    }
    let nf = f.factors().len();
    if nf >= 64 {
        return Err(Error::InvalidArgument(format!(
            "{nf} factors are too many to enumerate subsets"
        )));
    }
    let mut by_rank: BTreeMap<usize, Vec<CyclicCodeSpec>> = BTreeMap::new();
    for mask in 1..(1u64 << nf) - 1 {
        let code = build_code(f, &subset_of(mask, nf))?;
        if ranks.contains(&code.rank) {
            by_rank.entry(code.rank).or_default().push(code);
        }
    }
    let mut rows = Vec::new();
    for codes in by_rank.values() {
        let mut best: Option<(CodeRow, u64)> = None;
        for code in codes {
            let dist = min_distance(code, cfg)?;
            if best.as_ref().is_none_or(|(_, d)| dist.d > *d) {
                best = Some((CodeRow::new(f, code, &dist), dist.d));
            }
        }
        rows.extend(best.map(|(row, _)| row));
    }
    Ok(rows)
}

/// Every subset that leaves out exactly two factors, by ascending bitmask,
/// with its exact distance.
pub fn symmetry_experiment(f: &Factorization, cfg: &SearchConfig) -> Result<Vec<CodeRow>> {
    let nf = f.factors().len();
    if !(3..64).contains(&nf) {
        return Err(Error::InvalidArgument(format!(
            "{nf} factors cannot form the experiment"
        )));
    }
    let mut rows = Vec::new();
    for mask in 0..1u64 << nf {
        if mask.count_ones() as usize != nf - 2 {
            continue;
        }
        let code = build_code(f, &subset_of(mask, nf))?;
        let dist = min_distance_exhaustive(&code, cfg.workers, cfg.budget)?;
        rows.push(CodeRow::new(f, &code, &dist));
    }
    Ok(rows)
}

/// Largest intact distance against smallest broken distance within one rank.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Dichotomy {
    pub rank: usize,
    pub max_intact: Option<u64>,
    pub min_broken: Option<u64>,
}

impl Dichotomy {
    /// Every broken selection beats every intact one.
    pub fn separates(&self) -> bool {
        match (self.max_intact, self.min_broken) {
            (Some(i), Some(b)) => i < b,
            _ => true,
        }
    }
}

pub fn dichotomy(rows: &[CodeRow], rank: usize) -> Dichotomy {
    let within = |class: PairingClass| {
        rows.iter()
            .filter(move |r| r.rank == rank && r.pairing_class == class.as_str())
            .map(|r| r.d)
    };
    Dichotomy {
        rank,
        max_intact: within(PairingClass::Intact).max(),
        min_broken: within(PairingClass::Broken).min(),
    }
}

pub fn write_code_csv<W: Write>(rows: &[CodeRow], out: W) -> Result<()> {
    let io = |e: csv::Error| Error::InvalidArgument(format!("csv output: {e}"));
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r).map_err(io)?;
    }
    if rows.is_empty() {
        w.write_record([
            "p",
            "rank",
            "log_size",
            "subset_bitmask",
            "pairing_class",
            "d",
            "method",
            "samples",
            "griesmer_2k",
            "griesmer_k",
        ])
        .map_err(io)?;
    }
    w.flush()
        .map_err(|e| Error::InvalidArgument(format!("csv output: {e}")))
}
