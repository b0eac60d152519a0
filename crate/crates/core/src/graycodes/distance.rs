//! Minimum homogeneous weight of a cyclic code over `Z/p^2`.
//!
//! Codewords are `u·g` with `deg u < rank`, so `deg(u·g) < n` and no reduction
//! modulo `x^n - 1` is needed. Scaling by a unit preserves the weight, so the
//! exhaustive search only visits messages whose first nonzero coordinate is
//! `1` or `p`.

use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{weight_of, CyclicCodeSpec};
use crate::error::{Error, Result};

/// Raw message count `p^{2·rank}` allowed for exhaustive search.
pub const DEFAULT_BUDGET: u128 = 1_000_000_000;

/// Samples per independent RNG stream.
pub const SAMPLE_CHUNK: u64 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Exhaustive,
    /// Minimum over random codewords: an upper bound on the true distance.
    Sampled,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Exhaustive => "exhaustive",
            Method::Sampled => "sampled",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DistanceResult {
    pub d: u64,
    pub method: Method,
    /// Codewords evaluated (orbit representatives when exhaustive).
    pub samples_used: u64,
    pub rng_seed: Option<u64>,
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub workers: usize,
    pub budget: u128,
    /// Samples per code when the exhaustive budget is exceeded.
    pub samples: u64,
    pub rng_seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            workers: std::thread::available_parallelism().map_or(1, usize::from),
            budget: DEFAULT_BUDGET,
            samples: 1_000_000,
            rng_seed: 7,
        }
    }
}

/// Everything a worker needs, in plain integers.
struct Kernel {
    p: u64,
    m: u64,
    n: usize,
    rank: usize,
    g: Vec<u64>,
    /// Homogeneous weight by residue when `m` is small enough to tabulate.
    table: Option<Vec<u8>>,
}

impl Kernel {
    fn new(code: &CyclicCodeSpec) -> Self {
        let p = code.p;
        let m = p * p;
        let table = (m <= 1 << 22 && p < 256).then(|| (0..m).map(|v| weight_of(v, p) as u8).collect());
        Self {
            p,
            m,
            n: code.n,
            rank: code.rank,
            g: code.g_residues(),
            table,
        }
    }

    #[inline]
    fn weight(&self, c: &[u64]) -> u64 {
        match &self.table {
            Some(t) => c.iter().map(|&v| u64::from(t[v as usize])).sum(),
            None => c.iter().map(|&v| weight_of(v, self.p)).sum(),
        }
    }

    /// `c += k·x^j·g`.
    #[inline]
    fn add_shift(&self, c: &mut [u64], j: usize, k: u64) {
        let m = self.m;
        let pairs = c[j..].iter_mut().zip(&self.g);
        if m < 1 << 32 {
            pairs.for_each(|(slot, &gi)| *slot = (*slot + k * gi) % m);
        } else {
            pairs.for_each(|(slot, &gi)| {
                *slot = ((*slot as u128 + k as u128 * gi as u128) % m as u128) as u64;
            });
        }
    }

    /// `c += x^j·g`, the hot path of the exhaustive walk.
    #[inline]
    fn add_shift_once(&self, c: &mut [u64], j: usize) {
        let m = self.m;
        for (slot, &gi) in c[j..].iter_mut().zip(&self.g) {
            let v = *slot + gi;
            *slot = if v >= m { v - m } else { v };
        }
    }
}

fn run_parallel<T, F>(workers: usize, jobs: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync,
{
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<(usize, Result<T>)>> = Mutex::new(Vec::with_capacity(jobs));
    std::thread::scope(|s| {
        for _ in 0..workers.clamp(1, jobs.max(1)) {
            s.spawn(|| loop {
                let job = next.fetch_add(1, Ordering::Relaxed);
                if job >= jobs {
                    break;
                }
                let r = f(job);
                results.lock().unwrap().push((job, r));
            });
        }
    });
    let mut results = results.into_inner().unwrap();
    results.sort_by_key(|(job, _)| *job);
    results.into_iter().map(|(_, r)| r).collect()
}

/// Exact minimum homogeneous weight, or `BudgetExceeded` when `p^{2·rank}`
/// exceeds the budget.
pub fn min_distance_exhaustive(
    code: &CyclicCodeSpec,
    workers: usize,
    budget: u128,
) -> Result<DistanceResult> {
    let k = Kernel::new(code);
    let m = k.m as u128;
    let needed = m.checked_pow(k.rank as u32).unwrap_or(u128::MAX);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    // (lead position, lead value, first tail index, end tail index)
    let mut jobs = Vec::new();
    let slices = 8 * workers.max(1) as u128;
    for pos in 0..k.rank {
        let tail = m.pow((k.rank - 1 - pos) as u32);
        let step = tail.div_ceil(slices).max(1);
        for lead in [1, k.p] {
            let mut start = 0;
            while start < tail {
                let end = (start + step).min(tail);
                jobs.push((pos, lead, start as u64, end as u64));
                start = end;
            }
        }
    }
    let mins = run_parallel(workers, jobs.len(), |job| {
        let (pos, lead, start, end) = jobs[job];
        let tail_len = k.rank - 1 - pos;
        let mut c = vec![0u64; k.n];
        k.add_shift(&mut c, pos, lead);
        let mut digits = vec![0u64; tail_len];
        let mut rest = start;
        for (t, d) in digits.iter_mut().enumerate() {
            *d = rest % k.m;
            rest /= k.m;
            k.add_shift(&mut c, pos + 1 + t, *d);
        }
        let mut best = u64::MAX;
        for i in start..end {
            best = best.min(k.weight(&c));
            if i + 1 == end {
                break;
            }
            for (t, d) in digits.iter_mut().enumerate() {
                k.add_shift_once(&mut c, pos + 1 + t);
                *d += 1;
                if *d < k.m {
                    break;
                }
                *d = 0;
            }
        }
        Ok(best)
    })?;
    let visited: u128 = jobs.iter().map(|&(_, _, a, b)| u128::from(b - a)).sum();
    Ok(DistanceResult {
        d: mins.into_iter().min().unwrap_or(0),
        method: Method::Exhaustive,
        samples_used: visited as u64,
        rng_seed: None,
    })
}

/// Minimum weight over `samples` uniformly random nonzero messages. Chunk `i`
/// of [`SAMPLE_CHUNK`] samples draws from stream `i` of the seeded generator,
/// so the result does not depend on the worker count.
pub fn min_distance_sampled(
    code: &CyclicCodeSpec,
    samples: u64,
    rng_seed: u64,
    workers: usize,
) -> Result<DistanceResult> {
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be at least 1".into()));
    }
    let k = Kernel::new(code);
    let chunks = samples.div_ceil(SAMPLE_CHUNK) as usize;
    let mins = run_parallel(workers, chunks, |chunk| {
        let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
        rng.set_stream(chunk as u64);
        let count = SAMPLE_CHUNK.min(samples - chunk as u64 * SAMPLE_CHUNK);
        let mut u = vec![0u64; k.rank];
        let mut c = vec![0u64; k.n];
        let mut best = u64::MAX;
        for _ in 0..count {
            loop {
                u.iter_mut().for_each(|x| *x = rng.gen_range(0..k.m));
                if u.iter().any(|&x| x != 0) {
                    break;
                }
            }
            c.iter_mut().for_each(|x| *x = 0);
            for (j, &uj) in u.iter().enumerate() {
                if uj != 0 {
                    k.add_shift(&mut c, j, uj);
                }
            }
            best = best.min(k.weight(&c));
        }
        Ok(best)
    })?;
    Ok(DistanceResult {
        d: mins.into_iter().min().unwrap_or(0),
        method: Method::Sampled,
        samples_used: samples,
        rng_seed: Some(rng_seed),
    })
}

/// Exhaustive when within budget, sampled otherwise.
pub fn min_distance(code: &CyclicCodeSpec, cfg: &SearchConfig) -> Result<DistanceResult> {
    match min_distance_exhaustive(code, cfg.workers, cfg.budget) {
        Err(Error::BudgetExceeded { .. }) => {
            min_distance_sampled(code, cfg.samples, cfg.rng_seed, cfg.workers)
        }
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::super::build_code;
    use super::*;
    use crate::engine::{factor, FactorOptions, Factorization};

    fn table_one() -> Factorization {
        factor(13, 2, &FactorOptions::default()).unwrap()
    }

    /// Every nonzero message, no orbit reduction.
    fn brute(code: &CyclicCodeSpec) -> u64 {
        let k = Kernel::new(code);
        let total = k.m.pow(k.rank as u32);
        (1..total)
            .map(|mut idx| {
                let mut c = vec![0u64; k.n];
                for j in 0..k.rank {
                    k.add_shift(&mut c, j, idx % k.m);
                    idx /= k.m;
                }
                k.weight(&c)
            })
            .min()
            .unwrap()
    }

    #[test]
    fn rank_one_and_two() {
        let f = table_one();
        let c = build_code(&f, &[0, 2, 3, 4, 5, 6, 7]).unwrap();
        assert_eq!(min_distance_exhaustive(&c, 2, DEFAULT_BUDGET).unwrap().d, 168);
        let c = build_code(&f, &[0, 1, 2, 3, 4, 5]).unwrap();
        assert_eq!(min_distance_exhaustive(&c, 4, DEFAULT_BUDGET).unwrap().d, 72);
    }

    #[test]
    fn orbit_reduction_matches_brute_force() {
        for p in [3u64, 5, 7] {
            let f = factor(p, 2, &FactorOptions::default()).unwrap();
            let nf = f.factors().len();
            for mask in 1u32..(1 << nf) - 1 {
                let subset: Vec<usize> = (0..nf).filter(|i| mask >> i & 1 == 1).collect();
                let code = build_code(&f, &subset).unwrap();
                if (p * p).pow(code.rank as u32) > 200_000 {
                    continue;
                }
                let fast = min_distance_exhaustive(&code, 3, DEFAULT_BUDGET).unwrap();
                assert_eq!(fast.d, brute(&code), "p={p} mask={mask:b}");
            }
        }
    }

    #[test]
    fn worker_count_does_not_matter() {
        let f = table_one();
        let c = build_code(&f, &[2, 3, 4, 5, 6]).unwrap();
        let one = min_distance_exhaustive(&c, 1, DEFAULT_BUDGET).unwrap();
        assert_eq!(min_distance_exhaustive(&c, 7, DEFAULT_BUDGET).unwrap(), one);
        let a = min_distance_sampled(&c, 200_000, 3, 1).unwrap();
        assert_eq!(min_distance_sampled(&c, 200_000, 3, 5).unwrap(), a);
    }

    #[test]
    fn budget_is_enforced() {
        let f = table_one();
        let c = build_code(&f, &[2]).unwrap();
        assert!(matches!(
            min_distance_exhaustive(&c, 1, DEFAULT_BUDGET),
            Err(Error::BudgetExceeded { .. })
        ));
        let cfg = SearchConfig {
            samples: 1000,
            workers: 2,
            ..SearchConfig::default()
        };
        assert_eq!(min_distance(&c, &cfg).unwrap().method, Method::Sampled);
        assert!(min_distance_sampled(&c, 0, 1, 1).is_err());
    }

    #[test]
    fn sampling_saturates_and_bounds_from_above() {
        let f = factor(3, 2, &FactorOptions::default()).unwrap();
        let c = build_code(&f, &[0, 1]).unwrap();
        let exact = min_distance_exhaustive(&c, 1, DEFAULT_BUDGET).unwrap().d;
        assert_eq!(min_distance_sampled(&c, 5000, 11, 2).unwrap().d, exact);

        let f = table_one();
        for subset in [
            vec![0, 1, 2, 3, 4, 6],
            vec![2, 3, 4, 5, 6, 7],
            vec![0, 2, 3, 4, 5, 6, 7],
        ] {
            let c = build_code(&f, &subset).unwrap();
            let exact = min_distance_exhaustive(&c, 8, DEFAULT_BUDGET).unwrap().d;
            let sampled = min_distance_sampled(&c, 100_000, 5, 8).unwrap().d;
            assert!(sampled >= exact, "{subset:?}");
        }
    }

    #[test]
    fn cyclic_shift_preserves_weight() {
        let f = table_one();
        let c = build_code(&f, &[0, 2, 5]).unwrap();
        let k = Kernel::new(&c);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let mut word = vec![0u64; k.n];
            for j in 0..k.rank {
                k.add_shift(&mut word, j, rng.gen_range(0..k.m));
            }
            let w = k.weight(&word);
            word.rotate_right(1);
            assert_eq!(k.weight(&word), w);
            // still a multiple of g, since g divides x^n - 1
            let shifted = crate::ring::RingPoly::from_u64s(c.g.modulus(), &word);
            assert!(shifted.rem_monic(&c.g).unwrap().is_zero());
        }
    }
}
