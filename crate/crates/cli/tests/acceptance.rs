//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any fails.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use dickson_core::arith::is_prime;
use dickson_core::baseline::{
    bench_precision, bench_suite, linear_fit, loglog_fit, oracle_factor_set, BenchConfig,
};
use dickson_core::dickson::{dickson_eval, DicksonArgs};
use dickson_core::engine::{factor, lift_trace, FactorOptions, DEFAULT_SEED};
use dickson_core::graycodes::{
    build_code, dichotomy, gray_map, hom_weight, min_distance_exhaustive, search_codes, symmetry_experiment,
    SearchConfig, DEFAULT_BUDGET,
};
use dickson_core::seedgen::{base_layer, find_primitive_quadratic};
use dickson_core::vlift::{build_v, small_coeffs, Lifter};
use dickson_core::{Modulus, RingPoly};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dickson"))
}

fn odd_primes(below: u64) -> impl Iterator<Item = u64> {
    (3..below).filter(|&q| is_prime(q))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn golden_factorization() -> Check {
    let start = Instant::now();
    let out = bin()
        .args(["factor", "--p", "13", "--e", "2"])
        .output()
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(out.status.success(), || format!("exit {:?}", out.status.code()))?;
    let doc: Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    let got: BTreeSet<Vec<u64>> = doc["factors"]
        .as_array()
        .ok_or("no factors array")?
        .iter()
        .map(|f| {
            f["coeffs"]
                .as_array()
                .unwrap()
                .iter()
                .map(|c| c.as_u64().unwrap())
                .collect()
        })
        .collect();
    let mut want: BTreeSet<Vec<u64>> = [vec![168, 1], vec![1, 1]].into_iter().collect();
    for m in [34, 135, 29, 140, 163, 6] {
        want.insert(vec![1, m, 1]);
    }
    ensure(got == want, || format!("factor set {got:?}"))?;
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!("8 factors in {:.0} ms", elapsed.as_secs_f64() * 1e3))
}

fn golden_trace() -> Check {
    let steps = lift_trace(19, 3, 1, &FactorOptions::default()).map_err(|e| e.to_string())?;
    let s: Vec<String> = steps.iter().map(|t| t.s.to_string()).collect();
    let a: Vec<String> = steps.iter().map(|t| t.a.to_string()).collect();
    ensure(s == ["4", "42", "3652"], || format!("S = {s:?}"))?;
    ensure(a == ["6", "120", "6618"], || format!("A = {a:?}"))?;
    Ok("S 4/42/3652, A 6/120/6618".into())
}

fn v_triangle() -> Check {
    let cases: [(u64, &[i64]); 5] = [
        (5, &[1, -1]),
        (13, &[1, -1, -2, 1]),
        (17, &[1, -1, -3, 2, 1]),
        (19, &[1, 0, -3, 0, 1]),
        (29, &[1, -1, -6, 5, 10, -6, -4, 1]),
    ];
    for (p, want) in cases {
        let got = small_coeffs(&build_v(p)).ok_or(format!("p = {p}: coefficients overflow"))?;
        ensure(got == want, || format!("p = {p}: {got:?}"))?;
    }
    Ok("p = 5, 13, 17, 19, 29".into())
}

fn product_verification() -> Check {
    let mut checked = 0;
    let opts = FactorOptions {
        verify: false,
        ..FactorOptions::default()
    };
    let plan = odd_primes(500)
        .flat_map(|p| [1u32, 2, 3].map(|e| (p, e)))
        .chain(odd_primes(50).map(|p| (p, 5)));
    for (p, e) in plan {
        let f = factor(p, e, &opts).map_err(|err| format!("p = {p}, e = {e}: {err}"))?;
        let ok = f.verify().map_err(|err| format!("p = {p}, e = {e}: {err}"))?;
        ensure(ok, || format!("product mismatch at p = {p}, e = {e}"))?;
        checked += 1;
    }
    Ok(format!("{checked} (p, e) pairs, 0 failures"))
}

fn oracle_equivalence() -> Check {
    let mut checked = 0;
    for p in odd_primes(200) {
        for e in 1..=3 {
            let engine = factor(p, e, &FactorOptions::default()).map_err(|err| err.to_string())?;
            let oracle = oracle_factor_set(p, e, 1).map_err(|err| err.to_string())?;
            ensure(engine.factor_set() == oracle, || {
                format!("mismatch at p = {p}, e = {e}")
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} (p, e) pairs, 0 mismatches"))
}

fn binomial_identity() -> Check {
    const K: usize = 300;
    // Pascal rows 0..=K as exact integers.
    let mut rows: Vec<Vec<BigInt>> = vec![vec![BigInt::one()]];
    for n in 1..=K {
        let prev = &rows[n - 1];
        let mut row = vec![BigInt::one(); n + 1];
        for j in 1..n {
            row[j] = &prev[j - 1] + &prev[j];
        }
        rows.push(row);
    }
    let c = |n: usize, r: usize| -> BigInt {
        if r > n {
            BigInt::default()
        } else {
            rows[n][r].clone()
        }
    };
    let mut cases = 0;
    for k in 1..=K {
        for j in 0..=k / 2 {
            let mut sum = BigInt::default();
            for i in 0..=j {
                let term = c(k - 2 * i, j - i) * c(k - i, i);
                if i % 2 == 0 {
                    sum += term;
                } else {
                    sum -= term;
                }
            }
            ensure(sum.is_one(), || format!("k = {k}, j = {j}: sum = {sum}"))?;
            cases += 1;
        }
    }
    Ok(format!("{cases} (k, j) cases"))
}

fn waring() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let primes: Vec<u64> = odd_primes(2000).collect();
    for trial in 0..10_000 {
        let p = primes[rng.gen_range(0..primes.len())];
        let e = rng.gen_range(1..=6);
        let m = Modulus::new(p, e).map_err(|err| err.to_string())?;
        let x1 = m.from_u64(rng.gen());
        let x2 = m.from_u64(rng.gen());
        let n = rng.gen_range(0..=200u64);
        let lhs = &x1.pow(n) + &x2.pow(n);
        let rhs = dickson_eval(&DicksonArgs {
            n,
            x: &x1 + &x2,
            gamma: &x1 * &x2,
        });
        ensure(lhs == rhs, || format!("trial {trial}: p = {p}, e = {e}, n = {n}"))?;
    }
    Ok("10000 random triples".into())
}

fn quartic_identity() -> Check {
    let mut levels = 0;
    for p in odd_primes(200) {
        let pq = find_primitive_quadratic(p, DEFAULT_SEED).map_err(|err| err.to_string())?;
        let base = base_layer(p, &pq).map_err(|err| err.to_string())?;
        for e in 1..=4 {
            let target = Modulus::new(p, e).map_err(|err| err.to_string())?;
            let lifter = Lifter::new(build_v(p), &target).map_err(|err| err.to_string())?;
            let mut traces = Vec::new();
            for i in 1..=base.kv() {
                let state = lifter.init_seed(&base, i).map_err(|err| err.to_string())?;
                traces.push(lifter.trace(state).map_err(|err| err.to_string())?);
            }
            for h in 1..=e {
                let ring = Modulus::new(p, h).map_err(|err| err.to_string())?;
                let mut prod = RingPoly::from_i64s(&ring, &[-1, 0, 1]);
                if p % 4 == 3 {
                    prod = prod.mul(&RingPoly::from_i64s(&ring, &[1, 0, 1])).unwrap();
                }
                for t in &traces {
                    let s = ring.from_biguint(&t[h as usize - 1].s);
                    let quartic =
                        RingPoly::new(&ring, vec![ring.one(), ring.zero(), s, ring.zero(), ring.one()])
                            .unwrap();
                    prod = prod.mul(&quartic).unwrap();
                }
                let want = RingPoly::x_pow_minus_one(&ring, p as usize + 1);
                ensure(prod == want, || format!("p = {p}, e = {e}, level {h}"))?;
                levels += 1;
            }
        }
    }
    Ok(format!("{levels} (p, e, h) levels"))
}

fn performance_shape() -> Check {
    let primes = [101u64, 211, 401, 809, 1601, 3203, 5003];
    let cfg = BenchConfig::default();
    let rows = bench_suite(&primes, 1, &cfg).map_err(|e| e.to_string())?;
    let xs: Vec<f64> = rows.iter().map(|r| r.p as f64).collect();
    let engine: Vec<f64> = rows.iter().map(|r| r.engine_ms).collect();
    let baseline: Vec<f64> = rows.iter().map(|r| r.baseline_ms.unwrap()).collect();
    let ef = loglog_fit(&xs, &engine);
    let bf = loglog_fit(&xs, &baseline);
    let ratio = rows.last().unwrap().ratio.unwrap();

    let es: Vec<u32> = (1..=100).collect();
    let prec_cfg = BenchConfig {
        baseline: false,
        ..BenchConfig::default()
    };
    let sweep = bench_precision(1009, &es, &prec_cfg).map_err(|e| e.to_string())?;
    let ex: Vec<f64> = sweep.iter().map(|r| f64::from(r.e)).collect();
    let ey: Vec<f64> = sweep.iter().map(|r| r.engine_ms).collect();
    let lf = linear_fit(&ex, &ey);

    let detail = format!(
        "engine slope {:.2}, baseline slope {:.2}, ratio {:.0}x at p = 5003, e-sweep R^2 {:.3}",
        ef.slope, bf.slope, ratio, lf.r2
    );
    let ok = ef.slope <= 1.3 && bf.slope >= 1.6 && ratio > 20.0 && lf.r2 >= 0.95;
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn lcd_distances() -> Check {
    let f = factor(13, 2, &FactorOptions::default()).map_err(|e| e.to_string())?;
    let rows = search_codes(&f, 1..=2, &SearchConfig::default()).map_err(|e| e.to_string())?;
    let got: Vec<(usize, u64, &str)> = rows.iter().map(|r| (r.rank, r.d, r.method)).collect();
    ensure(got == [(1, 168, "exhaustive"), (2, 144, "exhaustive")], || {
        format!("{got:?}")
    })?;
    Ok("[182, 1, 168] and [182, 2, 144]".into())
}

fn symmetry_dichotomy() -> Check {
    let f = factor(13, 2, &FactorOptions::default()).map_err(|e| e.to_string())?;
    let cfg = SearchConfig::default();
    for (subset, want) in [([0usize, 1, 2, 3, 4, 5], 72u64), ([0, 1, 2, 3, 4, 6], 120)] {
        let code = build_code(&f, &subset).map_err(|e| e.to_string())?;
        let d = min_distance_exhaustive(&code, cfg.workers, DEFAULT_BUDGET)
            .map_err(|e| e.to_string())?
            .d;
        ensure(d == want, || format!("{subset:?}: d = {d}, expected {want}"))?;
    }
    let rows = symmetry_experiment(&f, &cfg).map_err(|e| e.to_string())?;
    ensure(rows.len() == 28, || format!("{} subsets", rows.len()))?;
    let dich = dichotomy(&rows, 4);
    let intact = dich.max_intact.ok_or("no intact rank-4 subset")?;
    let broken = dich.min_broken.ok_or("no broken rank-4 subset")?;
    ensure(intact <= 84 && broken >= 96, || {
        format!("rank 4: max intact {intact}, min broken {broken}")
    })?;
    Ok(format!(
        "d 72 / 120; rank 4 intact <= {intact}, broken >= {broken}"
    ))
}

fn gray_isometry() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let primes: Vec<u64> = odd_primes(60).collect();
    for trial in 0..100_000 {
        let p = primes[rng.gen_range(0..primes.len())];
        let m = Modulus::new(p, 2).unwrap();
        let len = rng.gen_range(1..=16);
        let v: Vec<_> = (0..len).map(|_| m.from_u64(rng.gen_range(0..p * p))).collect();
        let image = gray_map(&v).map_err(|e| e.to_string())?;
        let hamming = image.iter().filter(|&&c| c != 0).count() as u64;
        let hom: u64 = v.iter().map(|u| hom_weight(u).unwrap()).sum();
        ensure(hamming == hom, || {
            format!("trial {trial}: p = {p}, {hamming} != {hom}")
        })?;
    }
    Ok("100000 vectors, 0 failures".into())
}

fn determinism() -> Check {
    let run = |workers: &str| -> Result<Vec<u8>, String> {
        let out = bin()
            .args([
                "codes",
                "--p",
                "13",
                "--symmetry",
                "--seed",
                "7",
                "--workers",
                workers,
            ])
            .output()
            .map_err(|e| e.to_string())?;
        ensure(out.status.success(), || {
            String::from_utf8_lossy(&out.stderr).into_owned()
        })?;
        Ok(out.stdout)
    };
    let one = run("1")?;
    let four = run("4")?;
    ensure(one == four, || "CSV differs between 1 and 4 workers".into())?;
    Ok(format!("{} identical bytes", one.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 13] = [
        ("golden factorization p=13 e=2", golden_factorization),
        ("golden lifting trace p=19", golden_trace),
        ("V(x) coefficient triangle", v_triangle),
        ("product verification", product_verification),
        ("oracle equivalence", oracle_equivalence),
        ("binomial identity k <= 300", binomial_identity),
        ("Waring property", waring),
        ("quartic product identity", quartic_identity),
        ("performance shape", performance_shape),
        ("LCD distances p=13", lcd_distances),
        ("symmetry dichotomy", symmetry_dichotomy),
        ("Gray isometry", gray_isometry),
        ("determinism across workers", determinism),
    ];
    let mut failed = 0;
    for (n, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".to_string()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} {name}: PASS ({detail}; {secs:.1} s)", n + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} {name}: FAIL ({detail}; {secs:.1} s)", n + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
