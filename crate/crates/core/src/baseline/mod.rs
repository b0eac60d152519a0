//! Independent oracle: cyclotomic cosets, Cantor–Zassenhaus over `F_p` and
//! linear Hensel lifting of each factor to `Z/p^e`.

mod bench;
mod fp;

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{gcd, is_prime};
use crate::error::{Error, Result};
use crate::ring::{Modulus, RingPoly};

pub use bench::{
    bench_precision, bench_suite, linear_fit, loglog_fit, write_bench_csv, BenchConfig, BenchRow, Fit,
};
pub use fp::FpPoly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetPartition {
    pub n: u64,
    pub p: u64,
    /// Each coset sorted, the list ordered by leading (minimal) element.
    pub cosets: Vec<Vec<u64>>,
}

impl CosetPartition {
    pub fn count_of_size(&self, size: usize) -> usize {
        self.cosets.iter().filter(|c| c.len() == size).count()
    }
}

/// Orbits of `{0 … n-1}` under multiplication by `p` mod `n`.
pub fn cyclotomic_cosets(n: u64, p: u64) -> Result<CosetPartition> {
    if n == 0 || gcd(n, p) != 1 {
        return Err(Error::InvalidArgument(format!("gcd({n}, {p}) != 1")));
    }
    let mut seen = vec![false; n as usize];
    let mut cosets = Vec::new();
    for start in 0..n {
        if seen[start as usize] {
            continue;
        }
        let mut coset = Vec::new();
        let mut i = start;
        while !seen[i as usize] {
            seen[i as usize] = true;
            coset.push(i);
            i = ((i as u128 * p as u128) % n as u128) as u64;
        }
        coset.sort_unstable();
        cosets.push(coset);
    }
    Ok(CosetPartition { n, p, cosets })
}

fn check_prime(p: u64) -> Result<()> {
    if p < 3 || p.is_multiple_of(2) || !is_prime(p) || p >= 1 << 31 {
        return Err(Error::InvalidPrime(p));
    }
    Ok(())
}

/// Monic irreducible factors of `x^{p+1} - 1` over `F_p`, sorted.
pub fn cz_factor(p: u64, rng_seed: u64) -> Result<Vec<FpPoly>> {
    check_prime(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let x = FpPoly::x(p);
    let mut rest = FpPoly::x_pow_minus_one(p, p as usize + 1);
    let mut out = Vec::new();
    // Distinct-degree: gcd(x^{p^d} - x, rest) collects the degree-d factors.
    let mut h = x.clone();
    let mut d = 1u32;
    while rest.degree().unwrap_or(0) >= 2 * d as usize {
        h = h.pow_mod(p as u128, &rest);
        let g = h.sub(&x).gcd(&rest);
        if g.degree().unwrap_or(0) > 0 {
            rest = rest.div_rem(&g).0;
            h = h.rem(&rest);
            equal_degree(g, d, &mut rng, &mut out)?;
        }
        d += 1;
    }
    if rest.degree().unwrap_or(0) > 0 {
        out.push(rest.make_monic());
    }
    out.sort();
    Ok(out)
}

/// Splits a product of distinct degree-`d` irreducibles.
fn equal_degree(g: FpPoly, d: u32, rng: &mut ChaCha8Rng, out: &mut Vec<FpPoly>) -> Result<()> {
    let p = g.prime();
    let exp = (p as u128)
        .checked_pow(d)
        .map(|q| (q - 1) / 2)
        .ok_or_else(|| Error::InternalInconsistency(format!("p^{d} overflows")))?;
    let mut stack = vec![g];
    while let Some(g) = stack.pop() {
        let n = g.degree().unwrap_or(0);
        if n <= d as usize {
            out.push(g.make_monic());
            continue;
        }
        loop {
            let a = FpPoly::new(p, (0..n).map(|_| rng.gen_range(0..p)).collect());
            if a.degree().unwrap_or(0) == 0 {
                continue;
            }
            let u = a.pow_mod(exp, &g).sub(&FpPoly::one(p)).gcd(&g);
            let du = u.degree().unwrap_or(0);
            if du > 0 && du < n {
                stack.push(g.div_rem(&u).0.make_monic());
                stack.push(u);
                break;
            }
        }
    }
    Ok(())
}

/// Lifts a simple monic factor of `x^{p+1} - 1` over `F_p` to the unique monic
/// factor over `Z/p^e` reducing to it, one `p`-adic digit per step.
pub fn hensel_lift(f_bar: &FpPoly, e: u32) -> Result<RingPoly> {
    let p = f_bar.prime();
    let target = Modulus::new(p, e)?;
    let n = p as usize + 1;
    if f_bar.lead() != 1 {
        return Err(Error::InvalidArgument(format!("{f_bar:?} is not monic")));
    }
    let (h_bar, r) = FpPoly::x_pow_minus_one(p, n).div_rem(f_bar);
    if !r.is_zero() {
        return Err(Error::InvalidArgument(format!(
            "{f_bar:?} does not divide x^{n} - 1"
        )));
    }
    let (g0, _, t) = f_bar.ext_gcd(&h_bar);
    if !g0.is_one() {
        return Err(Error::NonCoprimeCofactor);
    }
    let big_f = RingPoly::x_pow_minus_one(&target, n);
    let mut g = f_bar.to_ring(&target);
    let mut h = h_bar.to_ring(&target);
    for k in 1..e {
        let err = big_f.sub(&g.mul(&h)?)?;
        let pk = target.p_power(k);
        let digits = err
            .coeffs()
            .iter()
            .map(|c| {
                let v = c.value();
                if (&v % &pk) != BigUint::from(0u32) {
                    return Err(Error::InternalInconsistency(format!(
                        "lift error not divisible by p^{k}"
                    )));
                }
                Ok((v / &pk % p).to_u64().unwrap_or(0))
            })
            .collect::<Result<Vec<_>>>()?;
        let e_bar = FpPoly::new(p, digits);
        // s f + t h = 1, so E = f·b + h·a with a = tE mod f.
        let a = t.mul(&e_bar).rem(f_bar);
        let (b, r) = e_bar.sub(&h_bar.mul(&a)).div_rem(f_bar);
        debug_assert!(r.is_zero());
        let shift = target.from_biguint(&pk);
        g = g.add(&a.to_ring(&target).scale(&shift)?)?;
        h = h.add(&b.to_ring(&target).scale(&shift)?)?;
    }
    Ok(g)
}

/// [`hensel_lift`] restricted to quadratic factors.
pub fn hensel_lift_quadratic(f_bar: &FpPoly, e: u32) -> Result<RingPoly> {
    if f_bar.degree() != Some(2) {
        return Err(Error::InvalidArgument(format!("{f_bar:?} is not quadratic")));
    }
    hensel_lift(f_bar, e)
}

/// Full factorization of `x^{p+1} - 1` over `Z/p^e` by CZ plus lifting.
pub fn baseline_factor(p: u64, e: u32, rng_seed: u64) -> Result<Vec<RingPoly>> {
    cz_factor(p, rng_seed)?
        .iter()
        .map(|f| hensel_lift(f, e))
        .collect()
}

/// Coefficient vectors of [`baseline_factor`], for set comparison.
pub fn oracle_factor_set(p: u64, e: u32, rng_seed: u64) -> Result<BTreeSet<Vec<BigUint>>> {
    Ok(baseline_factor(p, e, rng_seed)?
        .iter()
        .map(RingPoly::to_biguints)
        .collect())
}
