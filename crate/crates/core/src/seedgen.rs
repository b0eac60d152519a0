//! Base-layer factorization of `x^{p+1} - 1` over `F_p`.
//!
//! A primitive quadratic `x^2 - a1 x + a2` with root `β` gives the primitive
//! `(p+1)`-th root of unity `α = β^{p-1}`. Its trace `A_1 = α + α^{-1}` equals
//! `D_{p-1}(a1, a2)`, and every other quadratic coefficient follows from
//! `A_i = D_i(A_1, 1)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{self, gcd, is_prime, mul_mod};
use crate::dickson::{dickson_chain, dickson_eval, DicksonArgs};
use crate::error::{Error, Result};
use crate::ring::{Modulus, RingElem, RingPoly};

/// Prime factorization with multiplicity, ascending. `n <= 1` yields an empty list.
pub fn factor_integer(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut n = n;
    if n <= 1 {
        return out;
    }
    for d in [2u64, 3, 5] {
        while n.is_multiple_of(d) {
            out.push(d);
            n /= d;
        }
    }
    // 30-wheel trial division for the small part.
    const WHEEL: [u64; 8] = [7, 11, 13, 17, 19, 23, 29, 31];
    let mut base = 0u64;
    'trial: while base < 1 << 12 {
        for w in WHEEL {
            let d = base + w;
            if d * d > n {
                break 'trial;
            }
            while n.is_multiple_of(d) {
                out.push(d);
                n /= d;
            }
        }
        base += 30;
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime(m) {
            out.push(m);
            continue;
        }
        let d = pollard_rho(m);
        stack.push(d);
        stack.push(m / d);
    }
    out.sort_unstable();
    out
}

/// Brent's variant of Pollard's rho; `n` must be composite and odd.
fn pollard_rho(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    for c in 1u64.. {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        let mut power = 1u64;
        let mut lam = 0u64;
        while d == 1 {
            if power == lam {
                x = y;
                power *= 2;
                lam = 0;
            }
            y = f(y);
            lam += 1;
            d = gcd(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
    }
    unreachable!()
}

fn distinct_primes(factors: &[u64]) -> Vec<u64> {
    let mut v = factors.to_vec();
    v.dedup();
    v
}

/// `x^2 - a1 x + a2` over `F_p`, certified primitive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimitiveQuadratic {
    pub a1: RingElem,
    pub a2: RingElem,
}

impl PrimitiveQuadratic {
    /// Certifies a candidate; `None` unless it is irreducible with a root of
    /// order `p^2 - 1`.
    pub fn certify(p: u64, a1: u64, a2: u64) -> Result<Option<Self>> {
        let field = Modulus::field(p)?;
        let primes = distinct_primes(&order_factors(p));
        Ok(is_primitive(p, a1 % p, a2 % p, &primes).then(|| Self {
            a1: field.from_u64(a1),
            a2: field.from_u64(a2),
        }))
    }

    pub fn poly(&self) -> RingPoly {
        let m = self.a1.modulus();
        RingPoly::from_trusted(m, vec![self.a2.clone(), -&self.a1, m.one()])
    }
}

/// Prime factors of `p^2 - 1`, taken from `p - 1` and `p + 1` separately.
fn order_factors(p: u64) -> Vec<u64> {
    let mut f = factor_integer(p - 1);
    f.extend(factor_integer(p + 1));
    f.sort_unstable();
    f
}

/// `X^exp` in `F_p[X]/(X^2 - a1 X + a2)`, as `(c0, c1)` for `c0 + c1 X`.
fn x_pow_in_quotient(p: u64, a1: u64, a2: u64, mut exp: u64) -> (u64, u64) {
    let mul = |(u0, u1): (u64, u64), (v0, v1): (u64, u64)| {
        // X^2 = a1 X - a2
        let hi = mul_mod(u1, v1, p);
        let c0 = (mul_mod(u0, v0, p) + p - mul_mod(hi, a2, p)) % p;
        let c1 = (mul_mod(u0, v1, p) + mul_mod(u1, v0, p) + mul_mod(hi, a1, p)) % p;
        (c0, c1)
    };
    let mut acc = (1, 0);
    let mut base = (0, 1);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul(acc, base);
        }
        base = mul(base, base);
        exp >>= 1;
    }
    acc
}

fn is_primitive(p: u64, a1: u64, a2: u64, order_primes: &[u64]) -> bool {
    if a2 == 0 {
        return false;
    }
    let disc = (mul_mod(a1, a1, p) + p - mul_mod(4, a2, p)) % p;
    if disc == 0 || arith::is_quadratic_residue(disc, p) {
        return false;
    }
    let order = p * p - 1;
    order_primes
        .iter()
        .all(|&q| x_pow_in_quotient(p, a1, a2, order / q) != (1, 0))
}

/// Random search for a primitive quadratic, reproducible from `rng_seed`.
pub fn find_primitive_quadratic(p: u64, rng_seed: u64) -> Result<PrimitiveQuadratic> {
    let field = Modulus::field(p)?;
    let primes = distinct_primes(&order_factors(p));
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    loop {
        let a1 = rng.gen_range(0..p);
        let a2 = rng.gen_range(1..p);
        if is_primitive(p, a1, a2, &primes) {
            return Ok(PrimitiveQuadratic {
                a1: field.from_u64(a1),
                a2: field.from_u64(a2),
            });
        }
    }
}

/// Quadratic coefficients `A_i` of the factorization over `F_p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseLayer {
    p: u64,
    /// `a_base[i - 1] = A_i` for `i = 1 … (p-1)/2`; the `x^2 + 1` slot is `None`.
    a_base: Vec<Option<RingElem>>,
    has_psi: bool,
    kv: usize,
}

impl BaseLayer {
    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn has_psi(&self) -> bool {
        self.has_psi
    }

    /// `⌊p/4⌋`: the number of conjugate pairs `{A_i, -A_i}`.
    pub fn kv(&self) -> usize {
        self.kv
    }

    /// `A_i` for `1 <= i <= (p-1)/2`, `None` at the `x^2 + 1` index.
    pub fn a(&self, i: usize) -> Option<&RingElem> {
        self.a_base.get(i.checked_sub(1)?)?.as_ref()
    }

    /// All quadratic coefficients with their index, skipping the `x^2 + 1` slot.
    pub fn quadratics(&self) -> impl Iterator<Item = (usize, &RingElem)> {
        self.a_base
            .iter()
            .enumerate()
            .filter_map(|(i, a)| a.as_ref().map(|a| (i + 1, a)))
    }

    /// Every irreducible factor over `F_p`: `x - 1`, `x + 1`, `x^2 + 1` when
    /// present, then `x^2 - A_i x + 1` in index order.
    pub fn factors(&self) -> Vec<RingPoly> {
        let f = Modulus::field(self.p).expect("validated prime");
        let mut out = vec![
            RingPoly::from_i64s(&f, &[-1, 1]),
            RingPoly::from_i64s(&f, &[1, 1]),
        ];
        if self.has_psi {
            out.push(RingPoly::from_i64s(&f, &[1, 0, 1]));
        }
        out.extend(self.quadratics().map(|(_, a)| RingPoly::reciprocal_quadratic(a)));
        out
    }
}

/// Generates the base layer from a certified primitive quadratic.
pub fn base_layer(p: u64, pq: &PrimitiveQuadratic) -> Result<BaseLayer> {
    let field = Modulus::field(p)?;
    field.check(pq.a1.modulus())?;
    let a1 = dickson_eval(&DicksonArgs {
        n: p - 1,
        x: pq.a1.clone(),
        gamma: pq.a2.clone(),
    });
    let half = p.div_ceil(2) as usize;
    let chain = dickson_chain(&a1, half);
    let minus_two = field.from_i64(-2);
    if chain[half - 1] != minus_two {
        return Err(Error::InternalInconsistency(format!(
            "A_(p+1)/2 = {} (expected -2) for p = {p}",
            chain[half - 1]
        )));
    }
    let mut a_base: Vec<Option<RingElem>> = chain[..half - 1].iter().cloned().map(Some).collect();
    for i in 1..half {
        let j = half - i;
        if a_base[j - 1].as_ref() != Some(&-&chain[i - 1]) {
            return Err(Error::InternalInconsistency(format!(
                "A_{j} != -A_{i} for p = {p}; the seed is not primitive"
            )));
        }
    }
    let has_psi = p % 4 == 3;
    if has_psi {
        let idx = ((p + 1) / 4) as usize;
        if !chain[idx - 1].is_zero() {
            return Err(Error::InternalInconsistency(format!(
                "A_(p+1)/4 = {} (expected 0) for p = {p}",
                chain[idx - 1]
            )));
        }
        a_base[idx - 1] = None;
    }
    Ok(BaseLayer {
        p,
        a_base,
        has_psi,
        kv: (p / 4) as usize,
    })
}
