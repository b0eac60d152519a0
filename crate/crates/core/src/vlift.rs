//! Structural lifting through the auxiliary polynomial `V(x)`.
//!
//! Each conjugate pair `x^2 ∓ A_i x + 1` multiplies to `x^4 + S_i x^2 + 1`
//! with `S_i = 2 - A_i^2`. The `S_i` are exactly the roots of the fixed
//! integer polynomial `V(x)` of degree `⌊p/4⌋`, so lifting the factorization
//! reduces to lifting simple roots of `V` one `p`-adic digit at a time with a
//! constant update factor `C_i = -V'(S_i)^{-1} mod p`. The coefficient `A_i`
//! is recovered at the end as the square root of `2 - S_i` that reduces to
//! the known base residue.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::ring::{Modulus, RingElem, RingPoly};
use crate::seedgen::BaseLayer;

/// `V(x) = Σ_{r=0}^{k} V_r x^{k-r}` with exact integer coefficients, `V_0 = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructuralPoly {
    p: u64,
    kv: usize,
    /// Leading coefficient first.
    coeffs: Vec<BigInt>,
}

impl StructuralPoly {
    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.kv
    }

    /// `[V_0, V_1, …, V_k]`, leading first.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Exact evaluation over the integers.
    pub fn eval_exact(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// `V(x) mod m` in `O(log k)` multiplications.
    ///
    /// With `u_n = U_n(x/2)` (`u_{-1} = 0`, `u_0 = 1`, `u_n = x u_{n-1} - u_{n-2}`),
    /// `V = u_k` for `p ≡ 3 mod 4` and `V = u_k - u_{k-1}` for `p ≡ 1 mod 4`.
    pub fn eval_mod(&self, x: &BigUint, m: &BigUint) -> BigUint {
        let x = x % m;
        // Operands below m.
        let sub = |a: BigUint, b: &BigUint| if &a >= b { a - b } else { a + m - b };
        let dbl = |a: &BigUint| {
            let t = a << 1u32;
            if &t >= m {
                t - m
            } else {
                t
            }
        };
        // (lo, hi) = (u_{n-1}, u_n). Per bit, u_{2n} = (u_n + u_{n-1})(u_n - u_{n-1})
        // and one of u_{2n-1} = u_{n-1}(2u_n - x u_{n-1}), u_{2n+1} = u_n(x u_n - 2u_{n-1}).
        let mut lo = BigUint::zero();
        let mut hi = BigUint::one() % m;
        let k = self.kv as u64;
        for bit in (0..64 - k.leading_zeros()).rev() {
            let even = (&hi + &lo) * sub(hi.clone(), &lo) % m;
            (lo, hi) = if (k >> bit) & 1 == 0 {
                let x_lo = &x * &lo % m;
                (&lo * sub(dbl(&hi), &x_lo) % m, even)
            } else {
                let x_hi = &x * &hi % m;
                let odd_hi = &hi * sub(x_hi, &dbl(&lo)) % m;
                (even, odd_hi)
            };
        }
        if self.p % 4 == 1 {
            sub(hi, &lo)
        } else {
            hi
        }
    }

    /// `V` reduced into `Z/p^e`, ascending degree.
    pub fn reduce(&self, ring: &Modulus) -> RingPoly {
        let coeffs = self.coeffs.iter().rev().map(|c| ring.from_bigint(c)).collect();
        RingPoly::from_trusted(ring, coeffs)
    }
}

/// `C(k - i, i)` for `i = 0 … count-1`, walking the diagonal with
/// `C(n-1, i+1) = C(n, i)·(n-i)(n-i-1) / ((i+1)·n)`.
fn binomial_diagonal(k: usize, count: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(count);
    let mut cur = BigInt::one();
    for i in 0..count {
        let n = k - i;
        out.push(cur.clone());
        if i + 1 < count {
            let num = ((n - i) * (n - i - 1)) as u64;
            let den = ((i + 1) * n) as u64;
            cur = cur * num / den;
        }
    }
    out
}

/// Builds `V(x)` for an odd prime `p`.
pub fn build_v(p: u64) -> StructuralPoly {
    let kv = (p / 4) as usize;
    let mut coeffs = vec![BigInt::zero(); kv + 1];
    let even = binomial_diagonal(kv, kv / 2 + 1);
    for (i, c) in even.iter().enumerate() {
        coeffs[2 * i] = if i % 2 == 0 { c.clone() } else { -c };
    }
    if p % 4 == 1 && kv >= 1 {
        let odd = binomial_diagonal(kv - 1, (kv - 1) / 2 + 1);
        for (i, c) in odd.iter().enumerate() {
            if 2 * i < kv {
                coeffs[2 * i + 1] = if i % 2 == 0 { -c } else { c.clone() };
            }
        }
    }
    StructuralPoly { p, kv, coeffs }
}

/// Lifting state for one conjugate pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftState {
    pub index: usize,
    /// `A_i mod p`.
    pub a_base: RingElem,
    /// `S_i^{(h)}`, an integer in `[0, p^h)` held in the target ring.
    pub s_current: RingElem,
    pub level: u32,
    /// `C_i = -V'(S_i^{(1)})^{-1} mod p`.
    pub c_update: RingElem,
}

/// One recorded level of a lift: `S^{(h)}` and the recovered `A^{(h)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub level: u32,
    pub s: BigUint,
    pub a: BigUint,
}

/// `V` prepared for lifting to a fixed target precision.
#[derive(Clone, Debug)]
pub struct Lifter {
    v: StructuralPoly,
    field: Modulus,
    target: Modulus,
    dv_field: RingPoly,
}

impl Lifter {
    pub fn new(v: StructuralPoly, target: &Modulus) -> Result<Self> {
        if target.prime() != v.prime() {
            return Err(Error::InvalidArgument(format!(
                "V was built for p = {}, target is {target}",
                v.prime()
            )));
        }
        let field = target.with_exponent(1)?;
        let dv_field = v.reduce(&field).derivative();
        Ok(Self {
            v,
            field,
            target: target.clone(),
            dv_field,
        })
    }

    pub fn structural(&self) -> &StructuralPoly {
        &self.v
    }

    pub fn target(&self) -> &Modulus {
        &self.target
    }

    /// Level-1 state for pair index `i` (`1 <= i <= kv`).
    pub fn init_seed(&self, base: &BaseLayer, index: usize) -> Result<LiftState> {
        if index == 0 || index > base.kv() {
            return Err(Error::InvalidArgument(format!(
                "pair index {index} outside 1..={}",
                base.kv()
            )));
        }
        let a = base
            .a(index)
            .ok_or_else(|| Error::InternalInconsistency(format!("no coefficient at {index}")))?;
        let s = &self.field.from_u64(2) - &(a * a);
        let dv = self.dv_field.eval(&s)?;
        if dv.is_zero() {
            return Err(Error::SingularSeed {
                index,
                seed: s.to_u64().unwrap(),
            });
        }
        Ok(LiftState {
            index,
            a_base: a.clone(),
            s_current: s.embed(&self.target)?,
            level: 1,
            c_update: -&dv.inv()?,
        })
    }

    /// One state per pair index `1 … kv`.
    pub fn init_seeds(&self, base: &BaseLayer) -> Result<Vec<LiftState>> {
        (1..=base.kv()).map(|i| self.init_seed(base, i)).collect()
    }

    /// `S^{(h+1)} = S^{(h)} + (C · V(S^{(h)})/p^h mod p) · p^h`.
    pub fn lift_step(&self, state: &LiftState) -> Result<LiftState> {
        let h = state.level;
        if h >= self.target.exponent() {
            return Err(Error::InvalidArgument(format!(
                "state already at target precision {h}"
            )));
        }
        // Only V(S) mod p^{h+1} is needed for the next digit.
        let p_h = self.target.p_power(h);
        let m = &p_h * self.target.prime();
        let s = state.s_current.value();
        let value = self.v.eval_mod(&s, &m);
        if !(&value % &p_h).is_zero() {
            return Err(Error::IntegralityViolation {
                index: state.index,
                level: h,
            });
        }
        let delta = self.field.from_biguint(&(value / &p_h));
        let digit = (&state.c_update * &delta).value();
        let s_next = s + digit * p_h;
        Ok(LiftState {
            s_current: self.target.from_biguint(&s_next),
            level: h + 1,
            ..state.clone()
        })
    }

    pub fn lift_to_target(&self, mut state: LiftState) -> Result<LiftState> {
        while state.level < self.target.exponent() {
            state = self.lift_step(&state)?;
        }
        Ok(state)
    }

    /// Lifts to the target precision, recording `S^{(h)}` and `A^{(h)}` at
    /// every level `h = 1 … e`.
    pub fn trace(&self, mut state: LiftState) -> Result<Vec<TraceStep>> {
        let mut out = Vec::with_capacity(self.target.exponent() as usize);
        loop {
            let ring = self.target.with_exponent(state.level)?;
            let a = recover_a(&state.s_current.reduce_to(&ring)?, &state.a_base, &ring)?;
            out.push(TraceStep {
                level: state.level,
                s: state.s_current.value(),
                a: a.value(),
            });
            if state.level == self.target.exponent() {
                return Ok(out);
            }
            state = self.lift_step(&state)?;
        }
    }
}

/// Square root of `2 - s_final` in `target` that reduces to `a_base` mod `p`,
/// by Newton iteration with doubling precision.
pub fn recover_a(s_final: &RingElem, a_base: &RingElem, target: &Modulus) -> Result<RingElem> {
    let s = s_final.reduce_to(target)?;
    let rhs = &target.from_u64(2) - &s;
    let mut x = a_base.embed(target)?;
    let field = target.with_exponent(1)?;
    let base_ok = a_base.is_unit() && (&x * &x).reduce_to(&field)? == rhs.reduce_to(&field)?;
    if !base_ok {
        return Err(Error::NonResidue(rhs.to_string()));
    }
    // Coupled iteration: y tracks (2x)^{-1}, so no inversion past level 1.
    let two = target.from_u64(2);
    let mut y = (&field.from_u64(2) * a_base).inv()?.embed(target)?;
    let mut precision = 1;
    while precision < target.exponent() {
        x = &x - &(&(&(&x * &x) - &rhs) * &y);
        y = &y * &(&two - &(&(&two * &x) * &y));
        precision *= 2;
    }
    if &x * &x != rhs {
        return Err(Error::NonResidue(rhs.to_string()));
    }
    Ok(x)
}

/// Signed coefficient magnitudes as `i64`, leading first; for small `p` only.
pub fn small_coeffs(v: &StructuralPoly) -> Option<Vec<i64>> {
    v.coeffs()
        .iter()
        .map(|c| {
            let m = c.abs().to_i64()?;
            Some(if c.is_negative() { -m } else { m })
        })
        .collect()
}
