//! Dense polynomials over `F_p` on machine words, for the classical baseline.

use std::fmt;

use crate::arith::{inv_mod, mul_mod};
use crate::ring::{Modulus, RingPoly};

/// Polynomial over `F_p`, ascending coefficients, trimmed.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FpPoly {
    p: u64,
    c: Vec<u64>,
}

impl FpPoly {
    pub fn new(p: u64, coeffs: Vec<u64>) -> Self {
        let mut f = Self {
            p,
            c: coeffs.into_iter().map(|v| v % p).collect(),
        };
        f.trim();
        f
    }

    pub fn from_i64s(p: u64, coeffs: &[i64]) -> Self {
        Self::new(p, coeffs.iter().map(|&v| v.rem_euclid(p as i64) as u64).collect())
    }

    pub fn zero(p: u64) -> Self {
        Self { p, c: Vec::new() }
    }

    pub fn one(p: u64) -> Self {
        Self { p, c: vec![1] }
    }

    pub fn x(p: u64) -> Self {
        Self { p, c: vec![0, 1] }
    }

    pub fn x_pow_minus_one(p: u64, n: usize) -> Self {
        let mut c = vec![0; n + 1];
        c[0] = p - 1;
        c[n] = 1;
        Self::new(p, c)
    }

    /// Residues mod `p` of a polynomial over `Z/p^e`.
    pub fn from_ring(f: &RingPoly) -> Self {
        let p = f.modulus().prime();
        Self::new(p, f.coeffs().iter().map(|c| c.residue_mod_p()).collect())
    }

    /// The same coefficients read in `Z/p^e`.
    pub fn to_ring(&self, modulus: &Modulus) -> RingPoly {
        RingPoly::from_u64s(modulus, &self.c)
    }

    fn trim(&mut self) {
        while self.c.last() == Some(&0) {
            self.c.pop();
        }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c == [1]
    }

    pub fn lead(&self) -> u64 {
        self.c.last().copied().unwrap_or(0)
    }

    pub fn make_monic(&self) -> Self {
        match inv_mod(self.lead(), self.p) {
            Some(inv) if !self.is_zero() => self.scale(inv),
            _ => self.clone(),
        }
    }

    pub fn scale(&self, k: u64) -> Self {
        Self::new(self.p, self.c.iter().map(|&v| mul_mod(v, k, self.p)).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.c.len().max(other.c.len());
        let get = |v: &[u64], i: usize| v.get(i).copied().unwrap_or(0);
        Self::new(
            self.p,
            (0..n).map(|i| get(&self.c, i) + get(&other.c, i)).collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.c.len().max(other.c.len());
        let get = |v: &[u64], i: usize| v.get(i).copied().unwrap_or(0);
        Self::new(
            self.p,
            (0..n)
                .map(|i| get(&self.c, i) + self.p - get(&other.c, i))
                .collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.p);
        }
        // p < 2^31, so each product is < 2^62 and a u128 sum cannot overflow.
        let mut acc = vec![0u128; self.c.len() + other.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (slot, &b) in acc[i..].iter_mut().zip(&other.c) {
                *slot += (a * b) as u128;
            }
        }
        let p = self.p as u128;
        Self::new(self.p, acc.into_iter().map(|v| (v % p) as u64).collect())
    }

    /// Quotient and remainder; the divisor's leading coefficient must be
    /// nonzero (always invertible in a field).
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by the zero polynomial");
        let p = self.p;
        let inv = inv_mod(d.lead(), p).expect("leading coefficient is a unit");
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (Self::zero(p), self.clone());
        }
        let neg: Vec<u64> = d.c[..dd].iter().map(|&v| (p - v) % p).collect();
        let mut q = vec![0u64; r.len() - dd];
        for i in (dd..r.len()).rev() {
            let c = mul_mod(r[i], inv, p);
            r[i] = 0;
            if c == 0 {
                continue;
            }
            q[i - dd] = c;
            for (slot, &v) in r[i - dd..i].iter_mut().zip(&neg) {
                *slot = (*slot + c * v) % p;
            }
        }
        r.truncate(dd);
        (Self::new(p, q), Self::new(p, r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = std::mem::replace(&mut b, r);
        }
        a.make_monic()
    }

    /// `(g, s, t)` with `g` monic and `s·self + t·other = g`.
    pub fn ext_gcd(&self, other: &Self) -> (Self, Self, Self) {
        let p = self.p;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(p), Self::zero(p));
        let (mut t0, mut t1) = (Self::zero(p), Self::one(p));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        let inv = inv_mod(r0.lead(), p).unwrap_or(1);
        (r0.scale(inv), s0.scale(inv), t0.scale(inv))
    }

    /// `self^exp mod m`.
    pub fn pow_mod(&self, mut exp: u128, m: &Self) -> Self {
        let mut base = self.rem(m);
        let mut acc = Self::one(self.p).rem(m);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base).rem(m);
            }
        }
        acc
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.c
            .iter()
            .rev()
            .fold(0, |acc, &c| (mul_mod(acc, x, self.p) + c) % self.p)
    }
}

impl fmt::Debug for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} mod {}", self.c, self.p)
    }
}
