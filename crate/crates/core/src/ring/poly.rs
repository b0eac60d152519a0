use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;

use super::{Modulus, RingElem};
use crate::error::{Error, Result};

/// Dense polynomial over `Z/p^e`, coefficients in ascending degree.
///
/// High-degree zero coefficients are always trimmed; the zero polynomial has
/// an empty coefficient vector.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RingPoly {
    coeffs: Vec<RingElem>,
    modulus: Modulus,
}

impl RingPoly {
    pub fn new(modulus: &Modulus, coeffs: Vec<RingElem>) -> Result<Self> {
        for c in &coeffs {
            modulus.check(c.modulus())?;
        }
        let mut p = Self {
            coeffs,
            modulus: modulus.clone(),
        };
        p.trim();
        Ok(p)
    }

    pub fn from_u64s(modulus: &Modulus, coeffs: &[u64]) -> Self {
        Self::from_trusted(modulus, coeffs.iter().map(|&c| modulus.from_u64(c)).collect())
    }

    pub fn from_i64s(modulus: &Modulus, coeffs: &[i64]) -> Self {
        Self::from_trusted(modulus, coeffs.iter().map(|&c| modulus.from_i64(c)).collect())
    }

    pub fn zero(modulus: &Modulus) -> Self {
        Self::from_trusted(modulus, Vec::new())
    }

    pub fn one(modulus: &Modulus) -> Self {
        Self::from_trusted(modulus, vec![modulus.one()])
    }

    /// `x^n - 1`.
    pub fn x_pow_minus_one(modulus: &Modulus, n: usize) -> Self {
        let mut coeffs = vec![modulus.zero(); n + 1];
        coeffs[0] = modulus.from_i64(-1);
        coeffs[n] = modulus.one();
        Self::from_trusted(modulus, coeffs)
    }

    /// `x^2 - a x + 1`.
    pub fn reciprocal_quadratic(a: &RingElem) -> Self {
        let m = a.modulus();
        Self::from_trusted(m, vec![m.one(), -a, m.one()])
    }

    pub(crate) fn from_trusted(modulus: &Modulus, coeffs: Vec<RingElem>) -> Self {
        let mut p = Self {
            coeffs,
            modulus: modulus.clone(),
        };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(RingElem::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    pub fn coeffs(&self) -> &[RingElem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> RingElem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.modulus.zero())
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(RingElem::is_one)
    }

    /// Coefficient vector reads the same in both directions, i.e.
    /// `x^d f(1/x) = f(x)`.
    pub fn is_self_reciprocal(&self) -> bool {
        let n = self.coeffs.len();
        (0..n / 2).all(|i| self.coeffs[i] == self.coeffs[n - 1 - i])
    }

    /// `f` equals its monic reciprocal `f(0)^{-1} x^d f(1/x)`. Unlike
    /// [`RingPoly::is_self_reciprocal`] this accepts `x - 1`.
    pub fn is_self_reciprocal_monic(&self) -> bool {
        let Some(c0) = self.coeffs.first() else {
            return false;
        };
        let Ok(inv) = c0.inv() else {
            return false;
        };
        let n = self.coeffs.len();
        (0..n).all(|i| self.coeffs[n - 1 - i] == &self.coeffs[i] * &inv)
    }

    pub fn to_biguints(&self) -> Vec<BigUint> {
        self.coeffs.iter().map(RingElem::value).collect()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.modulus.check(&other.modulus)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| &self.coeff(i) + &other.coeff(i)).collect();
        Ok(Self::from_trusted(&self.modulus, coeffs))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.modulus.check(&other.modulus)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| &self.coeff(i) - &other.coeff(i)).collect();
        Ok(Self::from_trusted(&self.modulus, coeffs))
    }

    pub fn scale(&self, c: &RingElem) -> Result<Self> {
        self.modulus.check(c.modulus())?;
        Ok(Self::from_trusted(
            &self.modulus,
            self.coeffs.iter().map(|x| x * c).collect(),
        ))
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * &self.modulus.from_u64(i as u64))
            .collect();
        Self::from_trusted(&self.modulus, coeffs)
    }

    /// Exact product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.modulus.check(&other.modulus)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(&self.modulus));
        }
        let coeffs = match self.modulus.word() {
            Some(m) => {
                let a: Vec<u64> = self.coeffs.iter().map(|c| c.to_u64().unwrap()).collect();
                let b: Vec<u64> = other.coeffs.iter().map(|c| c.to_u64().unwrap()).collect();
                mul_words(&a, &b, m)
                    .into_iter()
                    .map(|v| self.modulus.from_u64(v))
                    .collect()
            }
            None => {
                let a = self.to_biguints();
                let b = other.to_biguints();
                let mut acc = vec![BigUint::zero(); a.len() + b.len() - 1];
                for (i, x) in a.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    for (j, y) in b.iter().enumerate() {
                        acc[i + j] += x * y;
                    }
                }
                acc.iter().map(|v| self.modulus.from_biguint(v)).collect()
            }
        };
        Ok(Self::from_trusted(&self.modulus, coeffs))
    }

    /// Product, reduced modulo a monic `reducer` when one is given.
    pub fn mul_mod(&self, other: &Self, reducer: Option<&Self>) -> Result<Self> {
        let prod = self.mul(other)?;
        match reducer {
            Some(r) => prod.rem_monic(r),
            None => Ok(prod),
        }
    }

    /// Division with remainder by a monic divisor.
    pub fn div_rem_monic(&self, divisor: &Self) -> Result<(Self, Self)> {
        self.modulus.check(&divisor.modulus)?;
        if !divisor.is_monic() {
            return Err(Error::InvalidArgument("divisor must be monic".into()));
        }
        let d = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= d {
            return Ok((Self::zero(&self.modulus), self.clone()));
        }
        let mut quot = vec![self.modulus.zero(); rem.len() - d];
        for k in (0..quot.len()).rev() {
            let lead = rem[k + d].clone();
            if lead.is_zero() {
                continue;
            }
            for (j, c) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = &rem[k + j] - &(&lead * c);
            }
            quot[k] = lead;
        }
        rem.truncate(d);
        Ok((
            Self::from_trusted(&self.modulus, quot),
            Self::from_trusted(&self.modulus, rem),
        ))
    }

    pub fn rem_monic(&self, divisor: &Self) -> Result<Self> {
        Ok(self.div_rem_monic(divisor)?.1)
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &RingElem) -> Result<RingElem> {
        self.modulus.check(x.modulus())?;
        let mut acc = self.modulus.zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        Ok(acc)
    }

    /// Coefficient-wise reduction to a lower power of the same prime.
    pub fn reduce_to(&self, target: &Modulus) -> Result<Self> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.reduce_to(target))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_trusted(target, coeffs))
    }
}

/// Schoolbook product of word-sized residues modulo `m < 2^63`.
fn mul_words(a: &[u64], b: &[u64], m: u64) -> Vec<u64> {
    const REDUCE_AT: u128 = 1 << 127;
    let mut acc = vec![0u128; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            let slot = &mut acc[i + j];
            if *slot >= REDUCE_AT {
                *slot %= m as u128;
            }
            *slot += x as u128 * y as u128;
        }
    }
    acc.into_iter().map(|v| (v % m as u128) as u64).collect()
}

impl fmt::Debug for RingPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over {}", self, self.modulus)
    }
}

impl fmt::Display for RingPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c.is_one()) {
                (0, _) => write!(f, "{c}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{c}x")?,
                (_, true) => write!(f, "x^{i}")?,
                (_, false) => write!(f, "{c}x^{i}")?,
            }
        }
        Ok(())
    }
}
