//! Exact residue arithmetic over `Z/p^e`.
//!
//! Residues are stored as a single machine word while `p^e < 2^63` and as a
//! [`BigUint`] beyond that. The representation is chosen once per [`Modulus`]
//! and never mixed inside one ring.

mod poly;

pub use poly::RingPoly;

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith;
use crate::error::{Error, Result};

/// Largest modulus (exclusive) handled on the single-word path.
const WORD_LIMIT: u64 = 1 << 63;

/// The ring `Z/p^e` for an odd prime `p < 2^31`.
///
/// Cheap to clone: the modulus and its powers live behind an [`Arc`].
#[derive(Clone)]
pub struct Modulus(Arc<Inner>);

struct Inner {
    p: u64,
    e: u32,
    m: BigUint,
    word: Option<u64>,
}

impl Modulus {
    pub fn new(p: u64, e: u32) -> Result<Self> {
        if p.is_multiple_of(2) || p >= 1 << 31 || !arith::is_prime(p) {
            return Err(Error::InvalidPrime(p));
        }
        if e == 0 {
            return Err(Error::InvalidExponent);
        }
        let m = BigUint::from(p).pow(e);
        let word = m.to_u64().filter(|&w| w < WORD_LIMIT);
        Ok(Self(Arc::new(Inner { p, e, m, word })))
    }

    /// The residue field `F_p` underlying any modulus.
    pub fn field(p: u64) -> Result<Self> {
        Self::new(p, 1)
    }

    pub fn prime(&self) -> u64 {
        self.0.p
    }

    pub fn exponent(&self) -> u32 {
        self.0.e
    }

    /// `p^e` as an exact integer.
    pub fn order(&self) -> &BigUint {
        &self.0.m
    }

    /// `p^e` when it fits the single-word path.
    pub fn word(&self) -> Option<u64> {
        self.0.word
    }

    pub fn with_exponent(&self, e: u32) -> Result<Self> {
        if e == self.0.e {
            return Ok(self.clone());
        }
        Self::new(self.0.p, e)
    }

    pub fn p_power(&self, t: u32) -> BigUint {
        BigUint::from(self.0.p).pow(t)
    }

    pub fn zero(&self) -> RingElem {
        self.make(self.zero_repr())
    }

    pub fn one(&self) -> RingElem {
        self.from_u64(1)
    }

    pub fn from_u64(&self, v: u64) -> RingElem {
        let repr = match self.0.word {
            Some(m) => Repr::Word(v % m),
            None => Repr::Wide(BigUint::from(v) % &self.0.m),
        };
        self.make(repr)
    }

    pub fn from_i64(&self, v: i64) -> RingElem {
        let r = self.from_u64(v.unsigned_abs());
        if v < 0 {
            -&r
        } else {
            r
        }
    }

    pub fn from_biguint(&self, v: &BigUint) -> RingElem {
        let repr = match self.0.word {
            Some(m) => Repr::Word((v % m).to_u64().expect("reduced below word modulus")),
            None => Repr::Wide(v % &self.0.m),
        };
        self.make(repr)
    }

    pub fn from_bigint(&self, v: &BigInt) -> RingElem {
        let m = BigInt::from_biguint(Sign::Plus, self.0.m.clone());
        let r = v.mod_floor(&m);
        self.from_biguint(r.magnitude())
    }

    fn same(&self, other: &Modulus) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.p == other.0.p && self.0.e == other.0.e)
    }

    pub(crate) fn check(&self, other: &Modulus) -> Result<()> {
        if self.same(other) {
            Ok(())
        } else {
            Err(Error::ModulusMismatch(self.to_string(), other.to_string()))
        }
    }

    fn zero_repr(&self) -> Repr {
        match self.0.word {
            Some(_) => Repr::Word(0),
            None => Repr::Wide(BigUint::zero()),
        }
    }

    fn make(&self, repr: Repr) -> RingElem {
        RingElem {
            repr,
            modulus: self.clone(),
        }
    }
}

impl PartialEq for Modulus {
    fn eq(&self, other: &Self) -> bool {
        self.same(other)
    }
}

impl Eq for Modulus {}

impl Hash for Modulus {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.p.hash(state);
        self.0.e.hash(state);
    }
}

impl fmt::Debug for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Modulus({}^{})", self.0.p, self.0.e)
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z/{}^{}", self.0.p, self.0.e)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Repr {
    Word(u64),
    Wide(BigUint),
}

/// Unit / zero-divisor / zero trichotomy of a residue.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ElemClass {
    Zero,
    Unit,
    ZeroDivisor,
}

/// A residue in `[0, p^e)` tagged with its ring.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RingElem {
    repr: Repr,
    modulus: Modulus,
}

impl RingElem {
    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    pub fn value(&self) -> BigUint {
        match &self.repr {
            Repr::Word(v) => BigUint::from(*v),
            Repr::Wide(v) => v.clone(),
        }
    }

    pub fn to_u64(&self) -> Option<u64> {
        match &self.repr {
            Repr::Word(v) => Some(*v),
            Repr::Wide(v) => v.to_u64(),
        }
    }

    /// Residue modulo `p`.
    pub fn residue_mod_p(&self) -> u64 {
        let p = self.modulus.prime();
        match &self.repr {
            Repr::Word(v) => v % p,
            Repr::Wide(v) => (v % p).to_u64().unwrap(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Word(v) => *v == 0,
            Repr::Wide(v) => v.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.repr {
            Repr::Word(v) => *v == 1,
            Repr::Wide(v) => v.is_one(),
        }
    }

    pub fn is_unit(&self) -> bool {
        self.residue_mod_p() != 0
    }

    pub fn class(&self) -> ElemClass {
        if self.is_zero() {
            ElemClass::Zero
        } else if self.is_unit() {
            ElemClass::Unit
        } else {
            ElemClass::ZeroDivisor
        }
    }

    /// Largest `t <= e` with `p^t | value`; zero has valuation `e`.
    pub fn valuation(&self) -> u32 {
        let e = self.modulus.exponent();
        if self.is_zero() {
            return e;
        }
        let p = self.modulus.prime();
        let mut t = 0;
        match &self.repr {
            Repr::Word(v) => {
                let mut v = *v;
                while v % p == 0 {
                    v /= p;
                    t += 1;
                }
            }
            Repr::Wide(v) => {
                let pb = BigUint::from(p);
                let mut v = v.clone();
                loop {
                    let (q, r) = v.div_rem(&pb);
                    if !r.is_zero() {
                        break;
                    }
                    v = q;
                    t += 1;
                }
            }
        }
        t
    }

    /// Multiplicative inverse; fails for zero divisors and zero.
    pub fn inv(&self) -> Result<RingElem> {
        if !self.is_unit() {
            return Err(Error::NotAUnit(self.to_string(), self.modulus.to_string()));
        }
        let repr = match &self.repr {
            Repr::Word(v) => {
                let m = self.modulus.word().unwrap();
                Repr::Word(arith::inv_mod(*v, m).expect("unit has an inverse"))
            }
            Repr::Wide(v) => {
                let m = BigInt::from_biguint(Sign::Plus, self.modulus.order().clone());
                let a = BigInt::from_biguint(Sign::Plus, v.clone());
                let ext = a.extended_gcd(&m);
                debug_assert!(ext.gcd.is_one());
                Repr::Wide(ext.x.mod_floor(&m).magnitude().clone())
            }
        };
        Ok(self.modulus.make(repr))
    }

    pub fn pow(&self, mut exp: u64) -> RingElem {
        let mut base = self.clone();
        let mut acc = self.modulus.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// The same integer read in a ring with the same `p` and exponent `<= e`.
    pub fn reduce_to(&self, target: &Modulus) -> Result<RingElem> {
        if target.prime() != self.modulus.prime() || target.exponent() > self.modulus.exponent() {
            return Err(Error::ModulusMismatch(
                self.modulus.to_string(),
                target.to_string(),
            ));
        }
        Ok(match &self.repr {
            Repr::Word(v) => target.from_u64(*v),
            Repr::Wide(v) => target.from_biguint(v),
        })
    }

    /// The canonical representative read in any ring with the same `p`.
    pub fn embed(&self, target: &Modulus) -> Result<RingElem> {
        if target.prime() != self.modulus.prime() {
            return Err(Error::ModulusMismatch(
                self.modulus.to_string(),
                target.to_string(),
            ));
        }
        Ok(match &self.repr {
            Repr::Word(v) => target.from_u64(*v),
            Repr::Wide(v) => target.from_biguint(v),
        })
    }

    fn assert_same(&self, other: &RingElem) {
        assert!(
            self.modulus.same(&other.modulus),
            "ring mismatch: {} vs {}",
            self.modulus,
            other.modulus
        );
    }
}

impl fmt::Debug for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self, self.modulus.order())
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Word(v) => write!(f, "{v}"),
            Repr::Wide(v) => write!(f, "{v}"),
        }
    }
}

impl<'a> Add<&'a RingElem> for &'a RingElem {
    type Output = RingElem;

    fn add(self, rhs: &'a RingElem) -> RingElem {
        self.assert_same(rhs);
        let repr = match (&self.repr, &rhs.repr) {
            (Repr::Word(a), Repr::Word(b)) => {
                let m = self.modulus.word().unwrap();
                let s = a + b;
                Repr::Word(if s >= m { s - m } else { s })
            }
            (Repr::Wide(a), Repr::Wide(b)) => {
                let s = a + b;
                let m = self.modulus.order();
                Repr::Wide(if &s >= m { s - m } else { s })
            }
            _ => unreachable!("mixed representations within one ring"),
        };
        self.modulus.make(repr)
    }
}

impl<'a> Sub<&'a RingElem> for &'a RingElem {
    type Output = RingElem;

    fn sub(self, rhs: &'a RingElem) -> RingElem {
        self.assert_same(rhs);
        let repr = match (&self.repr, &rhs.repr) {
            (Repr::Word(a), Repr::Word(b)) => {
                let m = self.modulus.word().unwrap();
                Repr::Word(if a >= b { a - b } else { m - b + a })
            }
            (Repr::Wide(a), Repr::Wide(b)) => {
                if a >= b {
                    Repr::Wide(a - b)
                } else {
                    Repr::Wide(self.modulus.order() - b + a)
                }
            }
            _ => unreachable!("mixed representations within one ring"),
        };
        self.modulus.make(repr)
    }
}

impl<'a> Mul<&'a RingElem> for &'a RingElem {
    type Output = RingElem;

    fn mul(self, rhs: &'a RingElem) -> RingElem {
        self.assert_same(rhs);
        let repr = match (&self.repr, &rhs.repr) {
            (Repr::Word(a), Repr::Word(b)) => {
                Repr::Word(arith::mul_mod(*a, *b, self.modulus.word().unwrap()))
            }
            (Repr::Wide(a), Repr::Wide(b)) => Repr::Wide((a * b) % self.modulus.order()),
            _ => unreachable!("mixed representations within one ring"),
        };
        self.modulus.make(repr)
    }
}

impl Neg for &RingElem {
    type Output = RingElem;

    fn neg(self) -> RingElem {
        if self.is_zero() {
            return self.clone();
        }
        let repr = match &self.repr {
            Repr::Word(a) => Repr::Word(self.modulus.word().unwrap() - a),
            Repr::Wide(a) => Repr::Wide(self.modulus.order() - a),
        };
        self.modulus.make(repr)
    }
}

macro_rules! forward_owned {
    ($($trait:ident :: $method:ident),*) => {$(
        impl $trait<RingElem> for RingElem {
            type Output = RingElem;
            fn $method(self, rhs: RingElem) -> RingElem {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a RingElem> for RingElem {
            type Output = RingElem;
            fn $method(self, rhs: &'a RingElem) -> RingElem {
                (&self).$method(rhs)
            }
        }
    )*};
}

forward_owned!(Add::add, Sub::sub, Mul::mul);

impl Neg for RingElem {
    type Output = RingElem;

    fn neg(self) -> RingElem {
        -&self
    }
}
