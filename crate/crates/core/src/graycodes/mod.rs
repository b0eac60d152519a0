//! Cyclic LCD codes over `Z/p^2` generated by products of the self-reciprocal
//! factors of `x^{p+1} - 1`, measured in the homogeneous weight (equivalently
//! the Hamming weight of the Gray image over `F_p`).

mod distance;
mod search;

use std::collections::BTreeSet;
use std::fmt;

use crate::engine::Factorization;
use crate::error::{Error, Result};
use crate::ring::{RingElem, RingPoly};

pub use distance::{
    min_distance, min_distance_exhaustive, min_distance_sampled, DistanceResult, Method, SearchConfig,
    DEFAULT_BUDGET, SAMPLE_CHUNK,
};
pub use search::{dichotomy, search_codes, symmetry_experiment, write_code_csv, CodeRow, Dichotomy};

fn require_e2(u: &RingElem) -> Result<()> {
    match u.modulus().exponent() {
        2 => Ok(()),
        e => Err(Error::UnsupportedExponent(e)),
    }
}

/// `0`, `p` or `p - 1` for zero, nonzero multiples of `p` and units of `Z/p^2`.
pub fn hom_weight(u: &RingElem) -> Result<u64> {
    require_e2(u)?;
    let p = u.modulus().prime();
    Ok(weight_of(u.to_u64().unwrap_or(0), p))
}

#[inline]
pub(crate) fn weight_of(v: u64, p: u64) -> u64 {
    if v == 0 {
        0
    } else if v.is_multiple_of(p) {
        p
    } else {
        p - 1
    }
}

/// `Φ(a + bp) = (b, b + a, b + 2a, …, b + (p-1)a)` applied coordinate-wise.
pub fn gray_map(v: &[RingElem]) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for u in v {
        require_e2(u)?;
        let p = u.modulus().prime();
        let x = u.to_u64().unwrap_or(0);
        let (a, b) = (x % p, x / p);
        out.extend((0..p).map(|j| (b + j * a) % p));
    }
    Ok(out)
}

/// Largest `d` with `Σ_{i<K} ⌈d / q^i⌉ <= N`.
pub fn griesmer_max_d(n: u64, k: u64, q: u64) -> u64 {
    let total = |d: u64| -> u64 {
        let mut sum = 0u64;
        let mut qi = 1u64;
        for i in 0..k {
            if qi >= d {
                // every remaining term is 1
                return sum + (k - i) * u64::from(d > 0);
            }
            sum += d.div_ceil(qi);
            qi = qi.saturating_mul(q);
        }
        sum
    };
    let mut d = 0;
    while d < n && total(d + 1) <= n {
        d += 1;
    }
    d
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GrayParams {
    /// Image length `N = n·p`.
    pub length: u64,
    /// `log_p |C| = 2·rank`.
    pub log_size: u64,
    /// Griesmer bound at `K = 2·rank`.
    pub griesmer_d: u64,
}

/// Cyclic code over `Z/p^2` generated by a product of factors.
#[derive(Clone, Debug)]
pub struct CyclicCodeSpec {
    pub p: u64,
    pub n: usize,
    /// Indices into [`Factorization::factors`], ascending.
    pub factor_indices: Vec<usize>,
    pub g: RingPoly,
    /// `n - deg g`; the code is free of this rank.
    pub rank: usize,
    pub gray: GrayParams,
}

impl CyclicCodeSpec {
    /// Bit `i` set iff factor `f_i` divides `g`.
    pub fn bitmask(&self) -> u64 {
        self.factor_indices.iter().fold(0, |m, &i| m | 1 << i)
    }

    pub(crate) fn g_residues(&self) -> Vec<u64> {
        self.g.coeffs().iter().map(|c| c.to_u64().unwrap_or(0)).collect()
    }
}

/// `g = ∏_{i ∈ subset} f_i`.
pub fn build_code(f: &Factorization, subset: &[usize]) -> Result<CyclicCodeSpec> {
    if f.exponent() != 2 {
        return Err(Error::UnsupportedExponent(f.exponent()));
    }
    let factors = f.factors();
    let indices: Vec<usize> = subset
        .iter()
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if indices.is_empty() {
        return Err(Error::InvalidArgument("empty factor subset".into()));
    }
    if let Some(bad) = indices.iter().find(|&&i| i >= factors.len()) {
        return Err(Error::InvalidArgument(format!(
            "factor index {bad} outside 0..{}",
            factors.len()
        )));
    }
    let mut g = RingPoly::one(f.modulus());
    for &i in &indices {
        g = g.mul(&factors[i])?;
    }
    let p = f.prime();
    let n = p as usize + 1;
    let rank = n - g.degree().unwrap_or(0);
    if rank == 0 {
        return Err(Error::EmptyCode);
    }
    if !g.is_self_reciprocal_monic() {
        return Err(Error::InternalInconsistency(format!(
            "generator {g} is not self-reciprocal"
        )));
    }
    let log_size = 2 * rank as u64;
    let length = n as u64 * p;
    Ok(CyclicCodeSpec {
        p,
        n,
        factor_indices: indices,
        g,
        rank,
        gray: GrayParams {
            length,
            log_size,
            griesmer_d: griesmer_max_d(length, log_size, p),
        },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PairingClass {
    /// Every conjugate pair is either fully in or fully out.
    Intact,
    /// At least one pair is split.
    Broken,
}

impl PairingClass {
    pub fn as_str(self) -> &'static str {
        match self {
            PairingClass::Intact => "intact",
            PairingClass::Broken => "broken",
        }
    }
}

impl fmt::Display for PairingClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairingReport {
    /// Conjugate pairs with both members in the subset.
    pub intact: Vec<(usize, usize)>,
    /// Pairs with exactly one member in the subset.
    pub broken: Vec<(usize, usize)>,
    /// Linear factors in the subset.
    pub linear: Vec<usize>,
}

impl PairingReport {
    pub fn class(&self) -> PairingClass {
        if self.broken.is_empty() {
            PairingClass::Intact
        } else {
            PairingClass::Broken
        }
    }
}

/// Conjugate pairs are quadratic factors whose middle coefficients sum to 0;
/// `x^2 + 1` is its own conjugate and never counted.
pub fn classify_pairing(subset: &[usize], f: &Factorization) -> PairingReport {
    let factors = f.factors();
    let chosen: BTreeSet<usize> = subset.iter().copied().collect();
    let middle: Vec<Option<RingElem>> = factors
        .iter()
        .map(|g| (g.degree() == Some(2)).then(|| g.coeff(1)))
        .collect();
    let mut report = PairingReport {
        intact: Vec::new(),
        broken: Vec::new(),
        linear: chosen
            .iter()
            .copied()
            .filter(|&i| factors.get(i).and_then(RingPoly::degree) == Some(1))
            .collect(),
    };
    for i in 0..factors.len() {
        let Some(a) = &middle[i] else { continue };
        if a.is_zero() {
            continue;
        }
        let partner = (i + 1..factors.len()).find(|&j| middle[j].as_ref().is_some_and(|b| (a + b).is_zero()));
        if let Some(j) = partner {
            match (chosen.contains(&i), chosen.contains(&j)) {
                (true, true) => report.intact.push((i, j)),
                (false, false) => {}
                _ => report.broken.push((i, j)),
            }
        }
    }
    report
}
