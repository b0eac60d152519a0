//! End-to-end factorization of `x^{p+1} - 1` over `Z/p^e`.
//!
//! Generator mode lifts the single seed `S_1`, recovers `A_1` over `Z/p^e` and
//! expands every other coefficient with the Dickson chain, for `O(e·p)` ring
//! operations in total. Targeted mode lifts only the requested conjugate
//! pairs, each independently of the others.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde_json::{json, Map, Number, Value};

use crate::dickson::dickson_chain;
use crate::error::{Error, Result};
use crate::ring::{Modulus, RingElem, RingPoly};
use crate::seedgen::{base_layer, find_primitive_quadratic, BaseLayer, PrimitiveQuadratic};
use crate::vlift::{build_v, recover_a, Lifter, TraceStep};

/// Seed used for the primitive-quadratic search unless one is supplied.
pub const DEFAULT_SEED: u64 = 28;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Generator,
    Targeted,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Generator => "generator",
            Mode::Targeted => "targeted",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "generator" => Ok(Mode::Generator),
            "targeted" => Ok(Mode::Targeted),
            other => Err(Error::InvalidArgument(format!("unknown mode {other:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct FactorOptions {
    pub mode: Mode,
    /// Pair indices for targeted mode; `None` means all of `1 … ⌊p/4⌋`.
    pub indices: Option<Vec<usize>>,
    pub seed: u64,
    /// Multiply the factors back together before returning.
    pub verify: bool,
    /// Skip the random search and use this quadratic.
    pub primitive: Option<PrimitiveQuadratic>,
}

impl Default for FactorOptions {
    fn default() -> Self {
        Self {
            mode: Mode::Generator,
            indices: None,
            seed: DEFAULT_SEED,
            verify: true,
            primitive: None,
        }
    }
}

impl FactorOptions {
    pub fn targeted(indices: Vec<usize>) -> Self {
        Self {
            mode: Mode::Targeted,
            indices: Some(indices),
            ..Self::default()
        }
    }
}

/// Irreducible factors of `x^{p+1} - 1` over `Z/p^e`.
///
/// Factor order is fixed: `x - 1`, `x + 1`, `x^2 + 1` (only for
/// `p ≡ 3 mod 4`), then `x^2 - A x + 1` for each entry of `quadratics`, which
/// lists every lifted pair as `A_i, -A_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    modulus: Modulus,
    psi: bool,
    quadratics: Vec<RingElem>,
    indices: Vec<usize>,
    mode: Mode,
    seed: u64,
    verified: bool,
}

impl Factorization {
    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    pub fn prime(&self) -> u64 {
        self.modulus.prime()
    }

    pub fn exponent(&self) -> u32 {
        self.modulus.exponent()
    }

    pub fn has_psi(&self) -> bool {
        self.psi
    }

    /// Coefficients `A` of the factors `x^2 - A x + 1`, pairs adjacent.
    pub fn quadratics(&self) -> &[RingElem] {
        &self.quadratics
    }

    /// Lifted pair indices.
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn verified(&self) -> bool {
        self.verified
    }

    pub fn factors(&self) -> Vec<RingPoly> {
        let m = &self.modulus;
        let mut out = vec![RingPoly::from_i64s(m, &[-1, 1]), RingPoly::from_i64s(m, &[1, 1])];
        if self.psi {
            out.push(RingPoly::from_i64s(m, &[1, 0, 1]));
        }
        out.extend(self.quadratics.iter().map(RingPoly::reciprocal_quadratic));
        out
    }

    /// Ascending coefficient vectors, for order-free comparison.
    pub fn factor_set(&self) -> BTreeSet<Vec<BigUint>> {
        self.factors().iter().map(RingPoly::to_biguints).collect()
    }

    pub fn degree(&self) -> usize {
        2 + 2 * usize::from(self.psi) + 2 * self.quadratics.len()
    }

    pub fn is_complete(&self) -> bool {
        self.degree() as u64 == self.prime() + 1
    }

    /// Exact product check against `x^{p+1} - 1`.
    pub fn verify(&self) -> Result<bool> {
        verify_factors(&self.modulus, &self.factors())
    }

    /// The same factorization read modulo `p^h`, `h <= e`.
    pub fn reduce_to(&self, h: u32) -> Result<Factorization> {
        let target = self.modulus.with_exponent(h)?;
        Ok(Factorization {
            quadratics: self
                .quadratics
                .iter()
                .map(|a| a.reduce_to(&target))
                .collect::<Result<_>>()?,
            modulus: target,
            ..self.clone()
        })
    }

    pub fn to_json(&self) -> Value {
        let factors: Vec<Value> = self
            .factors()
            .iter()
            .map(|f| {
                let coeffs: Vec<Value> = f.to_biguints().iter().map(big_number).collect();
                json!({ "degree": f.degree().unwrap_or(0), "coeffs": coeffs })
            })
            .collect();
        let mut doc = Map::new();
        doc.insert("p".into(), json!(self.prime()));
        doc.insert("e".into(), json!(self.exponent()));
        doc.insert("mode".into(), json!(self.mode.as_str()));
        if self.mode == Mode::Targeted {
            doc.insert("indices".into(), json!(self.indices));
        }
        doc.insert("factors".into(), Value::Array(factors));
        doc.insert("verified".into(), json!(self.verified));
        doc.insert("seed".into(), json!(self.seed));
        Value::Object(doc)
    }

    /// Inverse of [`Factorization::to_json`]. The document must list `x - 1`,
    /// `x + 1`, optionally `x^2 + 1`, and reciprocal quadratics in pairs.
    pub fn from_json(doc: &Value) -> Result<Factorization> {
        let parsed = FactorDocument::parse(doc)?;
        let m = &parsed.modulus;
        let minus_one = RingPoly::from_i64s(m, &[-1, 1]);
        let plus_one = RingPoly::from_i64s(m, &[1, 1]);
        let mut polys = parsed.factors.into_iter();
        if polys.next().as_ref() != Some(&minus_one) || polys.next().as_ref() != Some(&plus_one) {
            return Err(Error::MalformedDocument("expected x - 1 and x + 1 first".into()));
        }
        let mut psi = false;
        let mut quadratics = Vec::new();
        for f in polys {
            if f.degree() != Some(2) || !f.is_monic() || !f.coeff(0).is_one() {
                return Err(Error::MalformedDocument(format!("{f} is not x^2 + cx + 1")));
            }
            let a = -&f.coeff(1);
            if a.is_zero() && !psi && quadratics.is_empty() {
                psi = true;
            } else {
                quadratics.push(a);
            }
        }
        if quadratics.len() % 2 != 0 {
            return Err(Error::MalformedDocument("quadratics must come in pairs".into()));
        }
        let mode: Mode = parsed.mode.parse()?;
        let indices = match (mode, parsed.indices) {
            (Mode::Targeted, Some(ix)) => ix,
            (Mode::Targeted, None) => {
                return Err(Error::MalformedDocument(
                    "targeted document without indices".into(),
                ))
            }
            (Mode::Generator, _) => (1..=quadratics.len() / 2).collect(),
        };
        Ok(Factorization {
            modulus: parsed.modulus,
            psi,
            quadratics,
            indices,
            mode,
            seed: parsed.seed,
            verified: parsed.verified,
        })
    }
}

fn big_number(v: &BigUint) -> Value {
    Value::Number(Number::from_str(&v.to_string()).expect("decimal digits form a JSON number"))
}

/// A factorization document read without any structural assumptions.
#[derive(Clone, Debug)]
pub struct FactorDocument {
    pub modulus: Modulus,
    pub mode: String,
    pub indices: Option<Vec<usize>>,
    pub factors: Vec<RingPoly>,
    pub verified: bool,
    pub seed: u64,
}

impl FactorDocument {
    pub fn parse(doc: &Value) -> Result<Self> {
        let bad = |msg: &str| Error::MalformedDocument(msg.to_string());
        let obj = doc
            .as_object()
            .ok_or_else(|| bad("top level must be an object"))?;
        let int = |key: &str| {
            obj.get(key)
                .and_then(Value::as_u64)
                .ok_or_else(|| bad(&format!("missing integer field {key:?}")))
        };
        let p = int("p")?;
        let e = u32::try_from(int("e")?).map_err(|_| bad("e out of range"))?;
        let modulus = Modulus::new(p, e)?;
        let mode = obj
            .get("mode")
            .and_then(Value::as_str)
            .ok_or_else(|| bad("missing string field \"mode\""))?
            .to_string();
        let indices = match obj.get("indices") {
            None => None,
            Some(v) => Some(
                v.as_array()
                    .ok_or_else(|| bad("indices must be an array"))?
                    .iter()
                    .map(|i| i.as_u64().map(|i| i as usize).ok_or_else(|| bad("bad index")))
                    .collect::<Result<Vec<_>>>()?,
            ),
        };
        let verified = obj.get("verified").and_then(Value::as_bool).unwrap_or(false);
        let seed = int("seed")?;
        let mut factors = Vec::new();
        for f in obj
            .get("factors")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing array field \"factors\""))?
        {
            let coeffs = f
                .get("coeffs")
                .and_then(Value::as_array)
                .ok_or_else(|| bad("factor without coeffs"))?;
            let coeffs = coeffs
                .iter()
                .map(|c| match c {
                    Value::Number(n) => BigUint::from_str(&n.to_string())
                        .map(|v| modulus.from_biguint(&v))
                        .map_err(|_| bad("coefficients must be non-negative integers")),
                    _ => Err(bad("coefficients must be integers")),
                })
                .collect::<Result<Vec<_>>>()?;
            let poly = RingPoly::new(&modulus, coeffs)?;
            let degree = f.get("degree").and_then(Value::as_u64);
            if degree != Some(poly.degree().unwrap_or(0) as u64) {
                return Err(bad("declared degree does not match coefficients"));
            }
            factors.push(poly);
        }
        Ok(Self {
            modulus,
            mode,
            indices,
            factors,
            verified,
            seed,
        })
    }

    pub fn verify(&self) -> Result<bool> {
        verify_factors(&self.modulus, &self.factors)
    }
}

/// `∏ factors == x^{p+1} - 1` over the given ring, by exact multiplication.
pub fn verify_factors(modulus: &Modulus, factors: &[RingPoly]) -> Result<bool> {
    let n = (modulus.prime() + 1) as usize;
    let degree: usize = factors.iter().map(|f| f.degree().unwrap_or(0)).sum();
    if degree != n {
        return Err(Error::IncompleteFactorization {
            got: degree,
            expected: n,
        });
    }
    let mut acc = RingPoly::one(modulus);
    for f in factors {
        acc = acc.mul(f)?;
    }
    Ok(acc == RingPoly::x_pow_minus_one(modulus, n))
}

fn primitive_for(p: u64, opts: &FactorOptions) -> Result<PrimitiveQuadratic> {
    match &opts.primitive {
        Some(pq) => Ok(pq.clone()),
        None => find_primitive_quadratic(p, opts.seed),
    }
}

/// Lifts pair `index` to `Z/p^e` and returns `A_index`.
fn lift_pair(base: &BaseLayer, lifter: Option<&Lifter>, target: &Modulus, index: usize) -> Result<RingElem> {
    let a_base = base
        .a(index)
        .ok_or_else(|| Error::InternalInconsistency(format!("no base coefficient at {index}")))?;
    match lifter {
        None => a_base.embed(target),
        Some(lifter) => {
            let state = lifter.lift_to_target(lifter.init_seed(base, index)?)?;
            recover_a(&state.s_current, &state.a_base, target)
        }
    }
}

fn generator_quadratics(base: &BaseLayer, target: &Modulus) -> Result<Vec<RingElem>> {
    let p = base.prime();
    let kv = base.kv();
    if kv == 0 {
        return Ok(Vec::new());
    }
    let lifter = (target.exponent() > 1)
        .then(|| Lifter::new(build_v(p), target))
        .transpose()?;
    let a1 = lift_pair(base, lifter.as_ref(), target, 1)?;
    let half = p.div_ceil(2) as usize;
    let chain = dickson_chain(&a1, half - 1);
    let mut out = Vec::with_capacity(2 * kv);
    for i in 1..=kv {
        let a = &chain[i - 1];
        let partner = &chain[half - i - 1];
        if partner != &-a {
            return Err(Error::InternalInconsistency(format!(
                "A_{} != -A_{i} over {target}",
                half - i
            )));
        }
        if Some(a.residue_mod_p()) != base.a(i).and_then(RingElem::to_u64) {
            return Err(Error::InternalInconsistency(format!(
                "lifted A_{i} does not reduce to its base residue"
            )));
        }
        out.push(a.clone());
        out.push(partner.clone());
    }
    if base.has_psi() && !chain[(p as usize + 1) / 4 - 1].is_zero() {
        return Err(Error::InternalInconsistency("A_(p+1)/4 is not 0".into()));
    }
    Ok(out)
}

/// Factors `x^{p+1} - 1` over `Z/p^e`.
pub fn factor(p: u64, e: u32, opts: &FactorOptions) -> Result<Factorization> {
    let modulus = Modulus::new(p, e)?;
    let pq = primitive_for(p, opts)?;
    let base = base_layer(p, &pq)?;
    let kv = base.kv();
    let (quadratics, indices) = match opts.mode {
        Mode::Generator => (generator_quadratics(&base, &modulus)?, (1..=kv).collect()),
        Mode::Targeted => {
            let indices: Vec<usize> = match &opts.indices {
                Some(ix) => {
                    let set: BTreeSet<usize> = ix.iter().copied().collect();
                    if let Some(bad) = set.iter().find(|&&i| i == 0 || i > kv) {
                        return Err(Error::InvalidArgument(format!(
                            "pair index {bad} outside 1..={kv}"
                        )));
                    }
                    set.into_iter().collect()
                }
                None => (1..=kv).collect(),
            };
            let lifter = (e > 1).then(|| Lifter::new(build_v(p), &modulus)).transpose()?;
            let mut quadratics = Vec::with_capacity(2 * indices.len());
            for &i in &indices {
                let a = lift_pair(&base, lifter.as_ref(), &modulus, i)?;
                quadratics.push(-&a);
                quadratics.insert(quadratics.len() - 1, a);
            }
            (quadratics, indices)
        }
    };
    let mut out = Factorization {
        modulus,
        psi: base.has_psi(),
        quadratics,
        indices,
        mode: opts.mode,
        seed: opts.seed,
        verified: false,
    };
    if opts.verify && out.is_complete() {
        if !out.verify()? {
            return Err(Error::VerificationFailed {
                n: p + 1,
                modulus: out.modulus.to_string(),
            });
        }
        out.verified = true;
    }
    Ok(out)
}

/// `S^{(h)}` and `A^{(h)}` for `h = 1 … e` along the lift of pair `index`.
pub fn lift_trace(p: u64, e: u32, index: usize, opts: &FactorOptions) -> Result<Vec<TraceStep>> {
    let modulus = Modulus::new(p, e)?;
    let base = base_layer(p, &primitive_for(p, opts)?)?;
    let lifter = Lifter::new(build_v(p), &modulus)?;
    lifter.trace(lifter.init_seed(&base, index)?)
}
