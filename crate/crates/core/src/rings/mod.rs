//! Exactly represented coefficient rings.
//!
//! A [`RingDescriptor`] names a ring and owns its operations; a
//! [`RingValue`] is a payload that some descriptor accepts. Mixing payloads
//! from incompatible rings reports `DescriptorMismatch`. All arithmetic is
//! exact: integers and rationals are arbitrary precision, residues are
//! reduced representatives, polynomials are sparse with integer
//! coefficients. There is no floating point anywhere in this crate.

mod mpoly;

pub use mpoly::MPoly;

use alloc::borrow::ToOwned;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::truncation::is_prime;

/// Cap on eager enumeration of a finite ring, as a guard against
/// accidentally huge requests. Callers that materialize Witt rings apply
/// their own, smaller caps.
const ENUMERATION_CAP: u128 = 1 << 24;

/// An element of one of the supported rings.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum RingValue {
    Int(BigInt),
    Rat(BigRational),
    Res { modulus: u64, value: u64 },
    Poly(MPoly),
}

impl RingValue {
    pub fn as_int(&self) -> Option<&BigInt> {
        match self {
            RingValue::Int(x) => Some(x),
            _ => None,
        }
    }

    pub fn as_rat(&self) -> Option<&BigRational> {
        match self {
            RingValue::Rat(x) => Some(x),
            _ => None,
        }
    }

    pub fn as_res(&self) -> Option<(u64, u64)> {
        match self {
            RingValue::Res { modulus, value } => Some((*modulus, *value)),
            _ => None,
        }
    }

    pub fn as_poly(&self) -> Option<&MPoly> {
        match self {
            RingValue::Poly(p) => Some(p),
            _ => None,
        }
    }

    fn kind_name(&self) -> &'static str {
        match self {
            RingValue::Int(_) => "integer",
            RingValue::Rat(_) => "rational",
            RingValue::Res { .. } => "residue",
            RingValue::Poly(_) => "polynomial",
        }
    }
}

/// One of the supported coefficient rings.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum RingDescriptor {
    /// The ring of integers.
    Integers,
    /// The field of rational numbers.
    Rationals,
    /// Integers modulo m, m >= 2.
    IntegersModM(u64),
    /// Integers localized at a prime p: rationals with denominator coprime
    /// to p.
    LocalIntegersAtP(u64),
    /// Multivariate polynomials over the integers.
    PolynomialOverZ { vars: Vec<String> },
    /// A quotient of a polynomial ring over the integers by an optional
    /// integer modulus and monic univariate relations, one per variable at
    /// most. This covers rings like Z[i] and small finite fields without
    /// any Groebner machinery.
    QuotientPolynomial { vars: Vec<String>, relations: Vec<MPoly>, torsion_free: bool },
}

/// Parsed shape of a quotient ring's relation list.
struct QuotientInfo {
    modulus: Option<BigInt>,
    /// var index -> (degree, rewrite of x^degree as a lower-degree poly)
    monic: Vec<Option<(u32, MPoly)>>,
}

impl RingDescriptor {
    pub fn integers() -> Self {
        RingDescriptor::Integers
    }

    pub fn rationals() -> Self {
        RingDescriptor::Rationals
    }

    pub fn integers_mod(m: u64) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidRing { reason: format!("modulus {m} is below 2") });
        }
        Ok(RingDescriptor::IntegersModM(m))
    }

    pub fn local_at(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime { value: p });
        }
        Ok(RingDescriptor::LocalIntegersAtP(p))
    }

    pub fn polynomial_over_z(vars: Vec<String>) -> Result<Self> {
        validate_vars(&vars)?;
        Ok(RingDescriptor::PolynomialOverZ { vars })
    }

    pub fn quotient_polynomial(
        vars: Vec<String>,
        relations: Vec<MPoly>,
        torsion_free: bool,
    ) -> Result<Self> {
        validate_vars(&vars)?;
        let d = RingDescriptor::QuotientPolynomial { vars, relations, torsion_free };
        let info = d.quotient_info()?;
        if torsion_free && info.modulus.is_some() {
            return Err(Error::InvalidRing {
                reason: "a ring with an integer modulus cannot be declared torsion-free".to_owned(),
            });
        }
        Ok(d)
    }

    /// Short human-readable name, used in error messages.
    pub fn name(&self) -> String {
        match self {
            RingDescriptor::Integers => "Z".to_owned(),
            RingDescriptor::Rationals => "Q".to_owned(),
            RingDescriptor::IntegersModM(m) => format!("Z/{m}"),
            RingDescriptor::LocalIntegersAtP(p) => format!("Z_({p})"),
            RingDescriptor::PolynomialOverZ { vars } => format!("Z[{}]", vars.join(",")),
            RingDescriptor::QuotientPolynomial { vars, relations, .. } => {
                let rels: Vec<String> =
                    relations.iter().map(|r| r.to_string_with(vars)).collect();
                format!("Z[{}]/({})", vars.join(","), rels.join(", "))
            }
        }
    }

    pub fn is_torsion_free(&self) -> bool {
        match self {
            RingDescriptor::Integers
            | RingDescriptor::Rationals
            | RingDescriptor::LocalIntegersAtP(_)
            | RingDescriptor::PolynomialOverZ { .. } => true,
            RingDescriptor::IntegersModM(_) => false,
            RingDescriptor::QuotientPolynomial { torsion_free, .. } => *torsion_free,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.cardinality().is_some()
    }

    /// Number of elements for finite rings, None otherwise.
    pub fn cardinality(&self) -> Option<u128> {
        match self {
            RingDescriptor::IntegersModM(m) => Some(*m as u128),
            RingDescriptor::QuotientPolynomial { vars, .. } => {
                let info = self.quotient_info().ok()?;
                let m = info.modulus.as_ref()?.to_u128()?;
                let mut count: u128 = 1;
                for v in 0..vars.len() {
                    let (deg, _) = info.monic[v].as_ref()?;
                    count = count.checked_mul(m.checked_pow(*deg)?)?;
                }
                Some(count)
            }
            _ => None,
        }
    }

    /// True when every prime other than p is invertible, which is what the
    /// idempotent constructions require. Only torsion-free rings qualify
    /// here.
    pub fn is_zp_algebra(&self, p: u64) -> bool {
        match self {
            RingDescriptor::Rationals => true,
            RingDescriptor::LocalIntegersAtP(q) => *q == p,
            _ => false,
        }
    }

    pub fn zero(&self) -> RingValue {
        self.from_i64(0)
    }

    pub fn one(&self) -> RingValue {
        self.from_i64(1)
    }

    pub fn from_i64(&self, k: i64) -> RingValue {
        self.from_bigint(BigInt::from(k))
    }

    /// The canonical image of an integer, using that every supported ring
    /// is a Z-algebra.
    pub fn from_bigint(&self, k: BigInt) -> RingValue {
        match self {
            RingDescriptor::Integers => RingValue::Int(k),
            RingDescriptor::Rationals | RingDescriptor::LocalIntegersAtP(_) => {
                RingValue::Rat(BigRational::from_integer(k))
            }
            RingDescriptor::IntegersModM(m) => {
                let r = k.mod_floor(&BigInt::from(*m));
                RingValue::Res { modulus: *m, value: r.to_u64().expect("reduced residue fits") }
            }
            RingDescriptor::PolynomialOverZ { vars } => {
                RingValue::Poly(MPoly::constant(vars.len(), k))
            }
            RingDescriptor::QuotientPolynomial { vars, .. } => {
                let p = MPoly::constant(vars.len(), k);
                RingValue::Poly(self.reduce(p))
            }
        }
    }

    /// Checks that `v` is a structurally valid element of this ring.
    pub fn check(&self, v: &RingValue) -> Result<()> {
        let ok = match (self, v) {
            (RingDescriptor::Integers, RingValue::Int(_)) => true,
            (RingDescriptor::Rationals, RingValue::Rat(_)) => true,
            (RingDescriptor::LocalIntegersAtP(p), RingValue::Rat(x)) => {
                !x.denom().is_multiple_of(&BigInt::from(*p))
            }
            (RingDescriptor::IntegersModM(m), RingValue::Res { modulus, value }) => {
                modulus == m && value < m
            }
            (RingDescriptor::PolynomialOverZ { vars }, RingValue::Poly(p))
            | (RingDescriptor::QuotientPolynomial { vars, .. }, RingValue::Poly(p)) => {
                p.nvars() == vars.len()
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::DescriptorMismatch {
                expected: self.name(),
                found: v.kind_name().to_owned(),
            })
        }
    }

    /// Canonical form of a value: residues reduced, quotient polynomials
    /// rewritten by their relations. Rationals are always reduced by
    /// construction.
    pub fn canonical(&self, v: &RingValue) -> Result<RingValue> {
        self.check(v)?;
        match (self, v) {
            (RingDescriptor::QuotientPolynomial { .. }, RingValue::Poly(p)) => {
                Ok(RingValue::Poly(self.reduce(p.clone())))
            }
            _ => Ok(v.clone()),
        }
    }

    pub fn eq_values(&self, x: &RingValue, y: &RingValue) -> Result<bool> {
        Ok(self.canonical(x)? == self.canonical(y)?)
    }

    pub fn is_zero(&self, x: &RingValue) -> Result<bool> {
        self.eq_values(x, &self.zero())
    }

    pub fn add(&self, x: &RingValue, y: &RingValue) -> Result<RingValue> {
        self.check(x)?;
        self.check(y)?;
        Ok(match (x, y) {
            (RingValue::Int(a), RingValue::Int(b)) => RingValue::Int(a + b),
            (RingValue::Rat(a), RingValue::Rat(b)) => RingValue::Rat(a + b),
            (RingValue::Res { modulus, value: a }, RingValue::Res { value: b, .. }) => {
                let m = *modulus as u128;
                RingValue::Res { modulus: *modulus, value: ((*a as u128 + *b as u128) % m) as u64 }
            }
            (RingValue::Poly(a), RingValue::Poly(b)) => RingValue::Poly(self.reduce(a.add(b))),
            _ => unreachable!("check admits matching payloads only"),
        })
    }

    pub fn neg(&self, x: &RingValue) -> Result<RingValue> {
        self.check(x)?;
        Ok(match x {
            RingValue::Int(a) => RingValue::Int(-a),
            RingValue::Rat(a) => RingValue::Rat(-a),
            RingValue::Res { modulus, value } => {
                RingValue::Res { modulus: *modulus, value: (*modulus - *value) % *modulus }
            }
            RingValue::Poly(a) => RingValue::Poly(self.reduce(a.neg())),
        })
    }

    pub fn sub(&self, x: &RingValue, y: &RingValue) -> Result<RingValue> {
        self.add(x, &self.neg(y)?)
    }

    pub fn mul(&self, x: &RingValue, y: &RingValue) -> Result<RingValue> {
        self.check(x)?;
        self.check(y)?;
        Ok(match (x, y) {
            (RingValue::Int(a), RingValue::Int(b)) => RingValue::Int(a * b),
            (RingValue::Rat(a), RingValue::Rat(b)) => RingValue::Rat(a * b),
            (RingValue::Res { modulus, value: a }, RingValue::Res { value: b, .. }) => {
                let m = *modulus as u128;
                RingValue::Res { modulus: *modulus, value: ((*a as u128 * *b as u128) % m) as u64 }
            }
            (RingValue::Poly(a), RingValue::Poly(b)) => RingValue::Poly(self.reduce(a.mul(b))),
            _ => unreachable!("check admits matching payloads only"),
        })
    }

    /// x * k for an integer k, without building a second ring element in
    /// the common cases.
    pub fn mul_int(&self, x: &RingValue, k: i64) -> Result<RingValue> {
        self.check(x)?;
        Ok(match x {
            RingValue::Int(a) => RingValue::Int(a * k),
            RingValue::Rat(a) => RingValue::Rat(a * BigInt::from(k)),
            RingValue::Res { .. } => {
                let kv = self.from_i64(k);
                return self.mul(x, &kv);
            }
            RingValue::Poly(a) => RingValue::Poly(self.reduce(a.mul_scalar(&BigInt::from(k)))),
        })
    }

    pub fn pow(&self, x: &RingValue, e: u64) -> Result<RingValue> {
        self.check(x)?;
        Ok(match x {
            RingValue::Int(a) => RingValue::Int(num_traits::pow::Pow::pow(a, e)),
            RingValue::Rat(a) => RingValue::Rat(BigRational::new_raw(
                num_traits::pow::Pow::pow(a.numer(), e),
                num_traits::pow::Pow::pow(a.denom(), e),
            )),
            RingValue::Res { modulus, value } => {
                RingValue::Res { modulus: *modulus, value: modpow(*value, e, *modulus) }
            }
            RingValue::Poly(_) => {
                let mut acc = self.one();
                let mut base = x.clone();
                let mut e = e;
                while e > 0 {
                    if e & 1 == 1 {
                        acc = self.mul(&acc, &base)?;
                    }
                    e >>= 1;
                    if e > 0 {
                        base = self.mul(&base, &base)?;
                    }
                }
                acc
            }
        })
    }

    /// Solves n * y = x exactly in a torsion-free ring. `NotDivisible`
    /// reports a genuine obstruction; this is the primitive behind ghost
    /// integrality checks.
    pub fn div_exact_by_int(&self, x: &RingValue, n: i64) -> Result<RingValue> {
        assert!(n != 0, "exact division by zero");
        if !self.is_torsion_free() {
            return Err(Error::InvalidRing {
                reason: format!("exact integer division needs a torsion-free ring, got {}", self.name()),
            });
        }
        self.check(x)?;
        let nn = BigInt::from(n);
        match (self, x) {
            (RingDescriptor::Integers, RingValue::Int(a)) => {
                let (q, r) = a.div_rem(&nn);
                if r.is_zero() {
                    Ok(RingValue::Int(q))
                } else {
                    Err(Error::NotDivisible { divisor: n })
                }
            }
            (RingDescriptor::Rationals, RingValue::Rat(a)) => {
                Ok(RingValue::Rat(a / BigRational::from_integer(nn)))
            }
            (RingDescriptor::LocalIntegersAtP(p), RingValue::Rat(a)) => {
                let y = a / BigRational::from_integer(nn);
                if y.denom().is_multiple_of(&BigInt::from(*p)) {
                    Err(Error::NotDivisible { divisor: n })
                } else {
                    Ok(RingValue::Rat(y))
                }
            }
            (_, RingValue::Poly(a)) => match a.div_exact(&nn) {
                Some(q) => Ok(RingValue::Poly(q)),
                None => Err(Error::NotDivisible { divisor: n }),
            },
            _ => unreachable!("check admits matching payloads only"),
        }
    }

    /// Whether x is a unit. Supported for the numeric rings and for
    /// constants in polynomial rings; non-constant candidates in quotient
    /// rings are rejected as unsupported rather than guessed at.
    pub fn is_unit(&self, x: &RingValue) -> Result<bool> {
        self.check(x)?;
        match (self, x) {
            (RingDescriptor::Integers, RingValue::Int(a)) => Ok(a.abs().is_one()),
            (RingDescriptor::Rationals, RingValue::Rat(a)) => Ok(!a.is_zero()),
            (RingDescriptor::LocalIntegersAtP(p), RingValue::Rat(a)) => {
                Ok(!a.is_zero() && !a.numer().is_multiple_of(&BigInt::from(*p)))
            }
            (RingDescriptor::IntegersModM(m), RingValue::Res { value, .. }) => {
                Ok(value.gcd(m) == 1)
            }
            (_, RingValue::Poly(_)) => {
                let canon = match self.canonical(x)? {
                    RingValue::Poly(q) => q,
                    _ => unreachable!(),
                };
                match canon.as_constant() {
                    Some(c) => match self {
                        RingDescriptor::PolynomialOverZ { .. } => Ok(c.abs().is_one()),
                        RingDescriptor::QuotientPolynomial { .. } => {
                            let info = self.quotient_info()?;
                            match info.modulus {
                                None => Ok(c.abs().is_one()),
                                Some(m) => Ok(c.gcd(&m).is_one()),
                            }
                        }
                        _ => unreachable!(),
                    },
                    None if self.is_finite() => {
                        let x = RingValue::Poly(canon);
                        let one = self.one();
                        for y in self.enumerate()? {
                            if self.eq_values(&self.mul(&x, &y)?, &one)? {
                                return Ok(true);
                            }
                        }
                        Ok(false)
                    }
                    None => Err(Error::InvalidRing {
                        reason: format!(
                            "unit detection for non-constant elements of {} is not supported",
                            self.name()
                        ),
                    }),
                }
            }
            _ => unreachable!("check admits matching payloads only"),
        }
    }

    /// Evaluates an integer polynomial at ring elements, one per variable.
    pub fn eval_mpoly(&self, poly: &MPoly, values: &[RingValue]) -> Result<RingValue> {
        if values.len() != poly.nvars() {
            return Err(Error::ShapeMismatch {
                reason: format!(
                    "polynomial in {} variables evaluated at {} values",
                    poly.nvars(),
                    values.len()
                ),
            });
        }
        for v in values {
            self.check(v)?;
        }
        let mut acc = self.zero();
        for (exps, c) in poly.terms() {
            let mut term = self.from_bigint(c.clone());
            for (i, &e) in exps.iter().enumerate() {
                if e > 0 {
                    term = self.mul(&term, &self.pow(&values[i], e as u64)?)?;
                }
            }
            acc = self.add(&acc, &term)?;
        }
        Ok(acc)
    }

    /// All elements of a finite ring in a deterministic order.
    pub fn enumerate(&self) -> Result<Vec<RingValue>> {
        let card = self.cardinality().ok_or(Error::NotFinite)?;
        if card > ENUMERATION_CAP {
            return Err(Error::TooLarge { size: card, cap: ENUMERATION_CAP });
        }
        match self {
            RingDescriptor::IntegersModM(m) => {
                Ok((0..*m).map(|v| RingValue::Res { modulus: *m, value: v }).collect())
            }
            RingDescriptor::QuotientPolynomial { vars, .. } => {
                let info = self.quotient_info()?;
                let m = info.modulus.as_ref().expect("finite quotient has a modulus");
                let m = m.to_u64().expect("modulus fits");
                // Basis monomials: exponent tuples below each relation degree.
                let degs: Vec<u32> = (0..vars.len())
                    .map(|v| info.monic[v].as_ref().expect("finite quotient is monic").0)
                    .collect();
                let mut basis: Vec<Vec<u32>> = vec![vec![0; vars.len()]];
                for (v, &d) in degs.iter().enumerate() {
                    let mut next = Vec::new();
                    for mono in &basis {
                        for e in 0..d {
                            let mut m2 = mono.clone();
                            m2[v] = e;
                            next.push(m2);
                        }
                    }
                    basis = next;
                }
                basis.sort();
                let mut out = Vec::with_capacity(card as usize);
                let mut digits = vec![0u64; basis.len()];
                loop {
                    let poly = MPoly::from_terms(
                        vars.len(),
                        basis
                            .iter()
                            .zip(&digits)
                            .filter(|(_, &d)| d != 0)
                            .map(|(mono, &d)| (mono.clone(), BigInt::from(d))),
                    );
                    out.push(RingValue::Poly(poly));
                    let mut i = 0;
                    loop {
                        if i == digits.len() {
                            return Ok(out);
                        }
                        digits[i] += 1;
                        if digits[i] < m {
                            break;
                        }
                        digits[i] = 0;
                        i += 1;
                    }
                }
            }
            _ => Err(Error::NotFinite),
        }
    }

    /// A random element with numerators and denominators bounded by
    /// `bound`, suitable for randomized law checking.
    pub fn sample<R: rand::Rng + ?Sized>(&self, rng: &mut R, bound: i64) -> RingValue {
        let bound = bound.max(1);
        match self {
            RingDescriptor::Integers => self.from_i64(rng.gen_range(-bound..=bound)),
            RingDescriptor::Rationals => {
                let num = BigInt::from(rng.gen_range(-bound..=bound));
                let den = BigInt::from(rng.gen_range(1..=bound));
                RingValue::Rat(BigRational::new(num, den))
            }
            RingDescriptor::LocalIntegersAtP(p) => {
                let num = BigInt::from(rng.gen_range(-bound..=bound));
                let den = loop {
                    let d = rng.gen_range(1..=bound) as u64;
                    if d % p != 0 {
                        break BigInt::from(d);
                    }
                };
                RingValue::Rat(BigRational::new(num, den))
            }
            RingDescriptor::IntegersModM(m) => {
                RingValue::Res { modulus: *m, value: rng.gen_range(0..*m) }
            }
            RingDescriptor::PolynomialOverZ { vars }
            | RingDescriptor::QuotientPolynomial { vars, .. } => {
                let n = vars.len();
                let mut p = MPoly::constant(n, BigInt::from(rng.gen_range(-bound..=bound)));
                for v in 0..n {
                    let c = rng.gen_range(-bound..=bound);
                    if c != 0 {
                        p = p.add(&MPoly::var(n, v).mul_scalar(&BigInt::from(c)));
                    }
                }
                match self.canonical(&RingValue::Poly(p)) {
                    Ok(v) => v,
                    Err(_) => self.zero(),
                }
            }
        }
    }

    /// Renders a value for human consumption.
    pub fn fmt_value(&self, v: &RingValue) -> String {
        match v {
            RingValue::Int(a) => format!("{a}"),
            RingValue::Rat(a) => {
                if a.denom().is_one() {
                    format!("{}", a.numer())
                } else {
                    format!("{}/{}", a.numer(), a.denom())
                }
            }
            RingValue::Res { value, .. } => format!("{value}"),
            RingValue::Poly(p) => match self {
                RingDescriptor::PolynomialOverZ { vars }
                | RingDescriptor::QuotientPolynomial { vars, .. } => p.to_string_with(vars),
                _ => format!("{p}"),
            },
        }
    }

    fn quotient_info(&self) -> Result<QuotientInfo> {
        let (vars, relations) = match self {
            RingDescriptor::QuotientPolynomial { vars, relations, .. } => (vars, relations),
            _ => {
                return Err(Error::InvalidRing {
                    reason: "not a quotient polynomial ring".to_owned(),
                })
            }
        };
        let mut modulus: Option<BigInt> = None;
        let mut monic: Vec<Option<(u32, MPoly)>> = vec![None; vars.len()];
        for rel in relations {
            if rel.nvars() != vars.len() {
                return Err(Error::InvalidRing {
                    reason: "relation variable count differs from the ring".to_owned(),
                });
            }
            if let Some(c) = rel.as_constant() {
                let c = c.abs();
                if c < BigInt::from(2) {
                    return Err(Error::InvalidRing {
                        reason: "constant relation must have absolute value at least 2".to_owned(),
                    });
                }
                if modulus.replace(c).is_some() {
                    return Err(Error::InvalidRing {
                        reason: "more than one integer modulus relation".to_owned(),
                    });
                }
                continue;
            }
            let support = rel.support();
            if support.len() != 1 {
                return Err(Error::InvalidRing {
                    reason: "relations must be univariate or constant".to_owned(),
                });
            }
            let var = support[0];
            let deg = rel.degree_in(var);
            let mut lead = None;
            let mut tail = Vec::new();
            for (exps, c) in rel.terms() {
                if exps[var] == deg {
                    if exps.iter().enumerate().any(|(i, &e)| i != var && e > 0) {
                        return Err(Error::InvalidRing {
                            reason: "relations must be univariate or constant".to_owned(),
                        });
                    }
                    lead = Some(c.clone());
                } else {
                    tail.push((exps.to_vec(), c.clone()));
                }
            }
            let lead = lead.expect("degree term exists");
            if !lead.abs().is_one() {
                return Err(Error::InvalidRing {
                    reason: "univariate relations must be monic up to sign".to_owned(),
                });
            }
            // lead * x^deg + tail = 0, so x^deg = -tail / lead.
            let mut lower = MPoly::from_terms(vars.len(), tail).neg();
            if lead.is_negative() {
                lower = lower.neg();
            }
            if monic[var].replace((deg, lower)).is_some() {
                return Err(Error::InvalidRing {
                    reason: "two relations constrain the same variable".to_owned(),
                });
            }
        }
        Ok(QuotientInfo { modulus, monic })
    }

    /// Rewrites a raw polynomial into the canonical representative of its
    /// class in a quotient ring. For plain polynomial rings this is the
    /// identity.
    fn reduce(&self, p: MPoly) -> MPoly {
        match self {
            RingDescriptor::QuotientPolynomial { .. } => {
                let info = self.quotient_info().expect("descriptor was validated on construction");
                let mut cur = p;
                for (v, slot) in info.monic.iter().enumerate() {
                    if let Some((deg, lower)) = slot {
                        cur = cur.reduce_power(v, *deg, lower);
                    }
                }
                if let Some(m) = &info.modulus {
                    cur = cur.map_coeffs(|c| c.mod_floor(m));
                }
                cur
            }
            _ => p,
        }
    }
}

fn validate_vars(vars: &[String]) -> Result<()> {
    if vars.is_empty() {
        return Err(Error::InvalidRing { reason: "polynomial ring needs at least one variable".to_owned() });
    }
    for (i, v) in vars.iter().enumerate() {
        if v.is_empty() || vars[..i].contains(v) {
            return Err(Error::InvalidRing {
                reason: format!("variable names must be nonempty and distinct, got {vars:?}"),
            });
        }
    }
    Ok(())
}

fn modpow(base: u64, mut e: u64, m: u64) -> u64 {
    let m = m as u128;
    let mut acc: u128 = 1 % m;
    let mut b = base as u128 % m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        e >>= 1;
        b = b * b % m;
    }
    acc as u64
}
