//! Witt vectors over a truncation set and their arithmetic.
//!
//! Two interchangeable evaluation paths are provided. The ghost path maps a
//! vector to its ghost coordinates, operates componentwise, and solves back;
//! it is only available over torsion-free rings, where the solve is exact
//! and unique. The table path evaluates the universal coordinate
//! polynomials and works over every ring. `ArithMode::CrossValidate` runs
//! both where legal and treats any disagreement as an internal bug.

pub mod table;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use rand::Rng;
use rand::SeedableRng;

use crate::error::{Error, Result};
use crate::rings::{RingDescriptor, RingValue};
use crate::truncation::{divisors, TruncationSet};
use table::UniversalPolyTable;

/// A Witt vector: one coordinate per element of its truncation set, all
/// from one coefficient ring.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WittVector {
    s: TruncationSet,
    ring: RingDescriptor,
    coords: Vec<RingValue>,
}

/// The image of a Witt vector under the ghost map, componentwise.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GhostVector {
    s: TruncationSet,
    ring: RingDescriptor,
    components: Vec<RingValue>,
}

impl WittVector {
    /// Builds a vector from coordinates listed in the order of the set's
    /// sorted elements. Coordinates are canonicalized and checked against
    /// the ring.
    pub fn new(s: TruncationSet, ring: RingDescriptor, coords: Vec<RingValue>) -> Result<Self> {
        if coords.len() != s.len() {
            return Err(Error::ShapeMismatch {
                reason: format!("{} coordinates for a set of size {}", coords.len(), s.len()),
            });
        }
        let coords = coords
            .iter()
            .map(|c| ring.canonical(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(WittVector { s, ring, coords })
    }

    pub fn from_i64_coords(s: TruncationSet, ring: RingDescriptor, coords: &[i64]) -> Result<Self> {
        let vals = coords.iter().map(|&k| ring.from_i64(k)).collect();
        WittVector::new(s, ring, vals)
    }

    pub fn zero(s: TruncationSet, ring: RingDescriptor) -> Self {
        let coords = (0..s.len()).map(|_| ring.zero()).collect();
        WittVector { s, ring, coords }
    }

    /// The multiplicative identity: the Teichmueller lift of 1.
    pub fn one(s: TruncationSet, ring: RingDescriptor) -> Self {
        teichmuller(ring.one(), s, ring).expect("1 is a valid coordinate")
    }

    pub fn set(&self) -> &TruncationSet {
        &self.s
    }

    pub fn ring(&self) -> &RingDescriptor {
        &self.ring
    }

    pub fn coords(&self) -> &[RingValue] {
        &self.coords
    }

    /// Coordinate at truncation index `n`, if `n` is in the set.
    pub fn coord(&self, n: u64) -> Option<&RingValue> {
        self.s.index_of(n).map(|i| &self.coords[i])
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| {
            self.ring.is_zero(c).expect("coordinates were validated")
        })
    }

    /// Forgets the coordinates outside `t`. This is the restriction ring
    /// homomorphism when `t` is a truncation subset.
    pub fn restrict(&self, t: &TruncationSet) -> Result<WittVector> {
        if !t.is_subset_of(&self.s) {
            return Err(Error::NotSubset);
        }
        let coords = t
            .iter()
            .map(|n| self.coord(n).expect("subset element present").clone())
            .collect();
        Ok(WittVector { s: t.clone(), ring: self.ring.clone(), coords })
    }

    /// Coordinatewise image under the canonical map from the integers into
    /// `target`. Only defined for vectors over the integers.
    pub fn embed_integers_into(&self, target: &RingDescriptor) -> Result<WittVector> {
        let coords = self
            .coords
            .iter()
            .map(|c| match c.as_int() {
                Some(k) => Ok(target.from_bigint(k.clone())),
                None => Err(Error::WrongRing {
                    reason: String::from("embedding is defined for integer vectors only"),
                }),
            })
            .collect::<Result<Vec<_>>>()?;
        WittVector::new(self.s.clone(), target.clone(), coords)
    }
}

impl fmt::Display for WittVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", self.ring.fmt_value(c))?;
        }
        write!(f, ")")
    }
}

impl GhostVector {
    pub fn new(s: TruncationSet, ring: RingDescriptor, components: Vec<RingValue>) -> Result<Self> {
        if components.len() != s.len() {
            return Err(Error::ShapeMismatch {
                reason: format!("{} components for a set of size {}", components.len(), s.len()),
            });
        }
        for c in &components {
            ring.check(c)?;
        }
        Ok(GhostVector { s, ring, components })
    }

    pub fn set(&self) -> &TruncationSet {
        &self.s
    }

    pub fn ring(&self) -> &RingDescriptor {
        &self.ring
    }

    pub fn components(&self) -> &[RingValue] {
        &self.components
    }

    pub fn component(&self, n: u64) -> Option<&RingValue> {
        self.s.index_of(n).map(|i| &self.components[i])
    }
}

fn idx_i64(n: u64) -> i64 {
    i64::try_from(n).expect("truncation index fits in i64")
}

/// The ghost map: component at n is the sum over divisors d of n of
/// d * (coordinate at d)^(n/d). Defined over every ring.
pub fn ghost(w: &WittVector) -> Result<GhostVector> {
    let ring = &w.ring;
    let mut components = Vec::with_capacity(w.coords.len());
    for n in w.s.iter() {
        let mut acc = ring.zero();
        for d in divisors(n) {
            let a = w.coord(d).expect("truncation sets are divisor-closed");
            let pw = ring.pow(a, n / d)?;
            acc = ring.add(&acc, &ring.mul_int(&pw, idx_i64(d))?)?;
        }
        components.push(acc);
    }
    GhostVector::new(w.s.clone(), ring.clone(), components)
}

/// Inverts the ghost map by the triangular solve, from the smallest index
/// up. Requires a torsion-free ring; a failed exact division means the
/// input is not the ghost of any Witt vector and is reported with the first
/// offending index.
pub fn from_ghost(g: &GhostVector) -> Result<WittVector> {
    let ring = &g.ring;
    if !ring.is_torsion_free() {
        return Err(Error::InvalidRing {
            reason: format!("ghost inversion needs a torsion-free ring, got {}", ring.name()),
        });
    }
    let mut coords: Vec<RingValue> = Vec::with_capacity(g.components.len());
    for (i, n) in g.s.iter().enumerate() {
        let mut acc = g.components[i].clone();
        for d in divisors(n) {
            if d == n {
                continue;
            }
            let j = g.s.index_of(d).expect("divisor-closed");
            let pw = ring.pow(&coords[j], n / d)?;
            acc = ring.sub(&acc, &ring.mul_int(&pw, idx_i64(d))?)?;
        }
        let c = ring.div_exact_by_int(&acc, idx_i64(n)).map_err(|e| match e {
            Error::NotDivisible { .. } => Error::NotGhostIntegral { index: n },
            other => other,
        })?;
        coords.push(c);
    }
    Ok(WittVector { s: g.s.clone(), ring: ring.clone(), coords })
}

/// The Teichmueller lift [a]: coordinate a at index 1, zero elsewhere.
pub fn teichmuller(a: RingValue, s: TruncationSet, ring: RingDescriptor) -> Result<WittVector> {
    let a = ring.canonical(&a)?;
    let coords = s
        .iter()
        .map(|n| if n == 1 { a.clone() } else { ring.zero() })
        .collect();
    Ok(WittVector { s, ring, coords })
}

/// The Verschiebung V_n: sends the coordinate at s to index n*s, filling
/// the rest with zeros. The argument must live over `target/n`.
pub fn verschiebung(n: u64, w: &WittVector, target: &TruncationSet) -> Result<WittVector> {
    if n == 0 {
        return Err(Error::InvalidIndex { index: 0 });
    }
    if w.s != target.quotient(n) {
        return Err(Error::ShapeMismatch {
            reason: format!(
                "verschiebung source lives over {}, expected {}",
                w.s,
                target.quotient(n)
            ),
        });
    }
    let ring = w.ring.clone();
    let coords = target
        .iter()
        .map(|t| {
            if t % n == 0 {
                w.coord(t / n).expect("t/n lies in target/n").clone()
            } else {
                ring.zero()
            }
        })
        .collect();
    Ok(WittVector { s: target.clone(), ring, coords })
}

/// Which evaluation path arithmetic takes.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum ArithMode {
    /// Ghost path over torsion-free rings, table path elsewhere.
    #[default]
    Auto,
    /// Ghost path only; errors on rings with torsion.
    GhostOnly,
    /// Universal polynomial path everywhere.
    TableOnly,
    /// Run both paths where the ghost path is legal and compare.
    CrossValidate,
}

/// Shared arithmetic context: the universal polynomial cache plus the path
/// selection mode. Cheap to share by reference; safe for concurrent use.
pub struct WittContext {
    table: UniversalPolyTable,
    mode: ArithMode,
}

impl Default for WittContext {
    fn default() -> Self {
        WittContext::new()
    }
}

enum BinOp {
    Add,
    Mul,
}

impl WittContext {
    pub fn new() -> Self {
        WittContext { table: UniversalPolyTable::default(), mode: ArithMode::Auto }
    }

    pub fn with_cap(cap: u64) -> Self {
        WittContext { table: UniversalPolyTable::new(cap), mode: ArithMode::Auto }
    }

    pub fn with_mode(mut self, mode: ArithMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn mode(&self) -> ArithMode {
        self.mode
    }

    pub fn table(&self) -> &UniversalPolyTable {
        &self.table
    }

    pub fn add(&self, x: &WittVector, y: &WittVector) -> Result<WittVector> {
        self.binop(x, y, BinOp::Add)
    }

    pub fn mul(&self, x: &WittVector, y: &WittVector) -> Result<WittVector> {
        self.binop(x, y, BinOp::Mul)
    }

    pub fn sub(&self, x: &WittVector, y: &WittVector) -> Result<WittVector> {
        self.add(x, &self.neg(y)?)
    }

    pub fn neg(&self, x: &WittVector) -> Result<WittVector> {
        match self.route(&x.ring)? {
            Route::Ghost => self.neg_ghost(x),
            Route::Table => self.neg_table(x),
            Route::Both => {
                let g = self.neg_ghost(x)?;
                let t = self.neg_table(x)?;
                same_or_internal(g, t, "negation")
            }
        }
    }

    /// The additive integer multiple k*x.
    pub fn mul_int(&self, x: &WittVector, k: i64) -> Result<WittVector> {
        match self.route(&x.ring)? {
            Route::Ghost => {
                let g = ghost(x)?;
                let comps = g
                    .components
                    .iter()
                    .map(|c| x.ring.mul_int(c, k))
                    .collect::<Result<Vec<_>>>()?;
                promote_internal(from_ghost(&GhostVector {
                    s: g.s,
                    ring: g.ring,
                    components: comps,
                }))
            }
            Route::Table | Route::Both => {
                // Double and add on top of the selected additive path.
                if k == 0 {
                    return Ok(WittVector::zero(x.s.clone(), x.ring.clone()));
                }
                let mut k_abs = k.unsigned_abs();
                let mut base = x.clone();
                let mut acc: Option<WittVector> = None;
                loop {
                    if k_abs & 1 == 1 {
                        acc = Some(match acc {
                            None => base.clone(),
                            Some(a) => self.add(&a, &base)?,
                        });
                    }
                    k_abs >>= 1;
                    if k_abs == 0 {
                        break;
                    }
                    base = self.add(&base, &base)?;
                }
                let acc = acc.expect("k is nonzero");
                if k < 0 {
                    self.neg(&acc)
                } else {
                    Ok(acc)
                }
            }
        }
    }

    /// Solves k*y = x exactly, over torsion-free rings. Fails with
    /// `NotDivisible` when x is not an additive k-th multiple.
    pub fn div_int(&self, x: &WittVector, k: i64) -> Result<WittVector> {
        assert!(k != 0, "division by zero");
        if !x.ring.is_torsion_free() {
            return Err(Error::InvalidRing {
                reason: format!("integer division needs a torsion-free ring, got {}", x.ring.name()),
            });
        }
        let g = ghost(x)?;
        let comps = g
            .components
            .iter()
            .map(|c| x.ring.div_exact_by_int(c, k))
            .collect::<Result<Vec<_>>>()?;
        from_ghost(&GhostVector { s: g.s, ring: g.ring, components: comps }).map_err(|e| match e {
            Error::NotGhostIntegral { .. } => Error::NotDivisible { divisor: k },
            other => other,
        })
    }

    /// The integer k as an element of the Witt ring.
    pub fn integer(&self, s: &TruncationSet, ring: &RingDescriptor, k: i64) -> Result<WittVector> {
        self.mul_int(&WittVector::one(s.clone(), ring.clone()), k)
    }

    /// The Frobenius F_n, landing over S/n. Satisfies
    /// gh_m(F_n(x)) = gh_{nm}(x).
    pub fn frobenius(&self, n: u64, x: &WittVector) -> Result<WittVector> {
        if n == 0 {
            return Err(Error::InvalidIndex { index: 0 });
        }
        match self.route(&x.ring)? {
            Route::Ghost => self.frobenius_ghost(n, x),
            Route::Table => self.frobenius_table(n, x),
            Route::Both => {
                let g = self.frobenius_ghost(n, x)?;
                let t = self.frobenius_table(n, x)?;
                same_or_internal(g, t, "frobenius")
            }
        }
    }

    fn route(&self, ring: &RingDescriptor) -> Result<Route> {
        Ok(match self.mode {
            ArithMode::Auto => {
                if ring.is_torsion_free() {
                    Route::Ghost
                } else {
                    Route::Table
                }
            }
            ArithMode::GhostOnly => {
                if ring.is_torsion_free() {
                    Route::Ghost
                } else {
                    return Err(Error::InvalidRing {
                        reason: format!("ghost-only arithmetic over {}", ring.name()),
                    });
                }
            }
            ArithMode::TableOnly => Route::Table,
            ArithMode::CrossValidate => {
                if ring.is_torsion_free() {
                    Route::Both
                } else {
                    Route::Table
                }
            }
        })
    }

    fn binop(&self, x: &WittVector, y: &WittVector, op: BinOp) -> Result<WittVector> {
        check_same_shape(x, y)?;
        match self.route(&x.ring)? {
            Route::Ghost => self.binop_ghost(x, y, &op),
            Route::Table => self.binop_table(x, y, &op),
            Route::Both => {
                let g = self.binop_ghost(x, y, &op)?;
                let t = self.binop_table(x, y, &op)?;
                same_or_internal(g, t, "binary operation")
            }
        }
    }

    fn binop_ghost(&self, x: &WittVector, y: &WittVector, op: &BinOp) -> Result<WittVector> {
        let gx = ghost(x)?;
        let gy = ghost(y)?;
        let ring = &x.ring;
        let comps = gx
            .components
            .iter()
            .zip(&gy.components)
            .map(|(a, b)| match op {
                BinOp::Add => ring.add(a, b),
                BinOp::Mul => ring.mul(a, b),
            })
            .collect::<Result<Vec<_>>>()?;
        promote_internal(from_ghost(&GhostVector {
            s: x.s.clone(),
            ring: ring.clone(),
            components: comps,
        }))
    }

    fn binop_table(&self, x: &WittVector, y: &WittVector, op: &BinOp) -> Result<WittVector> {
        let ring = &x.ring;
        let mut coords = Vec::with_capacity(x.coords.len());
        for n in x.s.iter() {
            let entry = self.table.arith_entry(n)?;
            let mut values = Vec::with_capacity(2 * entry.divisors.len());
            for &d in &entry.divisors {
                values.push(x.coord(d).expect("divisor-closed").clone());
            }
            for &d in &entry.divisors {
                values.push(y.coord(d).expect("divisor-closed").clone());
            }
            let poly = match op {
                BinOp::Add => &entry.sum,
                BinOp::Mul => &entry.prod,
            };
            coords.push(ring.eval_mpoly(poly, &values)?);
        }
        Ok(WittVector { s: x.s.clone(), ring: ring.clone(), coords })
    }

    fn neg_ghost(&self, x: &WittVector) -> Result<WittVector> {
        let g = ghost(x)?;
        let comps = g
            .components
            .iter()
            .map(|c| x.ring.neg(c))
            .collect::<Result<Vec<_>>>()?;
        promote_internal(from_ghost(&GhostVector {
            s: x.s.clone(),
            ring: x.ring.clone(),
            components: comps,
        }))
    }

    fn neg_table(&self, x: &WittVector) -> Result<WittVector> {
        let ring = &x.ring;
        let mut coords = Vec::with_capacity(x.coords.len());
        for n in x.s.iter() {
            let entry = self.table.arith_entry(n)?;
            let values: Vec<RingValue> = entry
                .divisors
                .iter()
                .map(|&d| x.coord(d).expect("divisor-closed").clone())
                .collect();
            coords.push(ring.eval_mpoly(&entry.neg, &values)?);
        }
        Ok(WittVector { s: x.s.clone(), ring: ring.clone(), coords })
    }

    fn frobenius_ghost(&self, n: u64, x: &WittVector) -> Result<WittVector> {
        let target = x.s.quotient(n);
        let g = ghost(x)?;
        let comps = target
            .iter()
            .map(|m| g.component(n * m).expect("n*m lies in S").clone())
            .collect();
        promote_internal(from_ghost(&GhostVector {
            s: target,
            ring: x.ring.clone(),
            components: comps,
        }))
    }

    fn frobenius_table(&self, n: u64, x: &WittVector) -> Result<WittVector> {
        let target = x.s.quotient(n);
        let ring = &x.ring;
        let mut coords = Vec::with_capacity(target.len());
        for m in target.iter() {
            let entry = self.table.frob_entry(n, m)?;
            let values: Vec<RingValue> = entry
                .divisors
                .iter()
                .map(|&d| x.coord(d).expect("divisor-closed").clone())
                .collect();
            coords.push(ring.eval_mpoly(&entry.poly, &values)?);
        }
        Ok(WittVector { s: target, ring: ring.clone(), coords })
    }
}

enum Route {
    Ghost,
    Table,
    Both,
}

fn check_same_shape(x: &WittVector, y: &WittVector) -> Result<()> {
    if x.s != y.s {
        return Err(Error::ShapeMismatch {
            reason: format!("operands over {} and {}", x.s, y.s),
        });
    }
    if x.ring != y.ring {
        return Err(Error::DescriptorMismatch {
            expected: x.ring.name(),
            found: y.ring.name(),
        });
    }
    Ok(())
}

/// Ghost inversion inside arithmetic must succeed: the operands are genuine
/// Witt vectors, so the result has integral coordinates. A failure here is
/// a bug, not bad input.
fn promote_internal(r: Result<WittVector>) -> Result<WittVector> {
    r.map_err(|e| match e {
        Error::NotGhostIntegral { index } => Error::Internal {
            detail: format!("arithmetic produced a non-integral ghost vector at index {index}"),
        },
        Error::NotDivisible { divisor } => Error::Internal {
            detail: format!("arithmetic division by {divisor} failed unexpectedly"),
        },
        other => other,
    })
}

fn same_or_internal(g: WittVector, t: WittVector, what: &str) -> Result<WittVector> {
    if g == t {
        Ok(g)
    } else {
        Err(Error::Internal {
            detail: format!("ghost and table paths disagree on {what}: {g} vs {t}"),
        })
    }
}

/// All Witt vectors over a finite coefficient ring, in a deterministic
/// order, capped by total count.
pub fn enumerate_vectors(
    ring: &RingDescriptor,
    s: &TruncationSet,
    cap: u128,
) -> Result<Vec<WittVector>> {
    let elems = ring.enumerate()?;
    let card = ring.cardinality().expect("enumerable ring is finite");
    let total = card
        .checked_pow(u32::try_from(s.len()).expect("set fits"))
        .ok_or(Error::TooLarge { size: u128::MAX, cap })?;
    if total > cap {
        return Err(Error::TooLarge { size: total, cap });
    }
    let mut out = Vec::with_capacity(total as usize);
    let mut digits = alloc::vec![0usize; s.len()];
    loop {
        let coords: Vec<RingValue> = digits.iter().map(|&i| elems[i].clone()).collect();
        out.push(WittVector { s: s.clone(), ring: ring.clone(), coords });
        let mut i = 0;
        loop {
            if i == digits.len() {
                return Ok(out);
            }
            digits[i] += 1;
            if digits[i] < elems.len() {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

/// Canonical string key of a coordinate tuple, for set comparisons during
/// enumeration.
pub(crate) fn coords_key(w: &WittVector) -> String {
    let parts: Vec<String> = w.coords.iter().map(|c| w.ring.fmt_value(c)).collect();
    parts.join("|")
}

/// Outcome of the exactness check for
/// 0 -> W_{S/n}(A) --V_n--> W_S(A) --restrict--> W_T(A) -> 0
/// with T = S minus the multiples of n, verified by full enumeration over a
/// finite ring A, plus sampled additivity of V_n.
#[derive(Clone, Debug)]
pub struct ExactSequenceReport {
    pub s: TruncationSet,
    pub t: TruncationSet,
    pub n: u64,
    pub total: usize,
    pub sub_count: usize,
    pub quotient_count: usize,
    pub injective: bool,
    pub surjective: bool,
    pub image_equals_kernel: bool,
    pub additive_samples: usize,
    pub additivity_ok: bool,
    pub counterexample: Option<String>,
}

impl ExactSequenceReport {
    pub fn pass(&self) -> bool {
        self.injective && self.surjective && self.image_equals_kernel && self.additivity_ok
    }
}

pub fn exact_sequence_check(
    ctx: &WittContext,
    ring: &RingDescriptor,
    s: &TruncationSet,
    n: u64,
    cap: u128,
    additive_samples: usize,
    seed: u64,
) -> Result<ExactSequenceReport> {
    if n == 0 {
        return Err(Error::InvalidIndex { index: 0 });
    }
    let t = s.minus_multiples(n);
    let sub = s.quotient(n);

    let sub_vectors = enumerate_vectors(ring, &sub, cap)?;
    let all = enumerate_vectors(ring, s, cap)?;

    let mut counterexample = None;

    let mut image: alloc::collections::BTreeSet<String> = alloc::collections::BTreeSet::new();
    for w in &sub_vectors {
        let v = verschiebung(n, w, s)?;
        image.insert(coords_key(&v));
    }
    let injective = image.len() == sub_vectors.len();
    if !injective {
        counterexample = Some(String::from("two distinct vectors share a Verschiebung image"));
    }

    let mut hit: alloc::collections::BTreeSet<String> = alloc::collections::BTreeSet::new();
    let mut kernel: alloc::collections::BTreeSet<String> = alloc::collections::BTreeSet::new();
    for w in &all {
        let r = w.restrict(&t)?;
        hit.insert(coords_key(&r));
        if r.is_zero() {
            kernel.insert(coords_key(w));
        }
    }
    let quotient_count = enumerate_vectors(ring, &t, cap)?.len();
    let surjective = hit.len() == quotient_count;
    let image_equals_kernel = image == kernel;
    if !image_equals_kernel && counterexample.is_none() {
        let diff = image.symmetric_difference(&kernel).next();
        counterexample = diff.map(|k| format!("image/kernel mismatch at coordinates {k}"));
    }

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut additivity_ok = true;
    let samples = if sub_vectors.is_empty() { 0 } else { additive_samples };
    for _ in 0..samples {
        let a = &sub_vectors[rng.gen_range(0..sub_vectors.len())];
        let b = &sub_vectors[rng.gen_range(0..sub_vectors.len())];
        let lhs = ctx.add(&verschiebung(n, a, s)?, &verschiebung(n, b, s)?)?;
        let rhs = verschiebung(n, &ctx.add(a, b)?, s)?;
        if lhs != rhs {
            additivity_ok = false;
            if counterexample.is_none() {
                counterexample = Some(format!("V_{n} fails additivity on {a} and {b}"));
            }
            break;
        }
    }

    Ok(ExactSequenceReport {
        s: s.clone(),
        t,
        n,
        total: all.len(),
        sub_count: sub_vectors.len(),
        quotient_count,
        injective,
        surjective,
        image_equals_kernel,
        additive_samples: samples,
        additivity_ok,
        counterexample,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use rand_chacha::ChaCha8Rng;

    fn z() -> RingDescriptor {
        RingDescriptor::integers()
    }

    fn ts(raw: &[u64]) -> TruncationSet {
        TruncationSet::new(raw.iter().copied()).unwrap()
    }

    fn wv(s: &[u64], coords: &[i64]) -> WittVector {
        WittVector::from_i64_coords(ts(s), z(), coords).unwrap()
    }

    fn ghost_ints(w: &WittVector) -> Vec<i64> {
        ghost(w)
            .unwrap()
            .components()
            .iter()
            .map(|c| {
                let v = c.as_int().unwrap();
                i64::try_from(v.clone()).unwrap()
            })
            .collect()
    }

    #[test]
    fn ghost_of_teichmuller_two() {
        let w = wv(&[1, 2, 3], &[2, 0, 0]);
        assert_eq!(ghost_ints(&w), vec![2, 4, 8]);
    }

    #[test]
    fn ghost_of_verschiebung_of_one() {
        let one = WittVector::one(ts(&[1, 2]), z());
        let v = verschiebung(2, &one, &ts(&[1, 2, 4])).unwrap();
        assert_eq!(ghost_ints(&v), vec![0, 2, 2]);
    }

    #[test]
    fn from_ghost_round_trip_and_rejection() {
        let g = GhostVector::new(ts(&[1, 2]), z(), vec![z().from_i64(2), z().from_i64(2)]).unwrap();
        let w = from_ghost(&g).unwrap();
        assert_eq!(w, wv(&[1, 2], &[2, -1]));

        let bad = GhostVector::new(ts(&[1, 2]), z(), vec![z().from_i64(0), z().from_i64(1)]).unwrap();
        assert_eq!(from_ghost(&bad).unwrap_err(), Error::NotGhostIntegral { index: 2 });
    }

    #[test]
    fn one_plus_one_has_carry() {
        let ctx = WittContext::new();
        let one = WittVector::one(ts(&[1, 2]), z());
        let two = ctx.add(&one, &one).unwrap();
        assert_eq!(two, wv(&[1, 2], &[2, -1]));
    }

    #[test]
    fn one_plus_one_mod_four() {
        let ctx = WittContext::new();
        let r = RingDescriptor::integers_mod(4).unwrap();
        let one = WittVector::one(ts(&[1, 2]), r.clone());
        let two = ctx.add(&one, &one).unwrap();
        let expected = WittVector::from_i64_coords(ts(&[1, 2]), r, &[2, 3]).unwrap();
        assert_eq!(two, expected);
    }

    #[test]
    fn verschiebung_product_identity() {
        // V_2(1) * V_3(1) = V_6(1) over the closure of {6}.
        let ctx = WittContext::new();
        let s = ts(&[1, 2, 3, 6]);
        let v2 = verschiebung(2, &WittVector::one(s.quotient(2), z()), &s).unwrap();
        let v3 = verschiebung(3, &WittVector::one(s.quotient(3), z()), &s).unwrap();
        let v6 = verschiebung(6, &WittVector::one(s.quotient(6), z()), &s).unwrap();
        assert_eq!(ctx.mul(&v2, &v3).unwrap(), v6);
    }

    #[test]
    fn verschiebung_square() {
        // V_2(1)^2 = 2 V_2(1) over {1, 2}.
        let ctx = WittContext::new();
        let s = ts(&[1, 2]);
        let v2 = verschiebung(2, &WittVector::one(s.quotient(2), z()), &s).unwrap();
        let sq = ctx.mul(&v2, &v2).unwrap();
        assert_eq!(sq, ctx.mul_int(&v2, 2).unwrap());
        assert_eq!(sq, wv(&[1, 2], &[0, 2]));
    }

    #[test]
    fn frobenius_after_verschiebung_is_multiplication_by_n() {
        let ctx = WittContext::new();
        let s = ts(&[1, 2]);
        let a = teichmuller(z().from_i64(3), s.quotient(2), z()).unwrap();
        let v = verschiebung(2, &a, &s).unwrap();
        let f = ctx.frobenius(2, &v).unwrap();
        assert_eq!(f, ctx.mul_int(&a, 2).unwrap());
        assert_eq!(ghost_ints(&f), vec![6]);
    }

    #[test]
    fn frobenius_of_teichmuller_is_teichmuller_of_power() {
        let ctx = WittContext::new();
        let s = ts(&[1, 2, 3, 6]);
        let t = teichmuller(z().from_i64(-2), s.clone(), z()).unwrap();
        let f = ctx.frobenius(3, &t).unwrap();
        let expected = teichmuller(z().from_i64(-8), s.quotient(3), z()).unwrap();
        assert_eq!(f, expected);
    }

    #[test]
    fn paths_agree_on_integers() {
        let ctx = WittContext::new().with_mode(ArithMode::CrossValidate);
        let s = TruncationSet::divisor_closure(&[1, 2, 3, 4, 5, 6, 7, 8]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..25 {
            let x = random_vector(&mut rng, &s, &z(), 9);
            let y = random_vector(&mut rng, &s, &z(), 9);
            ctx.add(&x, &y).unwrap();
            ctx.mul(&x, &y).unwrap();
            ctx.neg(&x).unwrap();
            ctx.frobenius(2, &x).unwrap();
        }
    }

    #[test]
    fn teichmuller_is_multiplicative() {
        let ctx = WittContext::new();
        let s = TruncationSet::divisor_closure(&[1, 2, 3, 4, 5, 6]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let a: i64 = rng.gen_range(-9..=9);
            let b: i64 = rng.gen_range(-9..=9);
            let ta = teichmuller(z().from_i64(a), s.clone(), z()).unwrap();
            let tb = teichmuller(z().from_i64(b), s.clone(), z()).unwrap();
            let tab = teichmuller(z().from_i64(a * b), s.clone(), z()).unwrap();
            assert_eq!(ctx.mul(&ta, &tb).unwrap(), tab);
        }
    }

    #[test]
    fn ghost_contract_for_verschiebung() {
        let s = ts(&[1, 2, 3, 4, 6, 12]);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in [2u64, 3] {
            let w = random_vector(&mut rng, &s.quotient(n), &z(), 9);
            let v = verschiebung(n, &w, &s).unwrap();
            let gv = ghost(&v).unwrap();
            let gw = ghost(&w).unwrap();
            for m in s.iter() {
                let got = gv.component(m).unwrap().as_int().unwrap().clone();
                let expected = if m % n == 0 {
                    gw.component(m / n).unwrap().as_int().unwrap() * n
                } else {
                    0.into()
                };
                assert_eq!(got, expected, "component {m} of V_{n}");
            }
        }
    }

    #[test]
    fn restriction_is_a_ring_homomorphism() {
        let ctx = WittContext::new();
        let s = ts(&[1, 2, 3, 4, 6, 12]);
        let t = ts(&[1, 2, 4]);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let x = random_vector(&mut rng, &s, &z(), 9);
        let y = random_vector(&mut rng, &s, &z(), 9);
        let sum = ctx.add(&x, &y).unwrap().restrict(&t).unwrap();
        let sum_r = ctx.add(&x.restrict(&t).unwrap(), &y.restrict(&t).unwrap()).unwrap();
        assert_eq!(sum, sum_r);
        let prod = ctx.mul(&x, &y).unwrap().restrict(&t).unwrap();
        let prod_r = ctx.mul(&x.restrict(&t).unwrap(), &y.restrict(&t).unwrap()).unwrap();
        assert_eq!(prod, prod_r);
    }

    #[test]
    fn restriction_to_non_subset_fails() {
        let w = wv(&[1, 2], &[1, 1]);
        assert_eq!(w.restrict(&ts(&[1, 3])).unwrap_err(), Error::NotSubset);
    }

    #[test]
    fn localization_commutes_with_arithmetic() {
        let ctx = WittContext::new();
        let s = ts(&[1, 2, 3, 6]);
        let z2 = RingDescriptor::local_at(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let x = random_vector(&mut rng, &s, &z(), 9);
        let y = random_vector(&mut rng, &s, &z(), 9);
        for (over_z, over_local) in [
            (ctx.add(&x, &y).unwrap(), ctx.add(&x.embed_integers_into(&z2).unwrap(), &y.embed_integers_into(&z2).unwrap()).unwrap()),
            (ctx.mul(&x, &y).unwrap(), ctx.mul(&x.embed_integers_into(&z2).unwrap(), &y.embed_integers_into(&z2).unwrap()).unwrap()),
        ] {
            assert_eq!(over_z.embed_integers_into(&z2).unwrap(), over_local);
        }
    }

    #[test]
    fn table_cap_is_surfaced() {
        let ctx = WittContext::with_cap(4).with_mode(ArithMode::TableOnly);
        let s = TruncationSet::divisor_closure(&[5]).unwrap();
        let one = WittVector::one(s, z());
        assert_eq!(
            ctx.add(&one, &one).unwrap_err(),
            Error::CapExceeded { n: 5, cap: 4 }
        );
    }

    #[test]
    fn empty_set_is_the_zero_ring() {
        let ctx = WittContext::new();
        let e = TruncationSet::empty();
        let zero = WittVector::zero(e.clone(), z());
        let one = WittVector::one(e.clone(), z());
        assert_eq!(zero, one);
        assert_eq!(ctx.add(&zero, &one).unwrap(), zero);
        assert!(ghost(&zero).unwrap().components().is_empty());
    }

    #[test]
    fn exact_sequence_over_small_finite_rings() {
        let ctx = WittContext::new();
        for (m, s, n) in [(2u64, vec![1u64, 2], 2u64), (3, vec![1, 3], 3), (4, vec![1, 2], 2)] {
            let ring = RingDescriptor::integers_mod(m).unwrap();
            let report =
                exact_sequence_check(&ctx, &ring, &ts(&s), n, 1 << 12, 16, 99).unwrap();
            assert!(report.pass(), "m={m} S={:?} n={n}: {report:?}", s);
        }
    }

    #[test]
    fn exact_sequence_respects_cap() {
        let ctx = WittContext::new();
        let ring = RingDescriptor::integers_mod(2).unwrap();
        let err = exact_sequence_check(&ctx, &ring, &ts(&[1, 2, 3, 6]), 2, 8, 4, 0).unwrap_err();
        assert!(matches!(err, Error::TooLarge { size: 16, .. }));
    }

    pub(super) fn random_vector(
        rng: &mut ChaCha8Rng,
        s: &TruncationSet,
        ring: &RingDescriptor,
        bound: i64,
    ) -> WittVector {
        let coords = (0..s.len()).map(|_| ring.sample(rng, bound)).collect();
        WittVector::new(s.clone(), ring.clone(), coords).unwrap()
    }
}
