//! Systems of free modules over the Witt rings of a fixed ambient
//! truncation set, equipped with Frobenius-semilinear maps `phi_n` and
//! Verschiebung-type maps `beta_n`, together with the tensor, internal
//! Hom, dual, and direct sum calculus on them.
//!
//! An object stores one matrix per index `n` at the ambient level; the
//! data at every smaller truncation set is the coordinate restriction,
//! which is what the base-change axiom forces for free modules. `phi_n`
//! acts on coefficient columns as `c -> Phi_n * F_n(c)`. `beta_n` is
//! recorded through a matrix `G_n` over the quotient ring, acting as
//! `c -> V_n(G_n * c)` entrywise; with that convention both composite
//! laws become the exact matrix identities `Phi_n * G_n = n^(a-1) * I`
//! and `G_n * Phi_n = n^(a-1) * I`.
//!
//! Twists are tracked by an integer tag. Canonical form folds negative
//! tags into the `phi` data, absorbs positive tags back out of it when
//! every `phi` matrix carries a factor of `n`, and then minimizes the
//! exponent `a` by stripping integer content from the `beta` data.

pub mod checks;
pub mod matrix;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;

use crate::error::{Error, Result};
use crate::rings::RingDescriptor;
use crate::truncation::TruncationSet;
use crate::witt::WittContext;

pub use checks::{
    conservativity_harness, hom_set_check, p_typical_reduction_check, tangent_map,
    tangent_module, HarnessReport, ReductionReport, TangentMap, TangentModule,
    ValidationReport, Violation,
};
pub use matrix::{Inverse, WittMatrix};

/// A free-module system over every truncation level below `ambient`,
/// with semilinear `phi_n` and `beta_n` data stored at the top level.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PhiObject {
    ambient: TruncationSet,
    ring: RingDescriptor,
    rank: usize,
    exponent: u32,
    twist: i64,
    phi: BTreeMap<u64, WittMatrix>,
    beta: BTreeMap<u64, WittMatrix>,
}

pub(crate) fn n_power(n: u64, e: u32) -> Result<i64> {
    u128::from(n)
        .checked_pow(e)
        .filter(|v| *v <= i64::MAX as u128)
        .map(|v| v as i64)
        .ok_or(Error::TooLarge { size: u128::from(n).saturating_pow(e), cap: i64::MAX as u128 })
}

impl PhiObject {
    /// Assembles an object from explicit data, checking shapes but not
    /// the semilinear laws; run `validate` for those.
    pub fn from_raw(
        ambient: TruncationSet,
        ring: RingDescriptor,
        rank: usize,
        exponent: u32,
        twist: i64,
        phi: BTreeMap<u64, WittMatrix>,
        beta: BTreeMap<u64, WittMatrix>,
    ) -> Result<Self> {
        if !ring.is_torsion_free() {
            return Err(Error::InvalidRing {
                reason: format!("{} is not Z-torsion-free", ring.name()),
            });
        }
        if exponent == 0 {
            return Err(Error::ShapeMismatch { reason: "exponent must be positive".into() });
        }
        for (name, map) in [("phi", &phi), ("beta", &beta)] {
            for n in ambient.iter().filter(|&n| n >= 2) {
                if !map.contains_key(&n) {
                    return Err(Error::ShapeMismatch {
                        reason: format!("missing {name} matrix for n = {n}"),
                    });
                }
            }
            for (&n, mat) in map {
                if n < 2 || !ambient.contains(n) {
                    return Err(Error::IndexOutsideS { index: n });
                }
                let quotient = ambient.quotient(n);
                if *mat.set() != quotient {
                    return Err(Error::ShapeMismatch {
                        reason: format!("{name} matrix for n = {n} lives over {}", mat.set()),
                    });
                }
                if mat.ring() != &ring {
                    return Err(Error::DescriptorMismatch {
                        expected: ring.name(),
                        found: mat.ring().name(),
                    });
                }
                if mat.rows() != rank || mat.cols() != rank {
                    return Err(Error::ShapeMismatch {
                        reason: format!(
                            "{name} matrix for n = {n} is {}x{}, expected {rank}x{rank}",
                            mat.rows(),
                            mat.cols()
                        ),
                    });
                }
            }
        }
        Ok(PhiObject { ambient, ring, rank, exponent, twist, phi, beta })
    }

    /// The identity object: rank one, `phi_n = F_n`, `beta_n = V_n`.
    pub fn unit(ambient: &TruncationSet, ring: &RingDescriptor) -> Result<Self> {
        let mut phi = BTreeMap::new();
        let mut beta = BTreeMap::new();
        for n in ambient.iter().filter(|&n| n >= 2) {
            let quotient = ambient.quotient(n);
            phi.insert(n, WittMatrix::identity(quotient.clone(), ring.clone(), 1));
            beta.insert(n, WittMatrix::identity(quotient, ring.clone(), 1));
        }
        PhiObject::from_raw(ambient.clone(), ring.clone(), 1, 1, 0, phi, beta)
    }

    /// The rank-one twisted object. For `b <= 0` the twist is realized
    /// in the data as `phi_n = n^(-b) * F_n`; positive `b` stays in the
    /// bookkeeping tag.
    pub fn tate(ctx: &WittContext, b: i64, ambient: &TruncationSet, ring: &RingDescriptor) -> Result<Self> {
        let (data_power, tag) = if b > 0 {
            (0u32, b)
        } else {
            let power = u32::try_from(-b)
                .map_err(|_| Error::TooLarge { size: b.unsigned_abs() as u128, cap: u32::MAX as u128 })?;
            (power, 0)
        };
        let mut phi = BTreeMap::new();
        let mut beta = BTreeMap::new();
        for n in ambient.iter().filter(|&n| n >= 2) {
            let quotient = ambient.quotient(n);
            let scalar = n_power(n, data_power)?;
            phi.insert(n, WittMatrix::integer_scalar(ctx, &quotient, ring, 1, scalar)?);
            beta.insert(n, WittMatrix::identity(quotient, ring.clone(), 1));
        }
        PhiObject::from_raw(ambient.clone(), ring.clone(), 1, data_power + 1, tag, phi, beta)
    }

    pub fn ambient(&self) -> &TruncationSet {
        &self.ambient
    }

    pub fn ring(&self) -> &RingDescriptor {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// The exponent `a` in the composite law `phi_n . beta_n = n^a`.
    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn twist(&self) -> i64 {
        self.twist
    }

    /// The matrix of `phi_n : M_S -> M_{S/n}` over `W_{S/n}(R)`, for any
    /// divisor-closed `S` inside the ambient set.
    pub fn phi_matrix(&self, s: &TruncationSet, n: u64) -> Result<WittMatrix> {
        if !s.is_subset_of(&self.ambient) {
            return Err(Error::NotSubset);
        }
        if !s.contains(n) {
            return Err(Error::IndexOutsideS { index: n });
        }
        let quotient = s.quotient(n);
        if n == 1 {
            return Ok(WittMatrix::identity(quotient, self.ring.clone(), self.rank));
        }
        self.phi[&n].restrict(&quotient)
    }

    /// The matrix `G_n` of `beta_n : M_{S/n} -> M_S`, acting through
    /// `c -> V_n(G_n * c)`, over `W_{S/n}(R)`.
    pub fn beta_matrix(&self, s: &TruncationSet, n: u64) -> Result<WittMatrix> {
        if !s.is_subset_of(&self.ambient) {
            return Err(Error::NotSubset);
        }
        if !s.contains(n) {
            return Err(Error::IndexOutsideS { index: n });
        }
        let quotient = s.quotient(n);
        if n == 1 {
            return Ok(WittMatrix::identity(quotient, self.ring.clone(), self.rank));
        }
        self.beta[&n].restrict(&quotient)
    }

    fn require_same_setting(&self, other: &PhiObject) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch {
                reason: format!("{} vs {}", self.ambient, other.ambient),
            });
        }
        if self.ring != other.ring {
            return Err(Error::DescriptorMismatch {
                expected: self.ring.name(),
                found: other.ring.name(),
            });
        }
        Ok(())
    }

    /// Folds `k` units of twist into the data: `phi_n` gains a factor
    /// `n^k`, the exponent and the tag both rise by `k`.
    fn twist_into_data(mut self, ctx: &WittContext, k: u32) -> Result<Self> {
        if k == 0 {
            return Ok(self);
        }
        let mut phi = BTreeMap::new();
        for (&n, mat) in &self.phi {
            phi.insert(n, mat.mul_int(ctx, n_power(n, k)?)?);
        }
        self.phi = phi;
        self.exponent += k;
        self.twist += i64::from(k);
        Ok(self)
    }

    /// Raises the exponent by `k` without changing the object, scaling
    /// the `beta` data by `n^k`.
    fn raise_exponent(mut self, ctx: &WittContext, k: u32) -> Result<Self> {
        if k == 0 {
            return Ok(self);
        }
        let mut beta = BTreeMap::new();
        for (&n, mat) in &self.beta {
            beta.insert(n, mat.mul_int(ctx, n_power(n, k)?)?);
        }
        self.beta = beta;
        self.exponent += k;
        Ok(self)
    }

    /// Canonical form: nonnegative tag, tag absorbed into the data as
    /// far as divisibility of `phi` allows, and minimal exponent.
    pub fn canonicalize(mut self, ctx: &WittContext) -> Result<Self> {
        if self.twist < 0 {
            let lift = u32::try_from(-self.twist).expect("twist fits in u32");
            self = self.twist_into_data(ctx, lift)?;
        }
        while self.twist > 0 && self.exponent >= 2 {
            let mut divided = BTreeMap::new();
            let mut all_divisible = true;
            for (&n, mat) in &self.phi {
                match mat.div_int(ctx, n as i64) {
                    Ok(d) => {
                        divided.insert(n, d);
                    }
                    Err(Error::NotDivisible { .. }) => {
                        all_divisible = false;
                        break;
                    }
                    Err(other) => return Err(other),
                }
            }
            if !all_divisible {
                break;
            }
            self.phi = divided;
            self.exponent -= 1;
            self.twist -= 1;
        }
        while self.exponent >= 2 {
            let mut divided = BTreeMap::new();
            let mut all_divisible = true;
            for (&n, mat) in &self.beta {
                match mat.div_int(ctx, n as i64) {
                    Ok(d) => {
                        divided.insert(n, d);
                    }
                    Err(Error::NotDivisible { .. }) => {
                        all_divisible = false;
                        break;
                    }
                    Err(other) => return Err(other),
                }
            }
            if !all_divisible {
                break;
            }
            self.beta = divided;
            self.exponent -= 1;
        }
        Ok(self)
    }

    /// Tensor product: Kronecker products of the `phi` data, Kronecker
    /// products of the `beta` data scaled by `n`, exponents and tags add.
    pub fn tensor(&self, ctx: &WittContext, other: &PhiObject) -> Result<PhiObject> {
        self.require_same_setting(other)?;
        let mut phi = BTreeMap::new();
        let mut beta = BTreeMap::new();
        for n in self.ambient.iter().filter(|&n| n >= 2) {
            phi.insert(n, self.phi[&n].kron(ctx, &other.phi[&n])?);
            beta.insert(n, self.beta[&n].kron(ctx, &other.beta[&n])?.mul_int(ctx, n as i64)?);
        }
        let raw = PhiObject {
            ambient: self.ambient.clone(),
            ring: self.ring.clone(),
            rank: self.rank * other.rank,
            exponent: self.exponent + other.exponent,
            twist: self.twist + other.twist,
            phi,
            beta,
        };
        raw.canonicalize(ctx)
    }

    /// Internal Hom. On matrix spaces flattened column by column, the
    /// semilinear action `f -> phi_N . f . beta_M` has `phi` matrix
    /// `n * (G_M^T (x) Phi_N)` and `beta` matrix `Phi_M^T (x) G_N`; the
    /// tag shifts by the source exponent.
    pub fn internal_hom(&self, ctx: &WittContext, other: &PhiObject) -> Result<PhiObject> {
        self.require_same_setting(other)?;
        let mut phi = BTreeMap::new();
        let mut beta = BTreeMap::new();
        for n in self.ambient.iter().filter(|&n| n >= 2) {
            let hom_phi =
                self.beta[&n].transpose().kron(ctx, &other.phi[&n])?.mul_int(ctx, n as i64)?;
            let hom_beta = self.phi[&n].transpose().kron(ctx, &other.beta[&n])?;
            phi.insert(n, hom_phi);
            beta.insert(n, hom_beta);
        }
        let raw = PhiObject {
            ambient: self.ambient.clone(),
            ring: self.ring.clone(),
            rank: self.rank * other.rank,
            exponent: self.exponent + other.exponent,
            twist: i64::from(self.exponent) + other.twist - self.twist,
            phi,
            beta,
        };
        raw.canonicalize(ctx)
    }

    pub fn dual(&self, ctx: &WittContext) -> Result<PhiObject> {
        let unit = PhiObject::unit(&self.ambient, &self.ring)?;
        self.internal_hom(ctx, &unit)
    }

    /// Direct sum. Tags and exponents are first equalized (tags by
    /// folding twist into the lower-tagged summand, exponents by scaling
    /// `beta`), then the data is block-diagonal.
    pub fn direct_sum(&self, ctx: &WittContext, other: &PhiObject) -> Result<PhiObject> {
        self.require_same_setting(other)?;
        let tag = self.twist.max(other.twist);
        let left_lift = u32::try_from(tag - self.twist).expect("tag gap fits in u32");
        let right_lift = u32::try_from(tag - other.twist).expect("tag gap fits in u32");
        let left = self.clone().twist_into_data(ctx, left_lift)?;
        let right = other.clone().twist_into_data(ctx, right_lift)?;
        let exponent = left.exponent.max(right.exponent);
        let left_gap = exponent - left.exponent;
        let right_gap = exponent - right.exponent;
        let left = left.raise_exponent(ctx, left_gap)?;
        let right = right.raise_exponent(ctx, right_gap)?;
        let mut phi = BTreeMap::new();
        let mut beta = BTreeMap::new();
        for n in self.ambient.iter().filter(|&n| n >= 2) {
            phi.insert(n, left.phi[&n].block_diag(&right.phi[&n])?);
            beta.insert(n, left.beta[&n].block_diag(&right.beta[&n])?);
        }
        let raw = PhiObject {
            ambient: self.ambient.clone(),
            ring: self.ring.clone(),
            rank: left.rank + right.rank,
            exponent,
            twist: left.twist,
            phi,
            beta,
        };
        raw.canonicalize(ctx)
    }
}

impl core::fmt::Display for PhiObject {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(
            f,
            "rank {} over W_{}({}), a = {}, twist = {}",
            self.rank,
            self.ambient,
            self.ring.name(),
            self.exponent,
            self.twist
        )
    }
}

/// A morphism of `PhiObject`s, stored through its ambient-level matrix;
/// the matrix at every smaller level is the coordinate restriction.
#[derive(Clone, Debug)]
pub struct PhiMorphism {
    source: PhiObject,
    target: PhiObject,
    mat: WittMatrix,
}

impl PhiMorphism {
    /// Wraps a candidate matrix after verifying it commutes with every
    /// `phi_n` at every level.
    pub fn new(
        ctx: &WittContext,
        source: PhiObject,
        target: PhiObject,
        mat: WittMatrix,
    ) -> Result<Self> {
        if !hom_set_check(ctx, &source, &target, &mat)? {
            return Err(Error::ShapeMismatch {
                reason: String::from("matrix does not commute with the phi maps"),
            });
        }
        Ok(PhiMorphism { source, target, mat })
    }

    /// The endomorphism multiplying every coordinate by the integer `k`.
    pub fn scalar(ctx: &WittContext, object: &PhiObject, k: i64) -> Result<Self> {
        let mat =
            WittMatrix::integer_scalar(ctx, object.ambient(), object.ring(), object.rank(), k)?;
        PhiMorphism::new(ctx, object.clone(), object.clone(), mat)
    }

    pub fn source(&self) -> &PhiObject {
        &self.source
    }

    pub fn target(&self) -> &PhiObject {
        &self.target
    }

    pub fn matrix(&self) -> &WittMatrix {
        &self.mat
    }

    pub fn matrix_at(&self, s: &TruncationSet) -> Result<WittMatrix> {
        self.mat.restrict(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use alloc::vec::Vec;

    fn z() -> RingDescriptor {
        RingDescriptor::integers()
    }

    fn ts(raw: &[u64]) -> TruncationSet {
        TruncationSet::new(raw.iter().copied()).unwrap()
    }

    fn q() -> TruncationSet {
        ts(&[1, 2, 3, 4, 6])
    }

    fn int_entry(ctx: &WittContext, s: &TruncationSet, k: i64) -> crate::witt::WittVector {
        ctx.integer(s, &z(), k).unwrap()
    }

    fn diag(ctx: &WittContext, s: &TruncationSet, values: &[i64]) -> WittMatrix {
        let mut m = WittMatrix::zero(s.clone(), z(), values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m.set_entry(i, i, int_entry(ctx, s, v)).unwrap();
        }
        m
    }

    #[test]
    fn tate_zero_is_unit() {
        let ctx = WittContext::new();
        let unit = PhiObject::unit(&q(), &z()).unwrap();
        let tate0 = PhiObject::tate(&ctx, 0, &q(), &z()).unwrap();
        assert_eq!(unit, tate0);
        assert_eq!(unit.exponent(), 1);
        assert_eq!(unit.twist(), 0);
    }

    #[test]
    fn tate_minus_one_has_scaled_phi() {
        let ctx = WittContext::new();
        let t1 = PhiObject::tate(&ctx, -1, &q(), &z()).unwrap();
        assert_eq!(t1.exponent(), 2);
        assert_eq!(t1.twist(), 0);
        let s = q();
        let phi2 = t1.phi_matrix(&s, 2).unwrap();
        assert_eq!(phi2.entry(0, 0), &int_entry(&ctx, &s.quotient(2), 2));
        let g2 = t1.beta_matrix(&s, 2).unwrap();
        assert_eq!(g2.entry(0, 0), &int_entry(&ctx, &s.quotient(2), 1));
    }

    #[test]
    fn positive_tate_keeps_twist_in_the_tag() {
        let ctx = WittContext::new();
        let t = PhiObject::tate(&ctx, 3, &q(), &z()).unwrap();
        assert_eq!(t.twist(), 3);
        assert_eq!(t.exponent(), 1);
        let unit = PhiObject::unit(&q(), &z()).unwrap();
        assert_eq!(t.phi_matrix(&q(), 2).unwrap(), unit.phi_matrix(&q(), 2).unwrap());
    }

    #[test]
    fn tensor_of_tates_adds_twists() {
        let ctx = WittContext::new();
        let t1 = PhiObject::tate(&ctx, -1, &q(), &z()).unwrap();
        let t2 = PhiObject::tate(&ctx, -2, &q(), &z()).unwrap();
        let product = t1.tensor(&ctx, &t1).unwrap();
        assert_eq!(product, t2);
        let mixed = t1.tensor(&ctx, &PhiObject::tate(&ctx, 1, &q(), &z()).unwrap()).unwrap();
        assert_eq!(mixed, PhiObject::unit(&q(), &z()).unwrap());
    }

    #[test]
    fn tensor_with_unit_is_identity() {
        let ctx = WittContext::new();
        let unit = PhiObject::unit(&q(), &z()).unwrap();
        let t1 = PhiObject::tate(&ctx, -1, &q(), &z()).unwrap();
        let sum = unit.direct_sum(&ctx, &t1).unwrap();
        for m in [&t1, &sum] {
            assert_eq!(&unit.tensor(&ctx, m).unwrap(), m);
            assert_eq!(&m.tensor(&ctx, &unit).unwrap(), m);
        }
    }

    #[test]
    fn direct_sum_of_unit_and_tate() {
        let ctx = WittContext::new();
        let unit = PhiObject::unit(&q(), &z()).unwrap();
        let t1 = PhiObject::tate(&ctx, -1, &q(), &z()).unwrap();
        let sum = unit.direct_sum(&ctx, &t1).unwrap();
        assert_eq!(sum.rank(), 2);
        assert_eq!(sum.exponent(), 2);
        assert_eq!(sum.twist(), 0);
        let s = q();
        for n in [2u64, 3, 4, 6] {
            let t = s.quotient(n);
            assert_eq!(sum.phi_matrix(&s, n).unwrap(), diag(&ctx, &t, &[1, n as i64]));
            assert_eq!(sum.beta_matrix(&s, n).unwrap(), diag(&ctx, &t, &[n as i64, 1]));
        }
    }

    #[test]
    fn direct_sum_equalizes_twist_tags() {
        let ctx = WittContext::new();
        let unit = PhiObject::unit(&q(), &z()).unwrap();
        let t_plus = PhiObject::tate(&ctx, 1, &q(), &z()).unwrap();
        let sum = t_plus.direct_sum(&ctx, &unit).unwrap();
        assert_eq!(sum.twist(), 1);
        assert_eq!(sum.exponent(), 2);
        let s = q();
        assert_eq!(sum.phi_matrix(&s, 2).unwrap(), diag(&ctx, &s.quotient(2), &[1, 2]));
        assert_eq!(sum.beta_matrix(&s, 2).unwrap(), diag(&ctx, &s.quotient(2), &[2, 1]));
    }

    #[test]
    fn dual_of_tate_is_opposite_twist() {
        let ctx = WittContext::new();
        let t1 = PhiObject::tate(&ctx, -1, &q(), &z()).unwrap();
        let dual = t1.dual(&ctx).unwrap();
        assert_eq!(dual, PhiObject::tate(&ctx, 1, &q(), &z()).unwrap());
        let unit = PhiObject::unit(&q(), &z()).unwrap();
        assert_eq!(unit.dual(&ctx).unwrap(), unit);
    }

    #[test]
    fn hom_from_unit_recovers_the_target() {
        let ctx = WittContext::new();
        let unit = PhiObject::unit(&q(), &z()).unwrap();
        let t2 = PhiObject::tate(&ctx, -2, &q(), &z()).unwrap();
        let sum = unit.direct_sum(&ctx, &t2).unwrap();
        for n in [&t2, &sum] {
            assert_eq!(&unit.internal_hom(&ctx, n).unwrap(), n);
        }
    }

    #[test]
    fn hom_matches_dual_tensor() {
        let ctx = WittContext::new();
        let unit = PhiObject::unit(&q(), &z()).unwrap();
        let t1 = PhiObject::tate(&ctx, -1, &q(), &z()).unwrap();
        let sum = unit.direct_sum(&ctx, &t1).unwrap();
        for (m, n) in [(&t1, &sum), (&sum, &t1), (&t1, &t1), (&sum, &sum)] {
            let hom = m.internal_hom(&ctx, n).unwrap();
            let via_dual = m.dual(&ctx).unwrap().tensor(&ctx, n).unwrap();
            assert_eq!(hom, via_dual);
        }
    }

    #[test]
    fn hom_is_adjoint_to_tensor() {
        let ctx = WittContext::new();
        let unit = PhiObject::unit(&q(), &z()).unwrap();
        let t1 = PhiObject::tate(&ctx, -1, &q(), &z()).unwrap();
        let t2 = PhiObject::tate(&ctx, -2, &q(), &z()).unwrap();
        let sum = unit.direct_sum(&ctx, &t1).unwrap();
        let curried = t1.tensor(&ctx, &t2).unwrap().internal_hom(&ctx, &sum).unwrap();
        let nested = t1.internal_hom(&ctx, &t2.internal_hom(&ctx, &sum).unwrap()).unwrap();
        assert_eq!(curried, nested);
    }

    #[test]
    fn tensor_rejects_mismatched_ambients() {
        let ctx = WittContext::new();
        let a = PhiObject::unit(&ts(&[1, 2]), &z()).unwrap();
        let b = PhiObject::unit(&ts(&[1, 3]), &z()).unwrap();
        assert!(matches!(a.tensor(&ctx, &b), Err(Error::AmbientMismatch { .. })));
    }

    #[test]
    fn from_raw_rejects_bad_shapes() {
        let ctx = WittContext::new();
        let t1 = PhiObject::tate(&ctx, -1, &q(), &z()).unwrap();
        let mut phi: BTreeMap<u64, WittMatrix> = BTreeMap::new();
        let mut beta: BTreeMap<u64, WittMatrix> = BTreeMap::new();
        for n in q().iter().filter(|&n| n >= 2) {
            phi.insert(n, t1.phi_matrix(&q(), n).unwrap());
            beta.insert(n, t1.beta_matrix(&q(), n).unwrap());
        }
        phi.remove(&6);
        let err =
            PhiObject::from_raw(q(), z(), 1, 2, 0, phi.clone(), beta.clone()).unwrap_err();
        assert!(matches!(err, Error::ShapeMismatch { .. }));

        phi.insert(6, WittMatrix::identity(q(), z(), 1));
        let err = PhiObject::from_raw(q(), z(), 1, 2, 0, phi, beta).unwrap_err();
        assert!(matches!(err, Error::ShapeMismatch { .. }));

        let err = PhiObject::unit(&q(), &RingDescriptor::integers_mod(4).unwrap()).unwrap_err();
        assert!(matches!(err, Error::InvalidRing { .. }));
    }

    #[test]
    fn scalar_endomorphisms_are_morphisms() {
        let ctx = WittContext::new();
        let unit = PhiObject::unit(&q(), &z()).unwrap();
        let double = PhiMorphism::scalar(&ctx, &unit, 2).unwrap();
        assert_eq!(double.matrix_at(&ts(&[1])).unwrap().rows(), 1);
        assert!(PhiMorphism::scalar(&ctx, &unit, 0).is_ok());
    }

    #[test]
    fn teichmuller_scalar_is_not_a_morphism() {
        let ctx = WittContext::new();
        let unit = PhiObject::unit(&q(), &z()).unwrap();
        let rep = crate::witt::teichmuller(z().from_i64(2), q(), z()).unwrap();
        let mat = WittMatrix::new(q(), z(), 1, 1, vec![rep]).unwrap();
        assert!(PhiMorphism::new(&ctx, unit.clone(), unit, mat).is_err());
    }

    #[test]
    fn canonical_forms_are_stable_under_recanonicalization() {
        let ctx = WittContext::new();
        let t1 = PhiObject::tate(&ctx, -1, &q(), &z()).unwrap();
        let unit = PhiObject::unit(&q(), &z()).unwrap();
        let objects: Vec<PhiObject> = vec![
            unit.clone(),
            t1.clone(),
            unit.direct_sum(&ctx, &t1).unwrap(),
            t1.dual(&ctx).unwrap(),
            t1.internal_hom(&ctx, &unit).unwrap(),
        ];
        for o in objects {
            assert_eq!(o.clone().canonicalize(&ctx).unwrap(), o);
        }
    }
}
