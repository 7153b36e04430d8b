//! The V-basis of the Witt vectors of the integers.
//!
//! Additively, the Witt vectors of the integers over a truncation set S are
//! freely generated by the family V_n(1) for n in S. The ghost matrix of
//! that family is triangular: gh_m(V_n(1)) equals n when n divides m and 0
//! otherwise, so conversion between coordinates and basis coefficients is
//! an exact triangular solve over ghost space.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rings::{RingDescriptor, RingValue};
use crate::truncation::{divisors, TruncationSet};
use crate::witt::{from_ghost, ghost, GhostVector, WittVector};

/// An integer combination w = sum of c_n * V_n(1), one coefficient per
/// element of the truncation set, stored in the set's sorted order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VBasisExpansion {
    s: TruncationSet,
    coeffs: Vec<BigInt>,
}

impl VBasisExpansion {
    pub fn new(s: TruncationSet, coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.len() != s.len() {
            return Err(Error::ShapeMismatch {
                reason: format!("{} coefficients for a set of size {}", coeffs.len(), s.len()),
            });
        }
        Ok(VBasisExpansion { s, coeffs })
    }

    pub fn from_i64(s: TruncationSet, coeffs: &[i64]) -> Result<Self> {
        VBasisExpansion::new(s, coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn set(&self) -> &TruncationSet {
        &self.s
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, n: u64) -> Option<&BigInt> {
        self.s.index_of(n).map(|i| &self.coeffs[i])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
}

impl core::fmt::Display for VBasisExpansion {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let mut wrote = false;
        for (n, c) in self.s.iter().zip(&self.coeffs) {
            if c.is_zero() {
                continue;
            }
            if wrote {
                write!(f, " + ")?;
            }
            write!(f, "{c}*V{n}(1)")?;
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        Ok(())
    }
}

fn require_integers(ring: &RingDescriptor) -> Result<()> {
    if *ring != RingDescriptor::integers() {
        return Err(Error::WrongRing {
            reason: format!("the V-basis lives over the integers, got {}", ring.name()),
        });
    }
    Ok(())
}

/// Writes an integer Witt vector as a combination of the V_n(1).
///
/// Solves gh_m(w) = sum over n dividing m of n*c_n from the smallest index
/// up. The solve always lands in integers; an inexact division would mean
/// the basis property itself failed and is reported as an internal error.
pub fn to_vbasis(w: &WittVector) -> Result<VBasisExpansion> {
    require_integers(w.ring())?;
    let g = ghost(w)?;
    let mut coeffs: Vec<BigInt> = Vec::with_capacity(w.set().len());
    for (i, m) in w.set().iter().enumerate() {
        let mut acc = g.components()[i].as_int().expect("integer ring").clone();
        for d in divisors(m) {
            if d == m {
                continue;
            }
            let j = w.set().index_of(d).expect("divisor-closed");
            acc -= BigInt::from(d) * &coeffs[j];
        }
        let (q, r) = acc.div_rem(&BigInt::from(m));
        if !r.is_zero() {
            return Err(Error::Internal {
                detail: format!("V-basis solve hit a non-integral coefficient at index {m}"),
            });
        }
        coeffs.push(q);
    }
    VBasisExpansion::new(w.set().clone(), coeffs)
}

/// Evaluates a V-basis combination back to Witt coordinates, through the
/// ghost components gh_m = sum over n dividing m of n*c_n.
pub fn from_vbasis(e: &VBasisExpansion) -> Result<WittVector> {
    let ring = RingDescriptor::integers();
    let mut components = Vec::with_capacity(e.s.len());
    for m in e.s.iter() {
        let mut acc = BigInt::zero();
        for d in divisors(m) {
            if let Some(j) = e.s.index_of(d) {
                acc += BigInt::from(d) * &e.coeffs[j];
            }
        }
        components.push(RingValue::Int(acc));
    }
    let g = GhostVector::new(e.s.clone(), ring, components)?;
    from_ghost(&g).map_err(|err| match err {
        Error::NotGhostIntegral { index } => Error::Internal {
            detail: format!("V-basis evaluation lost integrality at index {index}"),
        },
        other => other,
    })
}

/// Structure constants of the basis: V_m(1) * V_n(1) = c * V_l(1) with
/// c = gcd(m, n) and l = mn/c. Both inputs and the product index must lie
/// in the set.
pub fn vbasis_product(s: &TruncationSet, m: u64, n: u64) -> Result<(u64, u64)> {
    for k in [m, n] {
        if !s.contains(k) {
            return Err(Error::IndexOutsideS { index: k });
        }
    }
    let c = m.gcd(&n);
    let l = m / c * n;
    if !s.contains(l) {
        return Err(Error::IndexOutsideS { index: l });
    }
    Ok((c, l))
}

/// Renders the expansion as index/coefficient pairs in set order, for
/// serialization.
pub fn vbasis_pairs(e: &VBasisExpansion) -> Vec<(u64, String)> {
    e.s.iter()
        .zip(&e.coeffs)
        .map(|(n, c)| (n, format!("{c}")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::witt::{verschiebung, WittContext};
    use alloc::vec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn z() -> RingDescriptor {
        RingDescriptor::integers()
    }

    fn ts(raw: &[u64]) -> TruncationSet {
        TruncationSet::new(raw.iter().copied()).unwrap()
    }

    fn v_of_one(n: u64, s: &TruncationSet) -> WittVector {
        verschiebung(n, &WittVector::one(s.quotient(n), z()), s).unwrap()
    }

    #[test]
    fn identity_expands_in_degree_one() {
        let one = WittVector::one(ts(&[1, 2]), z());
        let e = to_vbasis(&one).unwrap();
        assert_eq!(e, VBasisExpansion::from_i64(ts(&[1, 2]), &[1, 0]).unwrap());
    }

    #[test]
    fn teichmuller_two_expands_with_carry() {
        let w = WittVector::from_i64_coords(ts(&[1, 2]), z(), &[2, 0]).unwrap();
        let e = to_vbasis(&w).unwrap();
        assert_eq!(e, VBasisExpansion::from_i64(ts(&[1, 2]), &[2, 1]).unwrap());
        assert_eq!(from_vbasis(&e).unwrap(), w);
    }

    #[test]
    fn basis_vector_round_trip() {
        let s = ts(&[1, 2, 3, 6]);
        let e = to_vbasis(&v_of_one(6, &s)).unwrap();
        assert_eq!(e, VBasisExpansion::from_i64(s, &[0, 0, 0, 1]).unwrap());
    }

    #[test]
    fn from_vbasis_of_two_one_is_the_teichmuller_lift() {
        let e = VBasisExpansion::from_i64(ts(&[1, 2]), &[2, 1]).unwrap();
        let w = from_vbasis(&e).unwrap();
        assert_eq!(w, WittVector::from_i64_coords(ts(&[1, 2]), z(), &[2, 0]).unwrap());
    }

    #[test]
    fn zero_and_delta_coefficients() {
        let s = ts(&[1, 2, 3, 6]);
        let zero = VBasisExpansion::from_i64(s.clone(), &[0, 0, 0, 0]).unwrap();
        assert_eq!(from_vbasis(&zero).unwrap(), WittVector::zero(s.clone(), z()));
        for (i, n) in s.iter().enumerate() {
            let mut coeffs = vec![0i64; s.len()];
            coeffs[i] = 1;
            let e = VBasisExpansion::from_i64(s.clone(), &coeffs).unwrap();
            assert_eq!(from_vbasis(&e).unwrap(), v_of_one(n, &s), "delta at {n}");
        }
    }

    #[test]
    fn structure_constants() {
        let s = TruncationSet::divisor_closure(&[6, 4]).unwrap();
        assert_eq!(vbasis_product(&s, 2, 3).unwrap(), (1, 6));
        assert_eq!(vbasis_product(&s, 2, 2).unwrap(), (2, 2));
        for n in s.iter() {
            assert_eq!(vbasis_product(&s, 1, n).unwrap(), (1, n));
        }
        assert_eq!(
            vbasis_product(&s, 4, 6).unwrap_err(),
            Error::IndexOutsideS { index: 12 }
        );
        assert_eq!(
            vbasis_product(&s, 5, 1).unwrap_err(),
            Error::IndexOutsideS { index: 5 }
        );
    }

    #[test]
    fn structure_constants_match_multiplication() {
        let ctx = WittContext::new();
        let s = TruncationSet::divisor_closure(&[8, 12, 10]).unwrap();
        for m in s.iter() {
            for n in s.iter() {
                let Ok((c, l)) = vbasis_product(&s, m, n) else { continue };
                let prod = ctx.mul(&v_of_one(m, &s), &v_of_one(n, &s)).unwrap();
                let expected = ctx.mul_int(&v_of_one(l, &s), i64::try_from(c).unwrap()).unwrap();
                assert_eq!(prod, expected, "V_{m}(1) * V_{n}(1)");
            }
        }
    }

    #[test]
    fn random_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let s = TruncationSet::divisor_closure(&[12, 9, 10, 7]).unwrap();
        for _ in 0..60 {
            let coords: Vec<i64> = (0..s.len()).map(|_| rng.gen_range(-9..=9)).collect();
            let w = WittVector::from_i64_coords(s.clone(), z(), &coords).unwrap();
            let e = to_vbasis(&w).unwrap();
            assert_eq!(from_vbasis(&e).unwrap(), w);

            let cs: Vec<i64> = (0..s.len()).map(|_| rng.gen_range(-9..=9)).collect();
            let e = VBasisExpansion::from_i64(s.clone(), &cs).unwrap();
            assert_eq!(to_vbasis(&from_vbasis(&e).unwrap()).unwrap(), e);
        }
    }

    #[test]
    fn rejects_non_integer_rings() {
        let q = RingDescriptor::rationals();
        let w = WittVector::one(ts(&[1, 2]), q);
        assert!(matches!(to_vbasis(&w).unwrap_err(), Error::WrongRing { .. }));
    }
}
