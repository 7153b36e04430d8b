//! Orthogonal idempotents splitting the Witt ring over a ring in which
//! every prime except p is invertible.
//!
//! For such a coefficient ring the elements
//! eps_1 = prod over primes l != p present in S of (1 - (1/l) V_l(1)) and
//! eps_n = (1/n) V_n(eps_1 over S/n), for n in S coprime to p, are
//! orthogonal idempotents summing to 1. They cut the Witt ring into
//! p-typical factors: restricting F_n to the p-power part of S/n is an
//! isomorphism on the n-th factor, and `decompose`/`reassemble` implement
//! the two directions of that splitting.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::rings::RingDescriptor;
use crate::truncation::{is_prime, TruncationSet};
use crate::witt::{from_ghost, ghost, verschiebung, GhostVector, WittContext, WittVector};

/// All idempotents for one (S, p) pair, keyed by the coprime index n.
#[derive(Clone, Debug)]
pub struct EpsilonFamily {
    s: TruncationSet,
    p: u64,
    ring: RingDescriptor,
    idempotents: BTreeMap<u64, WittVector>,
}

fn check_setting(ring: &RingDescriptor, p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::NotPrime { value: p });
    }
    if !ring.is_zp_algebra(p) {
        return Err(Error::WrongRing {
            reason: format!("{} does not invert the primes away from {p}", ring.name()),
        });
    }
    Ok(())
}

/// The first idempotent over `t`: the product of (1 - (1/l) V_l(1)) over
/// primes l != p occurring in `t`.
fn epsilon_one(ctx: &WittContext, ring: &RingDescriptor, t: &TruncationSet, p: u64) -> Result<WittVector> {
    let mut acc = WittVector::one(t.clone(), ring.clone());
    for l in t.iter() {
        if l == p || !is_prime(l) {
            continue;
        }
        let v = verschiebung(l, &WittVector::one(t.quotient(l), ring.clone()), t)?;
        let summand = ctx.div_int(&v, i64::try_from(l).expect("prime fits"))?;
        let factor = ctx.sub(&WittVector::one(t.clone(), ring.clone()), &summand)?;
        acc = ctx.mul(&acc, &factor)?;
    }
    Ok(acc)
}

/// The idempotent eps_n over S. Zero when S/n is empty; requires n coprime
/// to p and a coefficient ring inverting the primes away from p.
pub fn epsilon(
    ctx: &WittContext,
    ring: &RingDescriptor,
    n: u64,
    s: &TruncationSet,
    p: u64,
) -> Result<WittVector> {
    check_setting(ring, p)?;
    if n == 0 {
        return Err(Error::InvalidIndex { index: 0 });
    }
    if n.gcd(&p) != 1 {
        return Err(Error::NotCoprime { n, p });
    }
    if !s.contains(n) {
        return Ok(WittVector::zero(s.clone(), ring.clone()));
    }
    let e1 = epsilon_one(ctx, ring, &s.quotient(n), p)?;
    let lifted = verschiebung(n, &e1, s)?;
    ctx.div_int(&lifted, i64::try_from(n).expect("index fits"))
}

/// Builds every eps_n with n in S coprime to p.
pub fn epsilon_family(
    ctx: &WittContext,
    ring: &RingDescriptor,
    s: &TruncationSet,
    p: u64,
) -> Result<EpsilonFamily> {
    check_setting(ring, p)?;
    let mut idempotents = BTreeMap::new();
    for n in s.iter() {
        if n.gcd(&p) == 1 {
            idempotents.insert(n, epsilon(ctx, ring, n, s, p)?);
        }
    }
    Ok(EpsilonFamily { s: s.clone(), p, ring: ring.clone(), idempotents })
}

impl EpsilonFamily {
    pub fn set(&self) -> &TruncationSet {
        &self.s
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn ring(&self) -> &RingDescriptor {
        &self.ring
    }

    pub fn indices(&self) -> impl Iterator<Item = u64> + '_ {
        self.idempotents.keys().copied()
    }

    pub fn get(&self, n: u64) -> Option<&WittVector> {
        self.idempotents.get(&n)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, &WittVector)> {
        self.idempotents.iter().map(|(&n, w)| (n, w))
    }

    /// Checks idempotency, pairwise orthogonality, and that the family sums
    /// to 1. Any failure is an internal error: the formulas guarantee the
    /// laws whenever construction succeeded.
    pub fn verify(&self, ctx: &WittContext) -> Result<()> {
        let one = WittVector::one(self.s.clone(), self.ring.clone());
        let mut sum = WittVector::zero(self.s.clone(), self.ring.clone());
        for (&n, e) in &self.idempotents {
            let sq = ctx.mul(e, e)?;
            if sq != *e {
                return Err(Error::Internal {
                    detail: format!("eps_{n} over {} is not idempotent", self.s),
                });
            }
            for (&m, e2) in self.idempotents.range(n + 1..) {
                if !ctx.mul(e, e2)?.is_zero() {
                    return Err(Error::Internal {
                        detail: format!("eps_{n} * eps_{m} over {} is nonzero", self.s),
                    });
                }
            }
            sum = ctx.add(&sum, e)?;
        }
        if sum != one {
            return Err(Error::Internal {
                detail: format!("idempotents over {} do not sum to 1", self.s),
            });
        }
        Ok(())
    }
}

/// F_m applied to eps_n: equals eps_{n/m} over S/m when m divides n and 0
/// otherwise. Both the computed image and the case rule are evaluated; a
/// disagreement is an internal error.
pub fn frobenius_of_epsilon(
    ctx: &WittContext,
    ring: &RingDescriptor,
    m: u64,
    n: u64,
    s: &TruncationSet,
    p: u64,
) -> Result<WittVector> {
    check_setting(ring, p)?;
    for k in [m, n] {
        if k == 0 {
            return Err(Error::InvalidIndex { index: 0 });
        }
        if k.gcd(&p) != 1 {
            return Err(Error::NotCoprime { n: k, p });
        }
    }
    let e = epsilon(ctx, ring, n, s, p)?;
    let image = ctx.frobenius(m, &e)?;
    let t = s.quotient(m);
    let expected = if n % m == 0 {
        epsilon(ctx, ring, n / m, &t, p)?
    } else {
        WittVector::zero(t, ring.clone())
    };
    if image != expected {
        return Err(Error::Internal {
            detail: format!("F_{m}(eps_{n}) over {s} violates the case rule"),
        });
    }
    Ok(image)
}

/// Splits a vector into its p-typical components: the component at n is
/// the restriction of F_n(w) to the p-power part of S/n, for each n in S
/// coprime to p.
pub fn decompose(
    ctx: &WittContext,
    w: &WittVector,
    p: u64,
) -> Result<BTreeMap<u64, WittVector>> {
    check_setting(w.ring(), p)?;
    let mut out = BTreeMap::new();
    for n in w.set().iter() {
        if n.gcd(&p) != 1 {
            continue;
        }
        let f = ctx.frobenius(n, w)?;
        let target = w.set().quotient(n).p_part(p);
        out.insert(n, f.restrict(&target)?);
    }
    Ok(out)
}

/// Rebuilds the vector whose decomposition is the given family of p-typical
/// components: one component per n in S coprime to p, each over the p-power
/// part of S/n.
///
/// Works over ghost space: writing m in S as m = u * p^j with u coprime to
/// p, the ghost component of the result at m equals the ghost component of
/// the u-th input at p^j. The triangular solve back is exact because the
/// splitting is a bijection.
pub fn reassemble(
    ring: &RingDescriptor,
    s: &TruncationSet,
    p: u64,
    components: &BTreeMap<u64, WittVector>,
) -> Result<WittVector> {
    check_setting(ring, p)?;
    let mut expected: Vec<u64> = Vec::new();
    for n in s.iter() {
        if n.gcd(&p) == 1 {
            expected.push(n);
        }
    }
    if components.keys().copied().collect::<Vec<_>>() != expected {
        return Err(Error::ShapeMismatch {
            reason: format!("components must be keyed by the elements of {s} coprime to {p}"),
        });
    }
    for (&n, y) in components {
        let t = s.quotient(n).p_part(p);
        if *y.set() != t {
            return Err(Error::ShapeMismatch {
                reason: format!("component {n} lives over {}, expected {t}", y.set()),
            });
        }
        if y.ring() != ring {
            return Err(Error::DescriptorMismatch {
                expected: ring.name(),
                found: y.ring().name(),
            });
        }
    }

    let ghosts: BTreeMap<u64, GhostVector> = components
        .iter()
        .map(|(&n, y)| Ok((n, ghost(y)?)))
        .collect::<Result<_>>()?;
    let mut comps = Vec::with_capacity(s.len());
    for m in s.iter() {
        let mut u = m;
        let mut q = 1u64;
        while u % p == 0 {
            u /= p;
            q *= p;
        }
        let g = ghosts
            .get(&u)
            .and_then(|gv| gv.component(q))
            .expect("u is coprime to p and q lies in the component's set");
        comps.push(g.clone());
    }
    let g = GhostVector::new(s.clone(), ring.clone(), comps)?;
    from_ghost(&g).map_err(|e| match e {
        Error::NotGhostIntegral { index } => Error::Internal {
            detail: format!("reassembly lost integrality at index {index}"),
        },
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::RingValue;
    use num_rational::BigRational;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn zp(p: u64) -> RingDescriptor {
        RingDescriptor::local_at(p).unwrap()
    }

    fn ts(raw: &[u64]) -> TruncationSet {
        TruncationSet::new(raw.iter().copied()).unwrap()
    }

    fn rat(n: i64, d: i64) -> RingValue {
        RingValue::Rat(BigRational::new(n.into(), d.into()))
    }

    #[test]
    fn empty_product_gives_one() {
        let ctx = WittContext::new();
        let r = zp(2);
        let e1 = epsilon(&ctx, &r, 1, &ts(&[1, 2]), 2).unwrap();
        assert_eq!(e1, WittVector::one(ts(&[1, 2]), r));
    }

    #[test]
    fn frozen_family_for_one_and_three() {
        let ctx = WittContext::new();
        let r = zp(2);
        let s = ts(&[1, 3]);
        let e1 = epsilon(&ctx, &r, 1, &s, 2).unwrap();
        let e3 = epsilon(&ctx, &r, 3, &s, 2).unwrap();
        assert_eq!(
            e1,
            WittVector::new(s.clone(), r.clone(), alloc::vec![rat(1, 1), rat(-1, 3)]).unwrap()
        );
        assert_eq!(
            e3,
            WittVector::new(s.clone(), r.clone(), alloc::vec![rat(0, 1), rat(1, 3)]).unwrap()
        );
    }

    #[test]
    fn vanishes_when_quotient_is_empty() {
        let ctx = WittContext::new();
        let r = zp(2);
        let s = ts(&[1, 2]);
        let e5 = epsilon(&ctx, &r, 5, &s, 2).unwrap();
        assert!(e5.is_zero());
    }

    #[test]
    fn rejects_bad_inputs() {
        let ctx = WittContext::new();
        let s = ts(&[1, 2]);
        assert_eq!(
            epsilon(&ctx, &zp(2), 6, &s, 2).unwrap_err(),
            Error::NotCoprime { n: 6, p: 2 }
        );
        assert_eq!(
            epsilon(&ctx, &zp(2), 1, &s, 4).unwrap_err(),
            Error::NotPrime { value: 4 }
        );
        assert!(matches!(
            epsilon(&ctx, &RingDescriptor::integers(), 1, &s, 2).unwrap_err(),
            Error::WrongRing { .. }
        ));
    }

    #[test]
    fn family_laws_hold() {
        let ctx = WittContext::new();
        for p in [2u64, 3, 5] {
            let s = TruncationSet::divisor_closure(&[1, 2, 3, 4, 5, 6]).unwrap();
            let fam = epsilon_family(&ctx, &zp(p), &s, p).unwrap();
            fam.verify(&ctx).unwrap();
        }
    }

    #[test]
    fn frobenius_case_rule() {
        let ctx = WittContext::new();
        let r = zp(2);
        let s = ts(&[1, 3]);
        let hit = frobenius_of_epsilon(&ctx, &r, 3, 3, &s, 2).unwrap();
        assert_eq!(hit, WittVector::one(ts(&[1]), r.clone()));
        let miss = frobenius_of_epsilon(&ctx, &r, 3, 1, &s, 2).unwrap();
        assert!(miss.is_zero());
        let identity = frobenius_of_epsilon(&ctx, &r, 1, 3, &s, 2).unwrap();
        assert_eq!(identity, epsilon(&ctx, &r, 3, &s, 2).unwrap());
    }

    #[test]
    fn decompose_sends_one_to_ones() {
        let ctx = WittContext::new();
        let r = zp(2);
        let s = TruncationSet::divisor_closure(&[6, 4]).unwrap();
        let parts = decompose(&ctx, &WittVector::one(s.clone(), r.clone()), 2).unwrap();
        assert_eq!(parts.keys().copied().collect::<Vec<_>>(), alloc::vec![1, 3]);
        for (n, y) in &parts {
            assert_eq!(*y, WittVector::one(y.set().clone(), r.clone()), "component {n}");
        }
    }

    #[test]
    fn p_typical_set_decomposes_trivially() {
        let ctx = WittContext::new();
        let r = zp(2);
        let s = ts(&[1, 2, 4]);
        let w = WittVector::new(
            s.clone(),
            r.clone(),
            alloc::vec![rat(1, 3), rat(-2, 1), rat(7, 3)],
        )
        .unwrap();
        let parts = decompose(&ctx, &w, 2).unwrap();
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[&1], w);
    }

    #[test]
    fn round_trips_both_ways() {
        let ctx = WittContext::new();
        let r = zp(2);
        let s = TruncationSet::divisor_closure(&[6, 4]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..25 {
            let w = WittVector::new(
                s.clone(),
                r.clone(),
                (0..s.len()).map(|_| r.sample(&mut rng, 9)).collect(),
            )
            .unwrap();
            let parts = decompose(&ctx, &w, 2).unwrap();
            assert_eq!(reassemble(&r, &s, 2, &parts).unwrap(), w);
        }
        for _ in 0..25 {
            let mut parts = BTreeMap::new();
            for n in [1u64, 3] {
                let t = s.quotient(n).p_part(2);
                let y = WittVector::new(
                    t.clone(),
                    r.clone(),
                    (0..t.len()).map(|_| r.sample(&mut rng, 9)).collect(),
                )
                .unwrap();
                parts.insert(n, y);
            }
            let w = reassemble(&r, &s, 2, &parts).unwrap();
            assert_eq!(decompose(&ctx, &w, 2).unwrap(), parts);
        }
    }

    #[test]
    fn reassemble_validates_shapes() {
        let r = zp(2);
        let s = ts(&[1, 2, 3, 6]);
        let bad = BTreeMap::from([(1u64, WittVector::one(ts(&[1]), r.clone()))]);
        assert!(matches!(
            reassemble(&r, &s, 2, &bad).unwrap_err(),
            Error::ShapeMismatch { .. }
        ));
    }

    #[test]
    fn decomposition_restricted_to_an_idempotent_factor() {
        // eps_n * w reassembles from the single component of index n.
        let ctx = WittContext::new();
        let r = zp(2);
        let s = ts(&[1, 3, 9]);
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let w = WittVector::new(
            s.clone(),
            r.clone(),
            (0..s.len()).map(|_| r.sample(&mut rng, 9)).collect(),
        )
        .unwrap();
        for n in [1u64, 3, 9] {
            let e = epsilon(&ctx, &r, n, &s, 2).unwrap();
            let cut = ctx.mul(&e, &w).unwrap();
            let parts = decompose(&ctx, &cut, 2).unwrap();
            for (m, y) in &parts {
                if *m == n {
                    continue;
                }
                assert!(y.is_zero(), "component {m} of eps_{n} * w");
            }
        }
    }
}
