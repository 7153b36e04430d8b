//! Witt rings of finite coefficient rings as explicit finite rings:
//! every element enumerated, addition and multiplication tabulated, and
//! ideals found by brute force.
//!
//! The sizes involved are tiny (the default cap is 4096 elements), so the
//! module favors transparent exhaustive computation over anything clever.

use alloc::collections::BTreeMap;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::Rng;
use rand::SeedableRng;

use crate::error::{Error, Result};
use crate::rings::RingDescriptor;
use crate::truncation::TruncationSet;
use crate::witt::{coords_key, enumerate_vectors, verschiebung, WittContext, WittVector};

pub const DEFAULT_ELEMENT_CAP: u128 = 4096;

/// A fully tabulated finite Witt ring.
#[derive(Debug)]
pub struct FiniteRingTable {
    ring: RingDescriptor,
    s: TruncationSet,
    elements: Vec<WittVector>,
    add: Vec<Vec<usize>>,
    mul: Vec<Vec<usize>>,
    zero: usize,
    one: usize,
}

/// Materializes the Witt ring of a finite coefficient ring: enumerates all
/// vectors and builds total operation tables.
pub fn materialize(
    ctx: &WittContext,
    ring: &RingDescriptor,
    s: &TruncationSet,
    cap: u128,
) -> Result<FiniteRingTable> {
    if !ring.is_finite() {
        return Err(Error::NotFinite);
    }
    let elements = enumerate_vectors(ring, s, cap)?;
    let mut index: BTreeMap<String, usize> = BTreeMap::new();
    for (i, w) in elements.iter().enumerate() {
        index.insert(coords_key(w), i);
    }
    let lookup = |w: &WittVector| -> Result<usize> {
        index.get(&coords_key(w)).copied().ok_or_else(|| Error::Internal {
            detail: String::from("ring operation left the enumerated element set"),
        })
    };

    let n = elements.len();
    let mut add = Vec::with_capacity(n);
    let mut mul = Vec::with_capacity(n);
    for i in 0..n {
        let mut add_row = Vec::with_capacity(n);
        let mut mul_row = Vec::with_capacity(n);
        for j in 0..n {
            add_row.push(lookup(&ctx.add(&elements[i], &elements[j])?)?);
            mul_row.push(lookup(&ctx.mul(&elements[i], &elements[j])?)?);
        }
        add.push(add_row);
        mul.push(mul_row);
    }

    let zero = lookup(&WittVector::zero(s.clone(), ring.clone()))?;
    let one = lookup(&WittVector::one(s.clone(), ring.clone()))?;
    Ok(FiniteRingTable { ring: ring.clone(), s: s.clone(), elements, add, mul, zero, one })
}

/// Result of the ring-axiom spot check on a table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomReport {
    pub commutative: bool,
    pub unital: bool,
    pub associative: bool,
    pub distributive: bool,
    pub triples_checked: usize,
    pub exhaustive: bool,
}

impl AxiomReport {
    pub fn pass(&self) -> bool {
        self.commutative && self.unital && self.associative && self.distributive
    }
}

/// One maximal ideal: member indices plus the cardinality of the quotient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaximalIdeal {
    pub members: BTreeSet<usize>,
    pub quotient_size: usize,
}

impl FiniteRingTable {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn set(&self) -> &TruncationSet {
        &self.s
    }

    pub fn ring(&self) -> &RingDescriptor {
        &self.ring
    }

    pub fn elements(&self) -> &[WittVector] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &WittVector {
        &self.elements[i]
    }

    pub fn zero_index(&self) -> usize {
        self.zero
    }

    pub fn one_index(&self) -> usize {
        self.one
    }

    pub fn add_index(&self, i: usize, j: usize) -> usize {
        self.add[i][j]
    }

    pub fn mul_index(&self, i: usize, j: usize) -> usize {
        self.mul[i][j]
    }

    /// Checks the ring axioms on the tables: commutativity and the unit
    /// laws exhaustively, associativity and distributivity exhaustively
    /// while the triple count stays small and on seeded random triples
    /// beyond that.
    pub fn check_axioms(&self, seed: u64) -> AxiomReport {
        let n = self.elements.len();
        let mut commutative = true;
        let mut unital = true;
        for i in 0..n {
            if self.add[i][self.zero] != i || self.mul[i][self.one] != i {
                unital = false;
            }
            for j in 0..n {
                if self.add[i][j] != self.add[j][i] || self.mul[i][j] != self.mul[j][i] {
                    commutative = false;
                }
            }
        }

        let mut associative = true;
        let mut distributive = true;
        let mut check = |i: usize, j: usize, k: usize| {
            if self.add[self.add[i][j]][k] != self.add[i][self.add[j][k]] {
                associative = false;
            }
            if self.mul[self.mul[i][j]][k] != self.mul[i][self.mul[j][k]] {
                associative = false;
            }
            if self.mul[i][self.add[j][k]] != self.add[self.mul[i][j]][self.mul[i][k]] {
                distributive = false;
            }
        };
        let exhaustive = n.saturating_pow(3) <= 1 << 20;
        let triples_checked;
        if exhaustive {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        check(i, j, k);
                    }
                }
            }
            triples_checked = n * n * n;
        } else {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            triples_checked = 1 << 12;
            for _ in 0..triples_checked {
                check(rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
            }
        }

        AxiomReport { commutative, unital, associative, distributive, triples_checked, exhaustive }
    }

    /// The principal ideal generated by one element, as an index set.
    pub fn principal_ideal(&self, g: usize) -> BTreeSet<usize> {
        (0..self.elements.len()).map(|x| self.mul[g][x]).collect()
    }

    fn ideal_sum(&self, a: &BTreeSet<usize>, b: &BTreeSet<usize>) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        for &x in a {
            for &y in b {
                out.insert(self.add[x][y]);
            }
        }
        out
    }

    /// Every ideal of the ring: principal ideals closed under pairwise
    /// sums until a fixpoint. Any ideal is a finite sum of principal ones,
    /// so the closure reaches all of them.
    pub fn ideals(&self) -> Vec<BTreeSet<usize>> {
        let mut found: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
        for g in 0..self.elements.len() {
            found.insert(self.principal_ideal(g));
        }
        loop {
            let snapshot: Vec<BTreeSet<usize>> = found.iter().cloned().collect();
            let before = found.len();
            for (i, a) in snapshot.iter().enumerate() {
                for b in &snapshot[i + 1..] {
                    found.insert(self.ideal_sum(a, b));
                }
            }
            if found.len() == before {
                break;
            }
        }
        found.into_iter().collect()
    }

    /// All maximal ideals, each with its quotient cardinality.
    pub fn maximal_ideals(&self) -> Vec<MaximalIdeal> {
        let n = self.elements.len();
        let all = self.ideals();
        let proper: Vec<&BTreeSet<usize>> = all.iter().filter(|i| i.len() < n).collect();
        proper
            .iter()
            .filter(|i| {
                !proper
                    .iter()
                    .any(|j| j.len() > i.len() && i.is_subset(j))
            })
            .map(|i| MaximalIdeal {
                members: (*i).clone(),
                quotient_size: n / i.len(),
            })
            .collect()
    }
}

/// Outcome of the maximal-ideal verification for a p-typical set over
/// the integers mod p^j.
#[derive(Clone, Debug)]
pub struct LemmaReport {
    pub p: u64,
    pub s: TruncationSet,
    pub modulus: u64,
    pub elements: usize,
    pub maximal_ideal_count: usize,
    /// The maximal ideal equals the kernel of first-coordinate reduction
    /// mod p, and is unique.
    pub kernel_form: bool,
    /// V_p(x)^2 = p V_p(x^2) for every enumerated x.
    pub v_square_identity: bool,
    pub witness: Option<String>,
}

impl LemmaReport {
    pub fn pass(&self) -> bool {
        self.kernel_form && self.v_square_identity
    }
}

/// Verifies, over R = Z/p^j with a p-typical truncation set, that the
/// unique maximal ideal of the Witt ring is the kernel of "reduce the
/// first coordinate mod p", and that the Verschiebung square identity
/// underlying that fact holds on every element.
pub fn verify_maximal_ideal_lemma(
    ctx: &WittContext,
    p: u64,
    s: &TruncationSet,
    j: u32,
    cap: u128,
) -> Result<LemmaReport> {
    if !crate::truncation::is_prime(p) {
        return Err(Error::NotPrime { value: p });
    }
    for m in s.iter() {
        let mut m = m;
        while m % p == 0 {
            m /= p;
        }
        if m != 1 {
            return Err(Error::ShapeMismatch {
                reason: format!("{s} is not a set of powers of {p}"),
            });
        }
    }
    let modulus = p
        .checked_pow(j)
        .ok_or(Error::TooLarge { size: u128::MAX, cap })?;
    let ring = RingDescriptor::integers_mod(modulus)?;
    let table = materialize(ctx, &ring, s, cap)?;

    let kernel: BTreeSet<usize> = (0..table.len())
        .filter(|&i| {
            let w = table.element(i);
            match w.coord(1) {
                Some(v) => v.as_res().expect("residue ring").1 % p == 0,
                None => true,
            }
        })
        .collect();
    let maximal = table.maximal_ideals();
    let kernel_form = maximal.len() == 1 && maximal[0].members == kernel;
    let mut witness = if kernel_form {
        None
    } else {
        Some(format!(
            "found {} maximal ideals, kernel has {} members",
            maximal.len(),
            kernel.len()
        ))
    };

    let mut v_square_identity = true;
    if s.contains(p) {
        let sub = s.quotient(p);
        for x in enumerate_vectors(&ring, &sub, cap)? {
            let vx = verschiebung(p, &x, s)?;
            let lhs = ctx.mul(&vx, &vx)?;
            let x2 = ctx.mul(&x, &x)?;
            let rhs = ctx.mul_int(&verschiebung(p, &x2, s)?, i64::try_from(p).expect("prime fits"))?;
            if lhs != rhs {
                v_square_identity = false;
                if witness.is_none() {
                    witness = Some(format!("Verschiebung square identity fails at x = {x}"));
                }
                break;
            }
        }
    }

    Ok(LemmaReport {
        p,
        s: s.clone(),
        modulus,
        elements: table.len(),
        maximal_ideal_count: maximal.len(),
        kernel_form,
        v_square_identity,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    fn ts(raw: &[u64]) -> TruncationSet {
        TruncationSet::new(raw.iter().copied()).unwrap()
    }

    fn table(m: u64, s: &[u64]) -> FiniteRingTable {
        let ctx = WittContext::new();
        let ring = RingDescriptor::integers_mod(m).unwrap();
        materialize(&ctx, &ring, &ts(s), DEFAULT_ELEMENT_CAP).unwrap()
    }

    #[test]
    fn cardinalities() {
        assert_eq!(table(2, &[1, 2]).len(), 4);
        assert_eq!(table(3, &[1, 2]).len(), 9);
        assert_eq!(table(2, &[1, 2, 4]).len(), 8);
    }

    #[test]
    fn axioms_hold_on_small_tables() {
        for t in [table(2, &[1, 2]), table(3, &[1, 2]), table(4, &[1, 2])] {
            let report = t.check_axioms(0);
            assert!(report.pass(), "{report:?}");
            assert!(report.exhaustive);
        }
    }

    #[test]
    fn unique_maximal_ideal_of_the_four_element_ring() {
        let t = table(2, &[1, 2]);
        let maximal = t.maximal_ideals();
        assert_eq!(maximal.len(), 1);
        assert_eq!(maximal[0].quotient_size, 2);
        let members: Vec<&WittVector> =
            maximal[0].members.iter().map(|&i| t.element(i)).collect();
        let ring = RingDescriptor::integers_mod(2).unwrap();
        let expected = [
            WittVector::from_i64_coords(ts(&[1, 2]), ring.clone(), &[0, 0]).unwrap(),
            WittVector::from_i64_coords(ts(&[1, 2]), ring, &[0, 1]).unwrap(),
        ];
        assert_eq!(members.len(), 2);
        for w in &expected {
            assert!(members.contains(&w), "missing {w}");
        }
    }

    #[test]
    fn the_nine_element_ring_splits() {
        let t = table(3, &[1, 2]);
        let maximal = t.maximal_ideals();
        assert_eq!(maximal.len(), 2);
        for m in &maximal {
            assert_eq!(m.quotient_size, 3);
        }
    }

    #[test]
    fn field_has_only_the_zero_ideal_as_maximal() {
        let t = table(2, &[1]);
        let maximal = t.maximal_ideals();
        assert_eq!(maximal.len(), 1);
        assert_eq!(maximal[0].members.len(), 1);
        assert!(maximal[0].members.contains(&t.zero_index()));
    }

    #[test]
    fn lemma_reports() {
        let ctx = WittContext::new();
        for (p, s, j) in [(2u64, alloc::vec![1u64, 2], 1u32), (2, alloc::vec![1, 2, 4], 1), (3, alloc::vec![1, 3], 2)] {
            let report =
                verify_maximal_ideal_lemma(&ctx, p, &ts(&s), j, DEFAULT_ELEMENT_CAP).unwrap();
            assert!(report.pass(), "{report:?}");
            assert_eq!(report.maximal_ideal_count, 1);
        }
    }

    #[test]
    fn lemma_rejects_mixed_sets() {
        let ctx = WittContext::new();
        let err = verify_maximal_ideal_lemma(&ctx, 2, &ts(&[1, 2, 3, 6]), 1, DEFAULT_ELEMENT_CAP)
            .unwrap_err();
        assert!(matches!(err, Error::ShapeMismatch { .. }));
    }

    #[test]
    fn materialize_rejects_infinite_rings() {
        let ctx = WittContext::new();
        let err = materialize(&ctx, &RingDescriptor::integers(), &ts(&[1]), 16).unwrap_err();
        assert_eq!(err, Error::NotFinite);
    }
}
