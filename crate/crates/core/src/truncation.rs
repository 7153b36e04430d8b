//! Truncation sets: finite, divisor-closed sets of positive integers.
//!
//! A truncation set indexes the coordinates of a Witt vector. The empty set
//! is allowed and indexes the zero ring. Every nonempty truncation set
//! contains 1.

use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// A sorted, deduplicated, divisor-closed set of positive integers.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct TruncationSet {
    elems: Vec<u64>,
}

impl TruncationSet {
    /// Builds a truncation set from arbitrary raw indices.
    ///
    /// Sorts and deduplicates the input, then verifies divisor closure.
    /// Rejects 0 and any set containing an element without one of its
    /// divisors.
    pub fn new<I: IntoIterator<Item = u64>>(raw: I) -> Result<Self> {
        let mut elems: Vec<u64> = raw.into_iter().collect();
        elems.sort_unstable();
        elems.dedup();
        if elems.first() == Some(&0) {
            return Err(Error::InvalidIndex { index: 0 });
        }
        let set = TruncationSet { elems };
        for &s in &set.elems {
            for d in divisors(s) {
                if !set.contains(d) {
                    return Err(Error::NotDivisorClosed { witness: s, missing: d });
                }
            }
        }
        Ok(set)
    }

    /// The empty truncation set, indexing the zero ring.
    pub fn empty() -> Self {
        TruncationSet { elems: Vec::new() }
    }

    /// The smallest truncation set containing every seed element.
    pub fn divisor_closure(seed: &[u64]) -> Result<Self> {
        let mut elems: Vec<u64> = Vec::new();
        for &s in seed {
            if s == 0 {
                return Err(Error::InvalidIndex { index: 0 });
            }
            elems.extend(divisors(s));
        }
        elems.sort_unstable();
        elems.dedup();
        Ok(TruncationSet { elems })
    }

    /// The quotient set S/n = { s : s*n in S }.
    pub fn quotient(&self, n: u64) -> Self {
        assert!(n > 0, "quotient by zero index");
        let elems = self
            .elems
            .iter()
            .filter(|&&t| t % n == 0)
            .map(|&t| t / n)
            .collect();
        TruncationSet { elems }
    }

    /// The p-typical part: all powers of p contained in S, including 1.
    ///
    /// Panics if `p` is not prime.
    pub fn p_part(&self, p: u64) -> Self {
        assert!(is_prime(p), "p_part requires a prime");
        let elems = self
            .elems
            .iter()
            .copied()
            .filter(|&s| is_power_of(s, p))
            .collect();
        TruncationSet { elems }
    }

    /// S with all multiples of n removed. This is the cokernel index set of
    /// the Verschiebung V_n.
    pub fn minus_multiples(&self, n: u64) -> Self {
        assert!(n > 0, "minus_multiples of zero index");
        let elems = self.elems.iter().copied().filter(|&s| s % n != 0).collect();
        TruncationSet { elems }
    }

    pub fn contains(&self, s: u64) -> bool {
        self.elems.binary_search(&s).is_ok()
    }

    /// Position of `s` in the sorted element list.
    pub fn index_of(&self, s: u64) -> Option<usize> {
        self.elems.binary_search(&s).ok()
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn max(&self) -> Option<u64> {
        self.elems.last().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.elems.iter().copied()
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.elems
    }

    pub fn is_subset_of(&self, other: &TruncationSet) -> bool {
        self.elems.iter().all(|&s| other.contains(s))
    }
}

impl fmt::Display for TruncationSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, s) in self.elems.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, "}}")
    }
}

/// All divisors of `n` in ascending order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// Every divisor-closed subset of `universe`, the empty set included,
/// ordered by the bitmask over the sorted elements. Exponential in the
/// universe size, so it is capped at 2^20 subsets.
pub fn divisor_closed_subsets(universe: &TruncationSet) -> Result<Vec<TruncationSet>> {
    let elems = universe.as_slice();
    let k = elems.len();
    if k > 20 {
        return Err(Error::TooLarge { size: 1u128 << k, cap: 1 << 20 });
    }
    let mut divisor_masks = Vec::with_capacity(k);
    for &e in elems {
        let mut mask = 0u32;
        for d in divisors(e) {
            let idx = universe.index_of(d).expect("universe is divisor closed");
            mask |= 1 << idx;
        }
        divisor_masks.push(mask);
    }
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << k) {
        let closed = (0..k).all(|i| mask & (1 << i) == 0 || divisor_masks[i] & !mask == 0);
        if closed {
            let members = (0..k).filter(|i| mask & (1 << i) != 0).map(|i| elems[i]);
            out.push(TruncationSet::new(members)?);
        }
    }
    Ok(out)
}

/// Deterministic primality by trial division; fine for the index sizes
/// this crate works with.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

fn is_power_of(mut s: u64, p: u64) -> bool {
    while s % p == 0 {
        s /= p;
    }
    s == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn ts(raw: &[u64]) -> TruncationSet {
        TruncationSet::new(raw.iter().copied()).unwrap()
    }

    #[test]
    fn closure_of_seed() {
        let s = TruncationSet::divisor_closure(&[4, 9]).unwrap();
        assert_eq!(s.as_slice(), &[1, 2, 3, 4, 9]);
    }

    #[test]
    fn closure_of_empty_seed_is_empty() {
        let s = TruncationSet::divisor_closure(&[]).unwrap();
        assert!(s.is_empty());
    }

    #[test]
    fn rejects_missing_divisor() {
        let err = TruncationSet::new(vec![1, 4]).unwrap_err();
        assert_eq!(err, Error::NotDivisorClosed { witness: 4, missing: 2 });
        let err = TruncationSet::new(vec![2]).unwrap_err();
        assert_eq!(err, Error::NotDivisorClosed { witness: 2, missing: 1 });
    }

    #[test]
    fn rejects_zero() {
        let err = TruncationSet::new(vec![0, 1]).unwrap_err();
        assert_eq!(err, Error::InvalidIndex { index: 0 });
    }

    #[test]
    fn quotient_examples() {
        assert_eq!(ts(&[1, 2, 3, 6]).quotient(2).as_slice(), &[1, 3]);
        assert_eq!(ts(&[1, 2, 4, 5, 10, 20]).quotient(2).as_slice(), &[1, 2, 5, 10]);
        assert!(ts(&[1, 3]).quotient(2).is_empty());
        assert!(TruncationSet::empty().quotient(5).is_empty());
    }

    #[test]
    fn p_part_example() {
        assert_eq!(ts(&[1, 2, 3, 4, 6, 12]).p_part(2).as_slice(), &[1, 2, 4]);
        assert_eq!(ts(&[1, 2, 3, 4, 6, 12]).p_part(3).as_slice(), &[1, 3]);
    }

    #[test]
    fn minus_multiples_drops_exactly_the_multiples() {
        assert_eq!(ts(&[1, 2, 3, 4, 6, 12]).minus_multiples(2).as_slice(), &[1, 3]);
        assert!(ts(&[1, 2]).minus_multiples(1).is_empty());
    }

    #[test]
    fn divisor_list() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1), vec![1]);
    }

    #[test]
    fn primality() {
        let primes: Vec<u64> = (0..32).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31]);
    }

    #[test]
    fn divisor_closed_subsets_of_small_universe() {
        let subsets = divisor_closed_subsets(&ts(&[1, 2, 4])).unwrap();
        let raw: Vec<&[u64]> = subsets.iter().map(|s| s.as_slice()).collect();
        assert_eq!(raw, vec![&[] as &[u64], &[1], &[1, 2], &[1, 2, 4]]);

        let subsets = divisor_closed_subsets(&ts(&[1, 2, 3, 6])).unwrap();
        assert_eq!(subsets.len(), 6);
        for s in &subsets {
            assert!(TruncationSet::new(s.iter()).is_ok());
            assert!(s.is_subset_of(&ts(&[1, 2, 3, 6])));
        }
    }

    proptest! {
        #[test]
        fn closure_is_idempotent(seed in proptest::collection::vec(1u64..=60, 0..6)) {
            let s = TruncationSet::divisor_closure(&seed).unwrap();
            let again = TruncationSet::divisor_closure(s.as_slice()).unwrap();
            prop_assert_eq!(&s, &again);
            prop_assert!(TruncationSet::new(s.iter()).is_ok());
        }

        #[test]
        fn quotients_compose(seed in proptest::collection::vec(1u64..=60, 0..6),
                             n in 1u64..=6, m in 1u64..=6) {
            let s = TruncationSet::divisor_closure(&seed).unwrap();
            prop_assert_eq!(s.quotient(n).quotient(m), s.quotient(n * m));
        }

        #[test]
        fn quotient_is_divisor_closed(seed in proptest::collection::vec(1u64..=60, 0..6),
                                      n in 1u64..=6) {
            let s = TruncationSet::divisor_closure(&seed).unwrap();
            prop_assert!(TruncationSet::new(s.quotient(n).iter()).is_ok());
        }
    }
}
