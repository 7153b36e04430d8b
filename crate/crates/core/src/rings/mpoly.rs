//! Sparse multivariate polynomials with arbitrary precision integer
//! coefficients.
//!
//! Monomials are fixed-length exponent vectors ordered lexicographically, so
//! a polynomial always has one canonical term order. Zero coefficients are
//! never stored.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: BigInt) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0; nvars], c);
        }
        MPoly { nvars, terms }
    }

    /// The monomial `x_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index out of range");
        let mut exps = vec![0; nvars];
        exps[i] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(exps, BigInt::one());
        MPoly { nvars, terms }
    }

    /// Builds a polynomial from raw terms, merging duplicates and dropping
    /// zero coefficients. Every exponent vector must have length `nvars`.
    pub fn from_terms<I>(nvars: usize, raw: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, BigInt)>,
    {
        let mut terms: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
        for (exps, c) in raw {
            assert_eq!(exps.len(), nvars, "exponent vector length mismatch");
            let entry = terms.entry(exps).or_insert_with(BigInt::zero);
            *entry += c;
        }
        terms.retain(|_, c| !c.is_zero());
        MPoly { nvars, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Iterates terms in the canonical (lexicographic) order.
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &BigInt)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    /// Some(c) when the polynomial is the constant c (including zero).
    pub fn as_constant(&self) -> Option<BigInt> {
        match self.terms.len() {
            0 => Some(BigInt::zero()),
            1 => {
                let (exps, c) = self.terms.iter().next().unwrap();
                exps.iter().all(|&e| e == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    /// Indices of variables that actually occur.
    pub fn support(&self) -> Vec<usize> {
        let mut seen = vec![false; self.nvars];
        for exps in self.terms.keys() {
            for (i, &e) in exps.iter().enumerate() {
                if e > 0 {
                    seen[i] = true;
                }
            }
        }
        seen.iter().enumerate().filter(|(_, &s)| s).map(|(i, _)| i).collect()
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        assert_eq!(self.nvars, other.nvars);
        let mut terms = self.terms.clone();
        for (exps, c) in &other.terms {
            let entry = terms.entry(exps.clone()).or_insert_with(BigInt::zero);
            *entry += c;
        }
        terms.retain(|_, c| !c.is_zero());
        MPoly { nvars: self.nvars, terms }
    }

    pub fn neg(&self) -> MPoly {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect();
        MPoly { nvars: self.nvars, terms }
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        assert_eq!(self.nvars, other.nvars);
        let mut terms: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exps: Vec<u32> = ea.iter().zip(eb).map(|(&x, &y)| x + y).collect();
                let entry = terms.entry(exps).or_insert_with(BigInt::zero);
                *entry += ca * cb;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        MPoly { nvars: self.nvars, terms }
    }

    pub fn pow(&self, e: u64) -> MPoly {
        let mut base = self.clone();
        let mut acc = MPoly::constant(self.nvars, BigInt::one());
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn mul_scalar(&self, k: &BigInt) -> MPoly {
        if k.is_zero() {
            return MPoly::zero(self.nvars);
        }
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect();
        MPoly { nvars: self.nvars, terms }
    }

    /// Divides every coefficient exactly by `k`, or returns None if some
    /// coefficient is not a multiple of `k`.
    pub fn div_exact(&self, k: &BigInt) -> Option<MPoly> {
        assert!(!k.is_zero(), "division by zero");
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let (q, r) = num_integer::Integer::div_rem(c, k);
            if !r.is_zero() {
                return None;
            }
            terms.insert(e.clone(), q);
        }
        Some(MPoly { nvars: self.nvars, terms })
    }

    /// Applies `f` to every coefficient, dropping resulting zeros. Used for
    /// coefficient reduction modulo an integer.
    pub fn map_coeffs<F: Fn(&BigInt) -> BigInt>(&self, f: F) -> MPoly {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let c = f(c);
            if !c.is_zero() {
                terms.insert(e.clone(), c);
            }
        }
        MPoly { nvars: self.nvars, terms }
    }

    /// Rewrites every occurrence of `x_var^k` (k = `deg`) using the identity
    /// `x_var^deg = lower`, where `lower` has degree below `deg` in `x_var`.
    /// This is the reduction step for a monic univariate relation.
    pub fn reduce_power(&self, var: usize, deg: u32, lower: &MPoly) -> MPoly {
        assert!(deg > 0);
        let mut cur = self.clone();
        while cur.degree_in(var) >= deg {
            let mut kept: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
            let mut replaced = MPoly::zero(self.nvars);
            for (exps, c) in &cur.terms {
                if exps[var] >= deg {
                    let mut rest = exps.clone();
                    rest[var] -= deg;
                    let mono = MPoly { nvars: self.nvars, terms: [(rest, c.clone())].into_iter().collect() };
                    replaced = replaced.add(&mono.mul(lower));
                } else {
                    kept.insert(exps.clone(), c.clone());
                }
            }
            cur = MPoly { nvars: self.nvars, terms: kept }.add(&replaced);
        }
        cur
    }

    /// Renders the polynomial with the given variable names.
    pub fn to_string_with(&self, names: &[String]) -> String {
        use core::fmt::Write;
        assert_eq!(names.len(), self.nvars);
        if self.terms.is_empty() {
            return String::from("0");
        }
        let mut out = String::new();
        for (i, (exps, c)) in self.terms.iter().enumerate() {
            let mut mono = String::new();
            for (v, &e) in exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !mono.is_empty() {
                    mono.push('*');
                }
                if e == 1 {
                    let _ = write!(mono, "{}", names[v]);
                } else {
                    let _ = write!(mono, "{}^{}", names[v], e);
                }
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            let abs = c.abs();
            if i == 0 {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                let _ = write!(out, " {sign} ");
            }
            if mono.is_empty() {
                let _ = write!(out, "{abs}");
            } else if abs.is_one() {
                out.push_str(&mono);
            } else {
                let _ = write!(out, "{abs}*{mono}");
            }
        }
        out
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars)
            .map(|i| {
                let mut s = String::from("x");
                let _ = fmt::Write::write_fmt(&mut s, format_args!("{i}"));
                s
            })
            .collect();
        f.write_str(&self.to_string_with(&names))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(k: i64) -> BigInt {
        BigInt::from(k)
    }

    #[test]
    fn product_of_conjugates() {
        let x = MPoly::var(2, 0);
        let y = MPoly::var(2, 1);
        let lhs = x.add(&y).mul(&x.sub(&y));
        let rhs = x.mul(&x).sub(&y.mul(&y));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn binomial_cube() {
        let x = MPoly::var(2, 0);
        let y = MPoly::var(2, 1);
        let cube = x.add(&y).pow(3);
        let expected = MPoly::from_terms(
            2,
            [
                (vec![3, 0], int(1)),
                (vec![2, 1], int(3)),
                (vec![1, 2], int(3)),
                (vec![0, 3], int(1)),
            ],
        );
        assert_eq!(cube, expected);
    }

    #[test]
    fn exact_division() {
        let x = MPoly::var(1, 0);
        let p = x.mul_scalar(&int(6)).add(&MPoly::constant(1, int(9)));
        assert_eq!(p.div_exact(&int(3)), Some(x.mul_scalar(&int(2)).add(&MPoly::constant(1, int(3)))));
        assert_eq!(p.div_exact(&int(2)), None);
    }

    #[test]
    fn reduce_square_root_of_minus_one() {
        // x^2 = -1 turns (x + 1)^2 into 2x.
        let x = MPoly::var(1, 0);
        let sq = x.add(&MPoly::constant(1, int(1))).pow(2);
        let reduced = sq.reduce_power(0, 2, &MPoly::constant(1, int(-1)));
        assert_eq!(reduced, x.mul_scalar(&int(2)));
    }

    #[test]
    fn display_is_readable() {
        let x = MPoly::var(2, 0);
        let y = MPoly::var(2, 1);
        let p = x.pow(2).mul_scalar(&int(3)).sub(&y).add(&MPoly::constant(2, int(-7)));
        assert_eq!(alloc::format!("{p}"), "-7 - x1 + 3*x0^2");
    }

    #[test]
    fn zero_is_canonical() {
        let x = MPoly::var(1, 0);
        assert!(x.sub(&x).is_zero());
        assert_eq!(x.sub(&x), MPoly::zero(1));
        assert_eq!(x.mul_scalar(&int(0)), MPoly::zero(1));
    }
}
