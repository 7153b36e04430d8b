//! Universal coordinate polynomials for Witt vector arithmetic.
//!
//! The coordinate of x+y, x*y, -x, or F_r(x) at index n is an integer
//! polynomial in the coordinates of the operands at indices dividing n
//! (dividing rn for the Frobenius). Each polynomial is obtained by the
//! triangular ghost solve applied to generic vectors: the ghost component at
//! n of the result is known in closed form, lower coordinates are already
//! cached, and the division by n is exact over the integers precisely
//! because the operation is defined on all rings.
//!
//! Entries are cached per index with compute-once initialization; readers
//! may be concurrent. The cap bounds the largest index the table will ever
//! compute, since sizes grow quickly.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::rings::MPoly;
use crate::truncation::divisors;

#[cfg(feature = "std")]
use std::sync::{OnceLock as OnceCell, RwLock};

#[cfg(not(feature = "std"))]
use spin::{Once as OnceCell, RwLock};

/// Default cap on table indices; the CLI exposes it as WITT_MAX_N.
pub const DEFAULT_MAX_N: u64 = 30;

/// Coordinate polynomials of sum, product, and negation at one index.
///
/// `sum` and `prod` live in 2k variables, the x block then the y block,
/// both ordered by `divisors`. `neg` lives in the k-variable x block.
#[derive(Debug)]
pub struct ArithEntry {
    pub n: u64,
    pub divisors: Vec<u64>,
    pub sum: MPoly,
    pub prod: MPoly,
    pub neg: MPoly,
}

/// Coordinate polynomial of the Frobenius F_r at result index m, in the
/// coordinates of the argument at indices dividing r*m.
#[derive(Debug)]
pub struct FrobEntry {
    pub r: u64,
    pub m: u64,
    pub divisors: Vec<u64>,
    pub poly: MPoly,
}

struct Cache<K: Ord + Clone, V> {
    map: RwLock<BTreeMap<K, Arc<OnceCell<Result<Arc<V>>>>>>,
}

impl<K: Ord + Clone, V> Cache<K, V> {
    fn new() -> Self {
        Cache { map: RwLock::new(BTreeMap::new()) }
    }

    fn get_or_init<F: FnOnce() -> Result<Arc<V>>>(&self, key: K, f: F) -> Result<Arc<V>> {
        let existing = read_lock(&self.map).get(&key).cloned();
        let cell = match existing {
            Some(cell) => cell,
            None => {
                let mut map = write_lock(&self.map);
                map.entry(key).or_insert_with(|| Arc::new(OnceCell::new())).clone()
            }
        };
        once_get_or_init(&cell, f).clone()
    }
}

#[cfg(feature = "std")]
fn read_lock<T>(l: &RwLock<T>) -> std::sync::RwLockReadGuard<'_, T> {
    l.read().unwrap_or_else(|e| e.into_inner())
}

#[cfg(feature = "std")]
fn write_lock<T>(l: &RwLock<T>) -> std::sync::RwLockWriteGuard<'_, T> {
    l.write().unwrap_or_else(|e| e.into_inner())
}

#[cfg(feature = "std")]
fn once_get_or_init<T, F: FnOnce() -> T>(cell: &OnceCell<T>, f: F) -> &T {
    cell.get_or_init(f)
}

#[cfg(not(feature = "std"))]
fn read_lock<T>(l: &RwLock<T>) -> spin::RwLockReadGuard<'_, T> {
    l.read()
}

#[cfg(not(feature = "std"))]
fn write_lock<T>(l: &RwLock<T>) -> spin::RwLockWriteGuard<'_, T> {
    l.write()
}

#[cfg(not(feature = "std"))]
fn once_get_or_init<T, F: FnOnce() -> T>(cell: &OnceCell<T>, f: F) -> &T {
    cell.call_once(f)
}

pub struct UniversalPolyTable {
    cap: u64,
    arith: Cache<u64, ArithEntry>,
    frob: Cache<(u64, u64), FrobEntry>,
}

impl UniversalPolyTable {
    pub fn new(cap: u64) -> Self {
        UniversalPolyTable { cap, arith: Cache::new(), frob: Cache::new() }
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }

    /// Sum, product, and negation polynomials at index n.
    pub fn arith_entry(&self, n: u64) -> Result<Arc<ArithEntry>> {
        if n == 0 {
            return Err(Error::InvalidIndex { index: 0 });
        }
        if n > self.cap {
            return Err(Error::CapExceeded { n, cap: self.cap });
        }
        self.arith.get_or_init(n, || self.build_arith(n).map(Arc::new))
    }

    /// Frobenius coordinate polynomial: result index m of F_r.
    pub fn frob_entry(&self, r: u64, m: u64) -> Result<Arc<FrobEntry>> {
        if r == 0 || m == 0 {
            return Err(Error::InvalidIndex { index: 0 });
        }
        let rm = r.checked_mul(m).ok_or(Error::InvalidIndex { index: u64::MAX })?;
        if rm > self.cap {
            return Err(Error::CapExceeded { n: rm, cap: self.cap });
        }
        self.frob.get_or_init((r, m), || self.build_frob(r, m).map(Arc::new))
    }

    fn build_arith(&self, n: u64) -> Result<ArithEntry> {
        let divs = divisors(n);
        let k = divs.len();
        let nvars = 2 * k;

        // Ghost components at n of the generic operands.
        let ghost_x = ghost_component(&divs, n, 0, nvars);
        let ghost_y = ghost_component(&divs, n, k, nvars);

        let g_sum = ghost_x.add(&ghost_y);
        let g_prod = ghost_x.mul(&ghost_y);
        let g_neg = ghost_x.neg();

        // Subtract the contributions of the already known lower coordinates
        // and divide by n. sum/prod coordinates at d use both variable
        // blocks, negation only the x block.
        let mut sum_acc = g_sum;
        let mut prod_acc = g_prod;
        let mut neg_acc = g_neg;
        for &d in &divs {
            if d == n {
                break;
            }
            let lower = self.arith_entry(d)?;
            let e = n / d;
            let dd = BigInt::from(d);
            sum_acc = sum_acc.sub(&embed_pair(&lower.sum, &lower.divisors, &divs).pow(e).mul_scalar(&dd));
            prod_acc = prod_acc.sub(&embed_pair(&lower.prod, &lower.divisors, &divs).pow(e).mul_scalar(&dd));
            neg_acc = neg_acc.sub(&embed_block(&lower.neg, &lower.divisors, &divs, 0, nvars).pow(e).mul_scalar(&dd));
        }

        let n_big = BigInt::from(n);
        let sum = exact(sum_acc.div_exact(&n_big), "sum", n)?;
        let prod = exact(prod_acc.div_exact(&n_big), "product", n)?;
        let neg = project_to_x_block(exact(neg_acc.div_exact(&n_big), "negation", n)?, k);

        Ok(ArithEntry { n, divisors: divs, sum, prod, neg })
    }

    fn build_frob(&self, r: u64, m: u64) -> Result<FrobEntry> {
        let divs = divisors(r * m);
        let nvars = divs.len();

        // gh_m(F_r(x)) = gh_{rm}(x).
        let mut acc = ghost_component(&divs, r * m, 0, nvars);
        for d in divisors(m) {
            if d == m {
                break;
            }
            let lower = self.frob_entry(r, d)?;
            let embedded = embed_block(&lower.poly, &lower.divisors, &divs, 0, nvars);
            acc = acc.sub(&embedded.pow(m / d).mul_scalar(&BigInt::from(d)));
        }
        let poly = exact(acc.div_exact(&BigInt::from(m)), "frobenius", m)?;
        Ok(FrobEntry { r, m, divisors: divs, poly })
    }
}

impl Default for UniversalPolyTable {
    fn default() -> Self {
        UniversalPolyTable::new(DEFAULT_MAX_N)
    }
}

fn exact(q: Option<MPoly>, what: &str, n: u64) -> Result<MPoly> {
    q.ok_or_else(|| Error::Internal {
        detail: format!("universal {what} polynomial at index {n} is not integral"),
    })
}

/// The ghost component at n of a generic vector whose coordinate at divisor
/// d(i) is the variable `offset + i` in an `nvars`-variable space.
fn ghost_component(divs: &[u64], n: u64, offset: usize, nvars: usize) -> MPoly {
    let mut acc = MPoly::zero(nvars);
    for (i, &d) in divs.iter().enumerate() {
        if n % d != 0 {
            continue;
        }
        let term = MPoly::var(nvars, offset + i).pow(n / d).mul_scalar(&BigInt::from(d));
        acc = acc.add(&term);
    }
    acc
}

/// Embeds a polynomial in the x block over `small` divisors into the x
/// block of an `nvars`-variable space over `big` divisors.
fn embed_block(poly: &MPoly, small: &[u64], big: &[u64], offset: usize, nvars: usize) -> MPoly {
    let pos: Vec<usize> = small
        .iter()
        .map(|d| big.iter().position(|b| b == d).expect("divisor sets are nested"))
        .collect();
    MPoly::from_terms(
        nvars,
        poly.terms().map(|(exps, c)| {
            let mut out = alloc::vec![0u32; nvars];
            for (i, &e) in exps.iter().enumerate() {
                if e > 0 {
                    out[offset + pos[i]] = e;
                }
            }
            (out, c.clone())
        }),
    )
}

/// Embeds a two-block (x then y) polynomial over `small` divisors into the
/// two-block space over `big` divisors.
fn embed_pair(poly: &MPoly, small: &[u64], big: &[u64]) -> MPoly {
    let ks = small.len();
    let kb = big.len();
    let pos: Vec<usize> = small
        .iter()
        .map(|d| big.iter().position(|b| b == d).expect("divisor sets are nested"))
        .collect();
    MPoly::from_terms(
        2 * kb,
        poly.terms().map(|(exps, c)| {
            let mut out = alloc::vec![0u32; 2 * kb];
            for (i, &e) in exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let target = if i < ks { pos[i] } else { kb + pos[i - ks] };
                out[target] = e;
            }
            (out, c.clone())
        }),
    )
}

/// Restricts a polynomial known to use only the x block down to k
/// variables.
fn project_to_x_block(poly: MPoly, k: usize) -> MPoly {
    MPoly::from_terms(
        k,
        poly.terms().map(|(exps, c)| {
            debug_assert!(exps[k..].iter().all(|&e| e == 0));
            (exps[..k].to_vec(), c.clone())
        }),
    )
}

/// Names the table variables for display: the x block then the y block,
/// indexed by divisor.
pub fn pair_var_names(divs: &[u64]) -> Vec<String> {
    let mut names: Vec<String> = divs.iter().map(|d| format!("x{d}")).collect();
    names.extend(divs.iter().map(|d| format!("y{d}")));
    names
}

/// Names for the single-block (x only) variable space.
pub fn x_var_names(divs: &[u64]) -> Vec<String> {
    divs.iter().map(|d| format!("x{d}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly_str(p: &MPoly, names: &[String]) -> String {
        p.to_string_with(names)
    }

    #[test]
    fn first_sum_and_product_polynomials() {
        let t = UniversalPolyTable::default();
        let e1 = t.arith_entry(1).unwrap();
        assert_eq!(poly_str(&e1.sum, &pair_var_names(&e1.divisors)), "y1 + x1");
        assert_eq!(poly_str(&e1.prod, &pair_var_names(&e1.divisors)), "x1*y1");
        assert_eq!(poly_str(&e1.neg, &x_var_names(&e1.divisors)), "-x1");

        let e2 = t.arith_entry(2).unwrap();
        let names = pair_var_names(&e2.divisors);
        assert_eq!(poly_str(&e2.sum, &names), "y2 + x2 - x1*y1");
        assert_eq!(poly_str(&e2.prod, &names), "2*x2*y2 + x2*y1^2 + x1^2*y2");
        assert_eq!(poly_str(&e2.neg, &x_var_names(&e2.divisors)), "-x2 - x1^2");
    }

    #[test]
    fn frobenius_polynomials_at_two() {
        let t = UniversalPolyTable::default();
        let f21 = t.frob_entry(2, 1).unwrap();
        assert_eq!(poly_str(&f21.poly, &x_var_names(&f21.divisors)), "2*x2 + x1^2");
        let f22 = t.frob_entry(2, 2).unwrap();
        assert_eq!(
            poly_str(&f22.poly, &x_var_names(&f22.divisors)),
            "2*x4 - x2^2 - 2*x1^2*x2"
        );
    }

    #[test]
    fn entries_are_shared() {
        let t = UniversalPolyTable::default();
        let a = t.arith_entry(6).unwrap();
        let b = t.arith_entry(6).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
    }

    #[test]
    fn cap_is_enforced() {
        let t = UniversalPolyTable::new(4);
        assert!(t.arith_entry(4).is_ok());
        assert_eq!(t.arith_entry(5).unwrap_err(), Error::CapExceeded { n: 5, cap: 4 });
        assert_eq!(t.frob_entry(3, 2).unwrap_err(), Error::CapExceeded { n: 6, cap: 4 });
    }

    #[cfg(feature = "std")]
    #[test]
    fn concurrent_initialization_is_consistent() {
        let t = Arc::new(UniversalPolyTable::default());
        let handles: Vec<_> = (0..4)
            .map(|_| {
                let t = t.clone();
                std::thread::spawn(move || t.arith_entry(12).unwrap())
            })
            .collect();
        let entries: Vec<_> = handles.into_iter().map(|h| h.join().unwrap()).collect();
        for e in &entries[1..] {
            assert!(Arc::ptr_eq(&entries[0], e));
        }
    }
}
