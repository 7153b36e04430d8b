//! Dense matrices over a Witt ring, with the exact linear algebra the
//! module category needs: semilinear images, Kronecker products, and
//! invertibility decided over ghost space.

use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rings::{RingDescriptor, RingValue};
use crate::truncation::TruncationSet;
use crate::witt::{from_ghost, ghost, GhostVector, WittContext, WittVector};

/// A rows-by-cols matrix with entries in one Witt ring, stored row major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WittMatrix {
    s: TruncationSet,
    ring: RingDescriptor,
    rows: usize,
    cols: usize,
    entries: Vec<WittVector>,
}

/// Outcome of an exact inversion attempt over the Witt ring.
#[derive(Clone, Debug)]
pub enum Inverse {
    Invertible(WittMatrix),
    /// The ghost-component matrix at this index is singular, so there is no
    /// inverse even after inverting all integers.
    Singular { index: u64 },
    /// Invertible over the fraction field, but the inverse does not have
    /// entries in the Witt ring.
    NotIntegral { detail: alloc::string::String },
}

impl Inverse {
    pub fn invertible(&self) -> bool {
        matches!(self, Inverse::Invertible(_))
    }

    pub fn into_matrix(self) -> Option<WittMatrix> {
        match self {
            Inverse::Invertible(m) => Some(m),
            _ => None,
        }
    }
}

impl WittMatrix {
    pub fn new(
        s: TruncationSet,
        ring: RingDescriptor,
        rows: usize,
        cols: usize,
        entries: Vec<WittVector>,
    ) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::ShapeMismatch {
                reason: format!("{} entries for a {rows}x{cols} matrix", entries.len()),
            });
        }
        for e in &entries {
            if *e.set() != s {
                return Err(Error::ShapeMismatch {
                    reason: format!("entry over {} in a matrix over {s}", e.set()),
                });
            }
            if e.ring() != &ring {
                return Err(Error::DescriptorMismatch {
                    expected: ring.name(),
                    found: e.ring().name(),
                });
            }
        }
        Ok(WittMatrix { s, ring, rows, cols, entries })
    }

    pub fn zero(s: TruncationSet, ring: RingDescriptor, rows: usize, cols: usize) -> Self {
        let entries = (0..rows * cols).map(|_| WittVector::zero(s.clone(), ring.clone())).collect();
        WittMatrix { s, ring, rows, cols, entries }
    }

    pub fn identity(s: TruncationSet, ring: RingDescriptor, size: usize) -> Self {
        let mut m = WittMatrix::zero(s.clone(), ring.clone(), size, size);
        for i in 0..size {
            m.entries[i * size + i] = WittVector::one(s.clone(), ring.clone());
        }
        m
    }

    /// A scalar integer matrix k * identity.
    pub fn integer_scalar(
        ctx: &WittContext,
        s: &TruncationSet,
        ring: &RingDescriptor,
        size: usize,
        k: i64,
    ) -> Result<Self> {
        let v = ctx.integer(s, ring, k)?;
        let mut m = WittMatrix::zero(s.clone(), ring.clone(), size, size);
        for i in 0..size {
            m.entries[i * size + i] = v.clone();
        }
        Ok(m)
    }

    pub fn set(&self) -> &TruncationSet {
        &self.s
    }

    pub fn ring(&self) -> &RingDescriptor {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> &WittVector {
        &self.entries[i * self.cols + j]
    }

    pub fn set_entry(&mut self, i: usize, j: usize, v: WittVector) -> Result<()> {
        if *v.set() != self.s || v.ring() != &self.ring {
            return Err(Error::ShapeMismatch {
                reason: format!("entry shape does not match matrix over {}", self.s),
            });
        }
        self.entries[i * self.cols + j] = v;
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(WittVector::is_zero)
    }

    fn same_shape(&self, other: &WittMatrix) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols || self.s != other.s {
            return Err(Error::ShapeMismatch {
                reason: format!(
                    "{}x{} over {} vs {}x{} over {}",
                    self.rows, self.cols, self.s, other.rows, other.cols, other.s
                ),
            });
        }
        Ok(())
    }

    pub fn add(&self, ctx: &WittContext, other: &WittMatrix) -> Result<WittMatrix> {
        self.same_shape(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| ctx.add(a, b))
            .collect::<Result<Vec<_>>>()?;
        Ok(WittMatrix { s: self.s.clone(), ring: self.ring.clone(), rows: self.rows, cols: self.cols, entries })
    }

    pub fn sub(&self, ctx: &WittContext, other: &WittMatrix) -> Result<WittMatrix> {
        self.same_shape(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| ctx.sub(a, b))
            .collect::<Result<Vec<_>>>()?;
        Ok(WittMatrix { s: self.s.clone(), ring: self.ring.clone(), rows: self.rows, cols: self.cols, entries })
    }

    pub fn matmul(&self, ctx: &WittContext, other: &WittMatrix) -> Result<WittMatrix> {
        if self.cols != other.rows || self.s != other.s {
            return Err(Error::ShapeMismatch {
                reason: format!(
                    "cannot multiply {}x{} over {} by {}x{} over {}",
                    self.rows, self.cols, self.s, other.rows, other.cols, other.s
                ),
            });
        }
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = WittVector::zero(self.s.clone(), self.ring.clone());
                for k in 0..self.cols {
                    acc = ctx.add(&acc, &ctx.mul(self.entry(i, k), other.entry(k, j))?)?;
                }
                entries.push(acc);
            }
        }
        Ok(WittMatrix { s: self.s.clone(), ring: self.ring.clone(), rows: self.rows, cols: other.cols, entries })
    }

    /// Multiplies every entry by a scalar from the same Witt ring.
    pub fn scale(&self, ctx: &WittContext, scalar: &WittVector) -> Result<WittMatrix> {
        let entries = self
            .entries
            .iter()
            .map(|e| ctx.mul(e, scalar))
            .collect::<Result<Vec<_>>>()?;
        Ok(WittMatrix { s: self.s.clone(), ring: self.ring.clone(), rows: self.rows, cols: self.cols, entries })
    }

    pub fn mul_int(&self, ctx: &WittContext, k: i64) -> Result<WittMatrix> {
        let entries = self
            .entries
            .iter()
            .map(|e| ctx.mul_int(e, k))
            .collect::<Result<Vec<_>>>()?;
        Ok(WittMatrix { s: self.s.clone(), ring: self.ring.clone(), rows: self.rows, cols: self.cols, entries })
    }

    /// Entrywise exact division by an integer; fails with `NotDivisible`
    /// when some entry is not an additive multiple.
    pub fn div_int(&self, ctx: &WittContext, k: i64) -> Result<WittMatrix> {
        let entries = self
            .entries
            .iter()
            .map(|e| ctx.div_int(e, k))
            .collect::<Result<Vec<_>>>()?;
        Ok(WittMatrix { s: self.s.clone(), ring: self.ring.clone(), rows: self.rows, cols: self.cols, entries })
    }

    /// Entrywise Frobenius image, landing over S/n.
    pub fn frobenius(&self, ctx: &WittContext, n: u64) -> Result<WittMatrix> {
        let t = self.s.quotient(n);
        let entries = self
            .entries
            .iter()
            .map(|e| ctx.frobenius(n, e))
            .collect::<Result<Vec<_>>>()?;
        Ok(WittMatrix { s: t, ring: self.ring.clone(), rows: self.rows, cols: self.cols, entries })
    }

    /// Entrywise coordinate restriction to a truncation subset.
    pub fn restrict(&self, t: &TruncationSet) -> Result<WittMatrix> {
        let entries = self
            .entries
            .iter()
            .map(|e| e.restrict(t))
            .collect::<Result<Vec<_>>>()?;
        Ok(WittMatrix { s: t.clone(), ring: self.ring.clone(), rows: self.rows, cols: self.cols, entries })
    }

    pub fn transpose(&self) -> WittMatrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.entry(i, j).clone());
            }
        }
        WittMatrix { s: self.s.clone(), ring: self.ring.clone(), rows: self.cols, cols: self.rows, entries }
    }

    /// Kronecker product: block (i,j) of the result is entry(i,j) * other.
    pub fn kron(&self, ctx: &WittContext, other: &WittMatrix) -> Result<WittMatrix> {
        if self.s != other.s {
            return Err(Error::ShapeMismatch {
                reason: format!("Kronecker factors over {} and {}", self.s, other.s),
            });
        }
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..self.rows {
            for k in 0..other.rows {
                for j in 0..self.cols {
                    for l in 0..other.cols {
                        entries.push(ctx.mul(self.entry(i, j), other.entry(k, l))?);
                    }
                }
            }
        }
        Ok(WittMatrix { s: self.s.clone(), ring: self.ring.clone(), rows, cols, entries })
    }

    /// Block-diagonal direct sum.
    pub fn block_diag(&self, other: &WittMatrix) -> Result<WittMatrix> {
        if self.s != other.s {
            return Err(Error::ShapeMismatch {
                reason: format!("direct summands over {} and {}", self.s, other.s),
            });
        }
        let rows = self.rows + other.rows;
        let cols = self.cols + other.cols;
        let mut m = WittMatrix::zero(self.s.clone(), self.ring.clone(), rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.entries[i * cols + j] = self.entry(i, j).clone();
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                m.entries[(self.rows + i) * cols + (self.cols + j)] = other.entry(i, j).clone();
            }
        }
        Ok(m)
    }

    /// Decides invertibility over the Witt ring exactly: invert each ghost
    /// component matrix over the rationals, then check that the combined
    /// inverse has coordinates back in the ring.
    pub fn invert(&self) -> Result<Inverse> {
        if self.rows != self.cols {
            return Err(Error::ShapeMismatch {
                reason: format!("inverting a {}x{} matrix", self.rows, self.cols),
            });
        }
        let n = self.rows;
        let ghosts: Vec<GhostVector> = self
            .entries
            .iter()
            .map(ghost)
            .collect::<Result<Vec<_>>>()?;

        let mut inverse_ghosts: Vec<Vec<BigRational>> = Vec::new();
        for _ in 0..n * n {
            inverse_ghosts.push(Vec::with_capacity(self.s.len()));
        }
        for m in self.s.iter() {
            let mut numeric = Vec::with_capacity(n);
            for i in 0..n {
                let mut row = Vec::with_capacity(n);
                for j in 0..n {
                    let comp = ghosts[i * n + j].component(m).expect("index in set");
                    row.push(value_to_rational(comp)?);
                }
                numeric.push(row);
            }
            match invert_rational(numeric) {
                Some(inv) => {
                    for i in 0..n {
                        for j in 0..n {
                            inverse_ghosts[i * n + j].push(inv[i][j].clone());
                        }
                    }
                }
                None => return Ok(Inverse::Singular { index: m }),
            }
        }

        let mut entries = Vec::with_capacity(n * n);
        for (idx, comps) in inverse_ghosts.into_iter().enumerate() {
            let mut values = Vec::with_capacity(comps.len());
            for c in comps {
                match rational_to_value(&self.ring, &c) {
                    Some(v) => values.push(v),
                    None => {
                        return Ok(Inverse::NotIntegral {
                            detail: format!(
                                "ghost component {c} of inverse entry {} lies outside {}",
                                idx,
                                self.ring.name()
                            ),
                        })
                    }
                }
            }
            let g = GhostVector::new(self.s.clone(), self.ring.clone(), values)?;
            match from_ghost(&g) {
                Ok(w) => entries.push(w),
                Err(Error::NotGhostIntegral { index }) => {
                    return Ok(Inverse::NotIntegral {
                        detail: format!("inverse entry {idx} has a non-integral coordinate at {index}"),
                    })
                }
                Err(other) => return Err(other),
            }
        }
        Ok(Inverse::Invertible(WittMatrix {
            s: self.s.clone(),
            ring: self.ring.clone(),
            rows: n,
            cols: n,
            entries,
        }))
    }
}

impl core::fmt::Display for WittMatrix {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.entry(i, j))?;
            }
        }
        write!(f, "]")
    }
}

/// The entry as an exact rational, for rings embedded in the rationals.
pub(crate) fn value_to_rational(v: &RingValue) -> Result<BigRational> {
    match v {
        RingValue::Int(x) => Ok(BigRational::from_integer(x.clone())),
        RingValue::Rat(x) => Ok(x.clone()),
        other => Err(Error::InvalidRing {
            reason: format!("{:?} does not embed in the rationals", other),
        }),
    }
}

/// Reads a rational back into the ring, when it lies there.
pub(crate) fn rational_to_value(ring: &RingDescriptor, r: &BigRational) -> Option<RingValue> {
    match ring {
        RingDescriptor::Integers => {
            if r.denom().abs().is_one() {
                Some(RingValue::Int(r.numer().clone() / r.denom().clone()))
            } else {
                None
            }
        }
        RingDescriptor::Rationals => Some(RingValue::Rat(r.clone())),
        RingDescriptor::LocalIntegersAtP(p) => {
            let p = BigInt::from(*p);
            if (r.denom() % &p).is_zero() {
                None
            } else {
                Some(RingValue::Rat(r.clone()))
            }
        }
        _ => None,
    }
}

/// Gauss-Jordan inversion over the rationals; `None` when singular.
fn invert_rational(mut a: Vec<Vec<BigRational>>) -> Option<Vec<Vec<BigRational>>> {
    let n = a.len();
    let mut inv: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let scale = a[col][col].recip();
        for j in 0..n {
            a[col][j] *= &scale;
            inv[col][j] *= &scale;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for j in 0..n {
                let t = &factor * &a[col][j];
                a[r][j] -= t;
                let t = &factor * &inv[col][j];
                inv[r][j] -= t;
            }
        }
    }
    Some(inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn z() -> RingDescriptor {
        RingDescriptor::integers()
    }

    fn ts(raw: &[u64]) -> TruncationSet {
        TruncationSet::new(raw.iter().copied()).unwrap()
    }

    fn wv(s: &TruncationSet, coords: &[i64]) -> WittVector {
        WittVector::from_i64_coords(s.clone(), z(), coords).unwrap()
    }

    #[test]
    fn identity_inverts_to_itself() {
        let m = WittMatrix::identity(ts(&[1, 2]), z(), 2);
        let inv = m.invert().unwrap().into_matrix().unwrap();
        assert_eq!(inv, m);
    }

    #[test]
    fn unimodular_inverse_is_integral() {
        let ctx = WittContext::new();
        let s = ts(&[1, 2]);
        // [[1, [1]+[1]], [0, 1]] has an inverse with the negated corner.
        let two = ctx.add(&WittVector::one(s.clone(), z()), &WittVector::one(s.clone(), z())).unwrap();
        let m = WittMatrix::new(
            s.clone(),
            z(),
            2,
            2,
            vec![
                WittVector::one(s.clone(), z()),
                two.clone(),
                WittVector::zero(s.clone(), z()),
                WittVector::one(s.clone(), z()),
            ],
        )
        .unwrap();
        let inv = m.invert().unwrap().into_matrix().unwrap();
        assert_eq!(m.matmul(&ctx, &inv).unwrap(), WittMatrix::identity(s.clone(), z(), 2));
        assert_eq!(inv.matmul(&ctx, &m).unwrap(), WittMatrix::identity(s, z(), 2));
    }

    #[test]
    fn scalar_two_is_not_invertible_over_the_integers() {
        let ctx = WittContext::new();
        let s = ts(&[1, 2]);
        let m = WittMatrix::integer_scalar(&ctx, &s, &z(), 1, 2).unwrap();
        assert!(matches!(m.invert().unwrap(), Inverse::NotIntegral { .. }));
    }

    #[test]
    fn verschiebung_scalar_is_singular() {
        let s = ts(&[1, 2]);
        let v2 = crate::witt::verschiebung(2, &WittVector::one(s.quotient(2), z()), &s).unwrap();
        let m = WittMatrix::new(s.clone(), z(), 1, 1, vec![v2]).unwrap();
        assert!(matches!(m.invert().unwrap(), Inverse::Singular { index: 1 }));
    }

    #[test]
    fn kron_and_transpose_shapes() {
        let ctx = WittContext::new();
        let s = ts(&[1]);
        let a = WittMatrix::new(s.clone(), z(), 1, 2, vec![wv(&s, &[1]), wv(&s, &[2])]).unwrap();
        let b = WittMatrix::new(s.clone(), z(), 2, 1, vec![wv(&s, &[3]), wv(&s, &[4])]).unwrap();
        let k = a.kron(&ctx, &b).unwrap();
        assert_eq!((k.rows(), k.cols()), (2, 2));
        assert_eq!(k.entry(0, 0), &wv(&s, &[3]));
        assert_eq!(k.entry(1, 1), &wv(&s, &[8]));
        assert_eq!(a.transpose().entry(1, 0), &wv(&s, &[2]));
    }

    #[test]
    fn block_diag_layout() {
        let s = ts(&[1]);
        let a = WittMatrix::identity(s.clone(), z(), 1);
        let b = WittMatrix::new(s.clone(), z(), 1, 1, vec![wv(&s, &[5])]).unwrap();
        let d = a.block_diag(&b).unwrap();
        assert_eq!(d.entry(0, 0), &wv(&s, &[1]));
        assert_eq!(d.entry(1, 1), &wv(&s, &[5]));
        assert!(d.entry(0, 1).is_zero());
        assert!(d.entry(1, 0).is_zero());
    }

    #[test]
    fn rational_matrices_invert_when_nonsingular() {
        let q = RingDescriptor::rationals();
        let s = ts(&[1, 2]);
        let ctx = WittContext::new();
        let two = ctx
            .add(&WittVector::one(s.clone(), q.clone()), &WittVector::one(s.clone(), q.clone()))
            .unwrap();
        let m = WittMatrix::new(s.clone(), q.clone(), 1, 1, vec![two]).unwrap();
        let inv = m.invert().unwrap().into_matrix().unwrap();
        assert_eq!(m.matmul(&ctx, &inv).unwrap(), WittMatrix::identity(s, q, 1));
    }
}
