//! Error type shared across the library.

use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Everything that can go wrong in this crate.
///
/// Domain errors (bad input, unsupported ring, non-integral ghost vector)
/// are recoverable and carry enough data to report a witness. `Internal`
/// signals a broken library invariant and is never expected to surface.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Error {
    /// A set of indices contains `witness` but not its divisor `missing`.
    NotDivisorClosed { witness: u64, missing: u64 },
    /// An index that must be a positive integer was not.
    InvalidIndex { index: u64 },
    /// A parameter that must be prime was not.
    NotPrime { value: u64 },
    /// Two values from different rings met in one operation.
    DescriptorMismatch { expected: String, found: String },
    /// Exact division failed in a torsion-free ring.
    NotDivisible { divisor: i64 },
    /// The requested operation is not defined for this ring.
    InvalidRing { reason: String },
    /// Enumeration was requested for an infinite ring.
    NotFinite,
    /// A ghost vector is not the ghost of any Witt vector; the first
    /// offending index is reported.
    NotGhostIntegral { index: u64 },
    /// Operands disagree in truncation set, length, or dimensions.
    ShapeMismatch { reason: String },
    /// The target of a restriction is not contained in the source set.
    NotSubset,
    /// `n` and `p` were required to be coprime.
    NotCoprime { n: u64, p: u64 },
    /// The coefficient ring does not admit the requested localization.
    WrongRing { reason: String },
    /// An enumeration would exceed the configured cardinality cap.
    TooLarge { size: u128, cap: u128 },
    /// A computed index falls outside the truncation set.
    IndexOutsideS { index: u64 },
    /// A universal polynomial beyond the configured index cap was requested.
    CapExceeded { n: u64, cap: u64 },
    /// Module-category operands live over different ambient sets or rings.
    AmbientMismatch { reason: String },
    /// Direct sums require operands with equal twist tags.
    TwistMismatch { left: i64, right: i64 },
    /// A library invariant failed; this is a bug, not a user error.
    Internal { detail: String },
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotDivisorClosed { .. } => "NotDivisorClosed",
            Error::InvalidIndex { .. } => "InvalidIndex",
            Error::NotPrime { .. } => "NotPrime",
            Error::DescriptorMismatch { .. } => "DescriptorMismatch",
            Error::NotDivisible { .. } => "NotDivisible",
            Error::InvalidRing { .. } => "InvalidRing",
            Error::NotFinite => "NotFinite",
            Error::NotGhostIntegral { .. } => "NotGhostIntegral",
            Error::ShapeMismatch { .. } => "ShapeMismatch",
            Error::NotSubset => "NotSubset",
            Error::NotCoprime { .. } => "NotCoprime",
            Error::WrongRing { .. } => "WrongRing",
            Error::TooLarge { .. } => "TooLarge",
            Error::IndexOutsideS { .. } => "IndexOutsideS",
            Error::CapExceeded { .. } => "CapExceeded",
            Error::AmbientMismatch { .. } => "AmbientMismatch",
            Error::TwistMismatch { .. } => "TwistMismatch",
            Error::Internal { .. } => "Internal",
        }
    }

    /// True for failures that indicate a bug in this crate rather than a
    /// rejected input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Internal { .. })
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotDivisorClosed { witness, missing } => write!(
                f,
                "set is not divisor-closed: contains {witness} but not its divisor {missing}"
            ),
            Error::InvalidIndex { index } => {
                write!(f, "index {index} is not a positive integer in range")
            }
            Error::NotPrime { value } => write!(f, "{value} is not prime"),
            Error::DescriptorMismatch { expected, found } => {
                write!(f, "ring mismatch: expected a value of {expected}, found {found}")
            }
            Error::NotDivisible { divisor } => {
                write!(f, "exact division by {divisor} failed")
            }
            Error::InvalidRing { reason } => write!(f, "unsupported ring: {reason}"),
            Error::NotFinite => write!(f, "ring is not finite"),
            Error::NotGhostIntegral { index } => {
                write!(f, "ghost vector is not integral at index {index}")
            }
            Error::ShapeMismatch { reason } => write!(f, "shape mismatch: {reason}"),
            Error::NotSubset => write!(f, "target set is not a subset of the source set"),
            Error::NotCoprime { n, p } => write!(f, "{n} is not coprime to {p}"),
            Error::WrongRing { reason } => write!(f, "wrong coefficient ring: {reason}"),
            Error::TooLarge { size, cap } => {
                write!(f, "enumeration of size {size} exceeds the cap {cap}")
            }
            Error::IndexOutsideS { index } => {
                write!(f, "index {index} falls outside the truncation set")
            }
            Error::CapExceeded { n, cap } => write!(
                f,
                "universal polynomial index {n} exceeds the cap {cap} (raise WITT_MAX_N)"
            ),
            Error::AmbientMismatch { reason } => write!(f, "ambient mismatch: {reason}"),
            Error::TwistMismatch { left, right } => {
                write!(f, "twist tags differ: {left} vs {right}")
            }
            Error::Internal { detail } => write!(f, "internal invariant violated: {detail}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
