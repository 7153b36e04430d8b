//! Exact arithmetic for big Witt vectors over truncation sets.
//!
//! The crate provides truncation sets, a small family of exactly represented
//! coefficient rings, Witt vector arithmetic with both a ghost-coordinate fast
//! path and a universal-polynomial path, the V-basis description of the Witt
//! vectors of the integers, idempotent decompositions after localization at a
//! prime, materialized Witt rings of finite rings with ideal enumeration, and
//! a category of free modules with semilinear Frobenius data.
//!
//! IO, JSON encodings, and the command line front end live in the companion
//! `witt-cli` crate; this crate is `no_std`-compatible (with `alloc`).

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod epsilon;
pub mod error;
pub mod finite;
pub mod phimod;
pub mod rings;
pub mod truncation;
pub mod witt;
pub mod zbasis;

pub use error::{Error, Result};
pub use phimod::{PhiMorphism, PhiObject};
pub use rings::{RingDescriptor, RingValue};
pub use truncation::TruncationSet;
pub use witt::{ArithMode, GhostVector, WittContext, WittVector};
