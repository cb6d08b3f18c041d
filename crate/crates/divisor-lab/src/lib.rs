//! Exact solution counting for systems of (generalized) equations over
//! finite groups and finite rings, together with machine checks of the
//! divisibility bounds those counts provably satisfy, and a seeded search
//! harness probing whether the bounds can be strengthened.
//!
//! The crate is organized around a handful of enumeration-friendly types:
//! Cayley-table groups ([`group::FiniteGroup`]), free-product words and
//! equation systems ([`words`]), exact integer matrices with Smith-form
//! machinery ([`intlinalg`]), finite ring backends ([`ring`]), group actions
//! and crossed homomorphisms ([`crossed`]), and indexed homomorphism sets
//! ([`homs`]). Every verdict operation produces a
//! [`report::DivisibilityReport`] that serializes into the versioned
//! `divisor-lab/1` JSON schema.

pub mod crossed;
pub mod explore;
pub mod group;
pub mod homs;
pub mod intlinalg;
pub mod io;
pub mod report;
pub mod ring;
pub mod solver;
pub mod words;

/// Exact integers used by all matrix arithmetic in this crate. Elimination on
/// exponent-sum matrices overflows machine words (word exponents in the
/// thousands are routine), so the concrete scalar is arbitrary precision.
pub type Int = num_bigint::BigInt;

/// The concrete matrix type the crate computes with.
pub type IntMatrix = intlinalg::Matrix<Int>;

pub use group::{ElementId, FiniteGroup, Subgroup};
pub use report::{Breakdown, DivisibilityReport, REPORT_SCHEMA};
pub use words::{GeneralizedEquation, GeneralizedSystem, Word};
