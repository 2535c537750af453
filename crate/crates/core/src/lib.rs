//! Exact K-theory weight tables, Euler characteristics and L-function
//! factorizations for schemes with cellular decompositions over rings of
//! integers of number fields and over finite fields.
//!
//! The two sides of the identity `chi(X, k) = ord_{s=k} L(X, s)` are built
//! from the same [`cells::CellDecomposition`] through separate code paths:
//! [`kweights`] sums shifted Borel weight tables, [`lfun`] sums shifted
//! zeta orders read off the functional equation. [`verify`] compares them.

pub mod arith;
pub mod cells;
pub mod exec;
pub mod fields;
pub mod kweights;
pub mod lfun;
pub mod verify;

mod serde_util;

pub use arith::{Rational, TruncSeries};
pub use cells::{CellDecomposition, SchemeExpr};
pub use exec::Execution;
pub use fields::{Base, FiniteField, NumberField};
