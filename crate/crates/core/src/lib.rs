//! Proper relation algebras for relevance logic.
//!
//! The crate covers integer interval sets, finite atomic relation
//! algebras, the symbolic family of sequence algebras with its Sugihara
//! chains, the named finite models, a formula layer with matrix validity
//! checking, the axiom-to-relational-property equivalences, and export to
//! Routley–Meyer model structures.

mod error;
pub mod intervals;
pub mod ra_core;
pub mod logic;
pub mod models;
pub mod properties;
pub mod rm_export;
pub mod sugihara;

pub use error::{Error, Result};
pub use intervals::{Bound, IntervalSet};
pub use ra_core::{AtomStructure, ConcreteRelation, RaElement, Relation};
pub use sugihara::{Atom, IndexSet, Scalar, Sequence, SymElement};

/// Sequences with exact arbitrary-precision rational entries.
pub type RationalSeq = Sequence<num_rational::BigRational>;
/// Sequences with machine-word rational entries; overflow panics.
pub type Rational64Seq = Sequence<num_rational::Rational64>;
/// Sequences with floating-point entries; witnesses may fail near ties.
pub type FloatSeq = Sequence<f64>;
