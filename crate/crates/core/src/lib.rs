//! Digraph (incidence) algebras, their associative and Lie ideals, and exact
//! checks that Lie ideals are exactly the similarity-invariant subspaces.

// Errors carry witnesses and live on cold paths.
#![allow(clippy::result_large_err)]

pub mod algebra;
pub mod corpus;
pub mod exact;
pub mod ideals;
pub mod lie;
pub mod nest;
pub mod oracle;
pub mod random;
pub mod similarity;
pub mod suite;
pub mod tower;

pub use algebra::{BlockStructure, DigraphAlgebra, Pattern, PatternError};
pub use exact::{Mat, Rational, Subspace};
