//! Exact linear algebra over the rationals: scalars, dense matrices, and
//! canonical subspaces.

mod matrix;
mod rational;
mod subspace;

pub use matrix::{nullspace, rank, rref, Mat};
pub use rational::{q, ParseRationalError, Rational};
pub use subspace::Subspace;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("shape mismatch: {left:?} vs {right:?}")]
    ShapeMismatch { left: (usize, usize), right: (usize, usize) },
}
