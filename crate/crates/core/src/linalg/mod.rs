//! Dense and sparse exact linear algebra.

mod matrix;
mod sparse;
mod subspace;

pub use matrix::{Matrix, Vector};
pub use sparse::{axpy, sparse_rank, SparseAcc, SparseMatrix, SparseVec};
pub use subspace::{all_subspaces, combinations, count_subspaces, unit, Subspace};
