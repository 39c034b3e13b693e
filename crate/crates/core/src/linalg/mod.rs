//! Exact integer linear algebra: Smith and Hermite normal forms, integer
//! kernels and cokernel presentations.

mod coeff;
mod coker;
mod kernel;
mod matrix;
mod smith;
mod sparse;

pub use coeff::Coeff;
pub use coker::{cokernel, cokernel_sparse, CokerPresentation, QuotientLattice};
pub(crate) use coker::{bigint_strings, sparse_columns};
pub use kernel::{hermite_normal_form, in_lattice, is_unimodular, kernel_basis};
pub use matrix::{IntMatrix, MatrixJson, SparseIntMatrix};
pub use smith::{smith_normal_form, smith_normal_form_with, SmithForm, SnfOptions};
pub use sparse::SparseVec;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("shape mismatch: {left:?} times {right:?}")]
    Shape {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("matrix is {0}x{1}, not square")]
    NotSquare(usize, usize),
    #[error("entry of {bits} bits exceeds the configured cap of {cap} bits")]
    ResourceLimit { bits: u64, cap: u64 },
    #[error("malformed matrix: {0}")]
    Parse(String),
}
