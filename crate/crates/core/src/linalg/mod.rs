//! Exact integer linear algebra.

mod dense;
mod sparse;

pub use dense::{column_hnf, cokernel_invariants, integer_kernel, smith_normal_form, Cokernel, IntegerMatrix, SmithForm};
pub use sparse::{Elimination, SparseMatrix};
