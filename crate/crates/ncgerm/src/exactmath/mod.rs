//! Exact linear algebra over the rationals: the substrate for every other
//! module. Ranks, kernels, solves and inverses are all fraction-exact with
//! deterministic pivoting; there is no floating point in this crate.

mod mat;
mod scalar;

pub use mat::{matrix_inverse, rank, solve_linear, Mat, MatError, MatTuple, SolveOutcome};
pub use scalar::{ParseScalarError, Scalar};
