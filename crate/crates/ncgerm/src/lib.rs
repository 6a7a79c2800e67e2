//! Exact-arithmetic computer algebra for the local theory of free
//! noncommutative functions.
//!
//! The crate computes matrix jets (higher nc differential operators) at
//! matrix points, verifies lost-abbey conditions, interpolates jets at
//! separated semisimple points by nc polynomials, runs the minimal
//! propagation construction (producing, among other things, nilpotent nc
//! germs), and tests meromorphic identities and inner ranks by matrix
//! evaluations. Everything is computed over the rationals with
//! arbitrary-precision integers; there is no floating point and no rounding
//! anywhere.
//!
//! Module map:
//! - [`exactmath`]: scalars, matrices, exact elimination kernels;
//! - [`freealg`]: nc polynomials and truncated series, transductions,
//!   alternating polynomials;
//! - [`jet`]: evaluation, block-bidiagonal differentials, germ arithmetic,
//!   ampliation;
//! - [`structure`]: generated algebra, centralizer, semisimplicity, and the
//!   bimodule projection/splitting machinery;
//! - [`lac`]: verification of (truncated) lost-abbey conditions and
//!   admissibility;
//! - [`hermite`]: free Hermite interpolation and vanishing-ideal slices;
//! - [`propagate`]: minimal propagation, algebra embeddings into germs,
//!   growth tables, the separated-point non-injectivity example;
//! - [`mero`]: formal meromorphic expressions, identity testing, inner-rank
//!   estimation.

pub mod exactmath;
pub mod freealg;
pub mod guard;
pub mod hermite;
pub mod jet;
pub mod lac;
pub mod mero;
pub mod propagate;
pub mod structure;

pub use exactmath::{Mat, MatTuple, Scalar};
pub use freealg::{NcPoly, NcSeries, Word};
pub use jet::{Jet, MultiMap};
