//! Clifford algebra, Ahlfors-Vahlen groups and automorphic series on the
//! upper half-space `H⁺(R^n)`.
//!
//! The layers build on each other:
//!
//! - [`clifford`]: dense and exact multivectors.
//! - [`vahlen`]: Vahlen matrices, Möbius action, automorphy factors.
//! - [`modular`]: the groups `Γ_p`, `Γ_p[N]` and their coset tables.
//! - [`eisenstein`]: truncated Eisenstein, Hecke and Poincaré series.
//! - [`kernels`]: fundamental solutions and their automorphized sums.
//! - [`operators`]: finite-difference operators and quadrature formulas.
//! - [`verify`]: residual suites.

// `!(x > 0.0)` guards reject NaN along with non-positive values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod clifford;
pub mod eisenstein;
pub mod error;
pub mod kernels;
pub mod modular;
pub mod operators;
pub mod special;
pub mod summation;
pub mod vahlen;
pub mod verify;

pub use clifford::{geometric_product, vector_inverse, ExactMultivector, Multivector, VectorPoint};
pub use error::{Error, Result};
pub use modular::{CosetTable, EnumerationBound, GroupElement, GroupParams};
pub use vahlen::{IsometricSphere, MobiusClass, VahlenMatrix, WeightKind};
