//! Rigidity certificates for bar-and-joint frameworks.
//!
//! Two sufficient conditions for the rigidity of a framework whose rigidity
//! matrix has dropped rank are implemented side by side:
//!
//! * **prestress stability**: an equilibrium stress `ω` has nonzero energy
//!   `Σ ω_ij ‖p'_i − p'_j‖²` on the infinitesimal flex `p'`;
//! * **transverse rigidity**: the gradient of `det R(p)` of the pinned, square
//!   rigidity matrix is nonzero along the flex direction.
//!
//! For an isostatic framework with exactly one infinitesimal flex the two
//! conditions coincide, because the cofactor matrix of a nullity-one matrix is
//! the outer product of its left and right kernel vectors. [`certify`] computes
//! both certificates and the proportionality constant between
//! `d[det R]` and `ωᵀ R(p')`, so the agreement can be checked numerically.
//!
//! Module map:
//!
//! * [`framework`]: graphs, configurations, validation, degree-of-freedom counts.
//! * [`matrixlab`]: rigidity matrices, trivial motions, pinning, SVD kernels.
//! * [`certify`]: stress energies, cofactors, determinant gradients, both tests.
//! * [`corpus`]: canonical frameworks and random singular generators.
//! * [`cli`]: the `rigcert` command-line front end and its file formats.

pub mod certify;
pub mod cli;
pub mod corpus;
pub mod error;
pub mod framework;
pub mod matrixlab;

pub use error::{Error, Result};
pub use framework::{Configuration, Dof, DofClass, DofProfile, Edge, Framework, Graph, Violation};
