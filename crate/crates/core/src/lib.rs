//! Permanents of block-factorized matrices.
//!
//! The permanent of an N×N matrix is #P-hard in general, but a matrix given
//! as a product A = F_1 F_2 ⋯ F_L of block-diagonal factors (blocks at most
//! 2×2, on adjacent index pairs) admits an algorithm linear in N for fixed L.
//! The permanent equals the coefficient of X_1⋯X_N in the polynomial obtained
//! by substituting X_i ↦ Σ_j A_{ij} X_j into X_1⋯X_N; each factor acts on
//! that polynomial locally, so the whole computation compiles into a layered
//! circuit of one- and two-site gates contracted against a matrix product
//! state.
//!
//! Module map:
//! - [`factor`]: block-diagonal factors, validation, reconstruction.
//! - [`gates`]: the local gate tensors a factor's blocks induce.
//! - [`mps`]: site tensors, SVD splitting, gate application, readout.
//! - [`engine`]: the layer scheduler tying gates and state together.
//! - [`oracle`]: brute-force permanents (naive, Ryser, tridiagonal) used to
//!   cross-check everything else.
//! - [`factorize`]: random instances, bandwidth reordering, and elementary
//!   decomposition of small dense matrices.
//! - [`scalar`]: decimal-scaled complex arithmetic so huge permanents don't
//!   overflow.
//! - [`io`]: the JSON file formats.

pub mod engine;
pub mod error;
pub mod factor;
pub mod factorize;
pub mod gates;
pub mod io;
pub mod matrix;
pub mod mps;
pub mod oracle;
pub mod scalar;

pub use engine::{compute_permanent, compute_permanent_dense_reference, degree_schedule, RunStats};
pub use error::{Error, Result};
pub use factor::{
    reconstruct, validate_factorization, Block, BlockDiagonalFactor, BlockFactorization,
};
pub use factorize::{decompose_dense_block, generate_random_factorization, rcm_permutation};
pub use matrix::DenseMatrix;
pub use oracle::{permanent_naive, permanent_ryser, permanent_tridiagonal};
pub use scalar::ScaledComplex;
