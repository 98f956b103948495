//! Weighted pairing least-squares (WPLS) solvers.
//!
//! A WPLS problem pairs every row of a data matrix `X` with every row of a
//! target matrix `Y` through a rectangular non-negative weight matrix `W`,
//! and asks for the coefficient matrix minimizing the weighted sum of squared
//! row differences. This crate reduces such problems to ordinary weighted
//! least squares and solves them two ways:
//!
//! * [`solver::solve_123`] — a {1,2,3}-inverse route built on a generalized
//!   Cholesky factorization and a generalized backward substitution; fast and
//!   numerically stable, valid for rank-deficient systems.
//! * [`solver::solve_dagger`] — a fast Moore-Penrose route through the
//!   compacted factor; yields the minimum-norm solution but amplifies
//!   ill-conditioning.
//!
//! Supporting modules provide the dense [`matrix::Matrix`] type, the
//! factorizations and generalized inverses, a slow accurate Jacobi SVD used
//! as an oracle, a synthetic problem generator with controlled rank and
//! conditioning, and Matrix Market file I/O.
//!
//! Everything numerical is generic over the [`scalar::Scalar`] floating-point
//! type; the aliases below fix the common concrete choices.

// indexed loops over ranges are the clearest way to write the dense kernels
#![allow(clippy::needless_range_loop)]

pub mod cholesky;
pub mod error;
pub mod generator;
pub mod inverse;
pub mod io;
pub mod matrix;
pub mod penrose;
pub mod rng;
pub mod scalar;
pub mod solver;
pub mod svd;

pub use error::LinalgError;
pub use matrix::Matrix;
pub use scalar::Scalar;

/// Single-precision dense matrix.
pub type Matrix32 = Matrix<f32>;
/// Double-precision dense matrix.
pub type Matrix64 = Matrix<f64>;
/// Double-precision WPLS problem.
pub type WplsProblem64 = solver::WplsProblem<f64>;
/// Double-precision solve report.
pub type SolveReport64 = solver::SolveReport<f64>;
