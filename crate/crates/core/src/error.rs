//! Error type shared by all numerical routines.

use std::fmt;

/// Errors reported by matrix construction, factorizations, inverses, the
/// solvers, and the problem generator.
#[derive(Debug, Clone, PartialEq)]
pub enum LinalgError {
    /// Operand shapes are incompatible for the named operation.
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    /// Flat data length does not match `rows * cols`.
    InvalidLength { expected: usize, got: usize },
    /// A NaN or infinity was found at the given entry.
    NonFinite { row: usize, col: usize },
    /// A square matrix was required.
    NotSquare { rows: usize, cols: usize },
    /// Symmetry check failed at the given entry pair.
    NotSymmetric { row: usize, col: usize },
    /// A pivot fell below the negative tolerance: the input is not positive
    /// semi-definite.
    NotPositiveSemiDefinite { index: usize, pivot: f64 },
    /// Classical Cholesky hit a non-positive pivot.
    NotPositiveDefinite { index: usize },
    /// Triangular inversion requires strictly positive diagonal entries.
    ZeroDiagonal { index: usize },
    /// The factor has rank zero, so there are no rows to keep.
    RankZero,
    /// Jacobi sweeps did not converge within the iteration cap.
    SvdNoConvergence { sweeps: usize },
    /// Pairing weights must be non-negative.
    NegativeWeight { row: usize, col: usize },
    /// A Householder reflection needs a nonzero vector.
    ZeroVector,
    /// Problem-generator parameters violate their constraints.
    InvalidParams { reason: String },
    /// The randomized factorization loop exhausted its attempt budget.
    GenerationFailed { attempts: usize },
}

impl fmt::Display for LinalgError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinalgError::DimensionMismatch { op, left, right } => write!(
                f,
                "{op}: incompatible shapes {}x{} and {}x{}",
                left.0, left.1, right.0, right.1
            ),
            LinalgError::InvalidLength { expected, got } => {
                write!(f, "data length mismatch: expected {expected}, got {got}")
            }
            LinalgError::NonFinite { row, col } => {
                write!(f, "non-finite value at ({row}, {col})")
            }
            LinalgError::NotSquare { rows, cols } => {
                write!(f, "matrix must be square, got {rows}x{cols}")
            }
            LinalgError::NotSymmetric { row, col } => {
                write!(f, "matrix is not symmetric at ({row}, {col})")
            }
            LinalgError::NotPositiveSemiDefinite { index, pivot } => write!(
                f,
                "matrix is not positive semi-definite: pivot {pivot:e} at index {index}"
            ),
            LinalgError::NotPositiveDefinite { index } => {
                write!(f, "matrix is not positive definite at pivot {index}")
            }
            LinalgError::ZeroDiagonal { index } => {
                write!(
                    f,
                    "triangular factor has a non-positive diagonal at {index}"
                )
            }
            LinalgError::RankZero => write!(f, "factor has rank zero; no nonzero rows to keep"),
            LinalgError::SvdNoConvergence { sweeps } => {
                write!(f, "Jacobi SVD did not converge after {sweeps} sweeps")
            }
            LinalgError::NegativeWeight { row, col } => {
                write!(f, "negative pairing weight at ({row}, {col})")
            }
            LinalgError::ZeroVector => write!(f, "reflection vector must be nonzero"),
            LinalgError::InvalidParams { reason } => write!(f, "invalid parameters: {reason}"),
            LinalgError::GenerationFailed { attempts } => write!(
                f,
                "problem generation failed after {attempts} attempts; retry with a different seed"
            ),
        }
    }
}

impl std::error::Error for LinalgError {}
