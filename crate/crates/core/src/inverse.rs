//! Generalized inverses built on the generalized Cholesky factor: the
//! {1,2,3}-inverse of a factor via generalized backward substitution, the
//! {1,2,3}-inverse of a general tall matrix, and the fast Moore-Penrose
//! inverse through the compacted factor.

use crate::cholesky::{self, GenCholFactor, PivotTol};
use crate::error::LinalgError;
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// {1,2,3}-inverse of a generalized Cholesky factor.
///
/// Upper triangular, with row and column `i` both zero wherever row `i` of
/// the source factor was zero; its rank equals the source factor's rank.
#[derive(Debug, Clone, PartialEq)]
pub struct Inv123Factor<T> {
    u: Matrix<T>,
    source_zero_rows: Vec<bool>,
}

impl<T: Scalar> Inv123Factor<T> {
    pub fn u(&self) -> &Matrix<T> {
        &self.u
    }

    pub fn source_zero_rows(&self) -> &[bool] {
        &self.source_zero_rows
    }

    pub fn rank(&self) -> usize {
        self.source_zero_rows.iter().filter(|&&z| !z).count()
    }
}

/// Generalized backward substitution: solves `R U = I_R` for the unique
/// upper-triangular `U` whose zero rows and columns mirror the factor's zero
/// rows, where `I_R` is the diagonal 0/1 matrix marking nonzero rows of `R`.
///
/// Zero rows are identified by the factor's own mask rather than re-tested
/// against a tolerance, so the structure of `U` is always consistent with
/// `R`. Skipping the zeroed columns up front saves the floating-point work
/// whose result would be zero anyway.
pub fn inv123<T: Scalar>(f: &GenCholFactor<T>) -> Inv123Factor<T> {
    let n = f.order();
    let r = f.r();
    let zero = f.zero_rows();
    let mut u = Matrix::zeros(n, n);
    for j in (0..n).rev() {
        if zero[j] {
            continue;
        }
        for i in (0..=j).rev() {
            if zero[i] {
                continue;
            }
            if i == j {
                u.set(j, j, T::one() / r.get(j, j));
            } else {
                let mut acc = T::zero();
                for k in (i + 1)..=j {
                    if zero[k] {
                        continue; // u[k][j] is exactly zero
                    }
                    acc = acc + r.get(i, k) * u.get(k, j);
                }
                u.set(i, j, -acc / r.get(i, i));
            }
        }
    }
    Inv123Factor {
        u,
        source_zero_rows: zero.to_vec(),
    }
}

/// {1,2,3}-inverse of a tall matrix (`rows >= cols`): `B = U U' A'` with `U`
/// the {1,2,3}-inverse of the generalized Cholesky factor of `A'A`.
///
/// The result satisfies the first three Penrose equations for `A` but in
/// general not the fourth, which is what distinguishes it from the
/// Moore-Penrose inverse on rank-deficient input.
pub fn inv123_general<T: Scalar>(a: &Matrix<T>) -> Result<Matrix<T>, LinalgError> {
    if a.rows() < a.cols() {
        return Err(LinalgError::DimensionMismatch {
            op: "inv123_general requires rows >= cols",
            left: a.shape(),
            right: (a.cols(), a.rows()),
        });
    }
    let gram = a.transpose().matmul(a)?;
    let factor = cholesky::gen_chol(&gram, PivotTol::Auto)?;
    let u = inv123(&factor);
    // B = U * (U' * A')
    let ut_at = u.u().transpose().matmul(&a.transpose())?;
    u.u().matmul(&ut_at)
}

/// Fast Moore-Penrose inverse.
///
/// For `rows >= cols`: factor `G = A'A`, compact the zero rows to the
/// full-row-rank `S`, and evaluate `S' (SS')^-1 (SS')^-1 S A'`, with
/// `(SS')^-1` obtained from the classical Cholesky factor of `SS'` and
/// triangular inversion. For wide matrices the identity `A^+ = ((A')^+)'`
/// applies. Rank-zero input yields the zero matrix of transposed shape.
///
/// The repeated `(SS')^-1` factor is computed once and squared by a plain
/// matrix product; its sensitivity to the conditioning of `SS'` is inherent
/// to this route.
pub fn mp_inverse<T: Scalar>(a: &Matrix<T>) -> Result<Matrix<T>, LinalgError> {
    if a.rows() < a.cols() {
        return Ok(mp_inverse(&a.transpose())?.transpose());
    }
    let gram = a.transpose().matmul(a)?;
    let factor = cholesky::gen_chol(&gram, PivotTol::Auto)?;
    if factor.rank() == 0 {
        return Ok(Matrix::zeros(a.cols(), a.rows()));
    }
    let s = cholesky::compact_rows(&factor)?;
    let ss_t = s.matmul(&s.transpose())?;
    let r = cholesky::classical_chol(&ss_t)?;
    let u = cholesky::tri_inverse(&r)?;
    // (SS')^-1 = R^-1 R^-T since SS' = R'R
    let inv_ss = u.matmul(&u.transpose())?;
    let inv_sq = inv_ss.matmul(&inv_ss)?;
    // S' * inv_sq * (S * A')
    let s_at = s.matmul(&a.transpose())?;
    let mid = inv_sq.matmul(&s_at)?;
    s.transpose().matmul(&mid)
}
