//! Relative residuals of the four Penrose equations.
//!
//! For a candidate generalized inverse `b` of `a`, each function returns how
//! far the corresponding Penrose equation is from holding, scaled so that a
//! perfect inverse scores zero regardless of the magnitude of `a`:
//!
//! * P1: `a b a = a`
//! * P2: `b a b = b`
//! * P3: `(a b)' = a b`
//! * P4: `(b a)' = b a`
//!
//! A matrix satisfying P1-P3 is a {1,2,3}-inverse; the Moore-Penrose inverse
//! is the unique matrix satisfying all four.

use crate::error::LinalgError;
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// Residuals of all four Penrose equations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PenroseResiduals<T> {
    pub p1: T,
    pub p2: T,
    pub p3: T,
    pub p4: T,
}

impl<T: Scalar> PenroseResiduals<T> {
    /// True when the first three equations hold within `tol`.
    pub fn is_inverse_123(&self, tol: T) -> bool {
        self.p1 <= tol && self.p2 <= tol && self.p3 <= tol
    }

    /// True when all four equations hold within `tol`.
    pub fn is_moore_penrose(&self, tol: T) -> bool {
        self.is_inverse_123(tol) && self.p4 <= tol
    }
}

/// Computes the four residuals for the pair `(a, b)`.
pub fn residuals<T: Scalar>(
    a: &Matrix<T>,
    b: &Matrix<T>,
) -> Result<PenroseResiduals<T>, LinalgError> {
    if a.rows() != b.cols() || a.cols() != b.rows() {
        return Err(LinalgError::DimensionMismatch {
            op: "penrose residuals",
            left: a.shape(),
            right: b.shape(),
        });
    }
    let ab = a.matmul(b)?;
    let ba = b.matmul(a)?;
    let one = T::one();

    let aba = ab.matmul(a)?;
    let p1 = aba.sub(a)?.frobenius_norm() / (one + a.frobenius_norm());

    let bab = ba.matmul(b)?;
    let p2 = bab.sub(b)?.frobenius_norm() / (one + b.frobenius_norm());

    // symmetry defects round off at the scale of the product's factors, so
    // P3 and P4 are measured against ||a|| * ||b|| rather than the (possibly
    // heavily cancelled) product norm
    let product_scale = one + a.frobenius_norm() * b.frobenius_norm();
    let p3 = ab.transpose().sub(&ab)?.frobenius_norm() / product_scale;
    let p4 = ba.transpose().sub(&ba)?.frobenius_norm() / product_scale;

    Ok(PenroseResiduals { p1, p2, p3, p4 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_of_identity_scores_zero() {
        let id = Matrix::<f64>::identity(3);
        let r = residuals(&id, &id).unwrap();
        assert_eq!((r.p1, r.p2, r.p3, r.p4), (0.0, 0.0, 0.0, 0.0));
        assert!(r.is_moore_penrose(1e-300));
    }

    #[test]
    fn zero_matrix_inverse_is_zero() {
        let a = Matrix::<f64>::zeros(3, 2);
        let b = Matrix::<f64>::zeros(2, 3);
        let r = residuals(&a, &b).unwrap();
        assert!(r.is_moore_penrose(1e-300));
    }

    #[test]
    fn wrong_candidate_scores_high() {
        let a = Matrix::from_rows(&[&[2.0, 0.0], &[0.0, 2.0]]).unwrap();
        let bad = Matrix::<f64>::identity(2); // true inverse is 0.5 I
        let r = residuals(&a, &bad).unwrap();
        assert!(r.p1 > 0.1);
    }

    #[test]
    fn shape_mismatch_is_reported() {
        let a = Matrix::<f64>::zeros(3, 2);
        let b = Matrix::<f64>::zeros(3, 2);
        assert!(residuals(&a, &b).is_err());
    }
}
