//! Generalized Cholesky factorization for symmetric positive semi-definite
//! matrices, plus the classical factorization and triangular inversion used
//! by the fast Moore-Penrose route.
//!
//! The generalized factorization produces the unique upper-triangular `R`
//! with `R'R = G`, non-negative diagonal, and entirely zero rows wherever a
//! pivot vanishes; singular inputs therefore factor as cleanly as definite
//! ones, with the zero rows recording the rank deficiency.

use crate::error::LinalgError;
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// Relative tolerance for the symmetry check on factorization inputs. The
/// constant targets double precision; narrower scalars fall back to the same
/// multiple of their own epsilon.
const SYMMETRY_RTOL: f64 = 1e-12;

fn symmetry_tolerance<T: Scalar>() -> T {
    T::of(SYMMETRY_RTOL).max(T::epsilon() * T::of(4500.0))
}

/// Safety factor applied on top of `n * ulp(inf_norm(g))` by the automatic
/// pivot tolerance. The bare rule sits exactly at the elimination-noise
/// floor, and without diagonal pivoting that noise is further amplified by
/// the conditioning of the leading live block, so pivots of spurious rank
/// can reach thousands of ulps; one surviving noise pivot poisons every
/// inverse built on the factor with its reciprocal. The widened threshold
/// clears the amplified noise while staying orders of magnitude below
/// genuine spectrum at the conditioning this crate targets.
const AUTO_TOL_GUARD: f64 = 4096.0;

/// A pivot must fall below `-NEG_PIVOT_GUARD * tol` before the input is
/// declared not PSD. Elimination round-off at a structurally zero pivot
/// lands on either side of zero; genuine indefiniteness produces pivots far
/// below it.
const NEG_PIVOT_GUARD: f64 = 64.0;

/// Generalized Cholesky factor of a symmetric PSD matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct GenCholFactor<T> {
    r: Matrix<T>,
    zero_rows: Vec<bool>,
    rank: usize,
}

impl<T: Scalar> GenCholFactor<T> {
    /// The upper-triangular factor, including its zero rows.
    pub fn r(&self) -> &Matrix<T> {
        &self.r
    }

    /// Mask of rows that were zeroed by a vanishing pivot.
    pub fn zero_rows(&self) -> &[bool] {
        &self.zero_rows
    }

    /// Number of strictly positive pivots.
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Order of the factor.
    pub fn order(&self) -> usize {
        self.zero_rows.len()
    }
}

/// Pivot tolerance choice for [`gen_chol`].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum PivotTol<T> {
    /// `n * ulp(inf_norm(g))` widened by a small guard factor. Pass
    /// `Fixed(n * ulp(inf_norm(g)))` to reproduce the unguarded textbook
    /// rule exactly.
    #[default]
    Auto,
    /// Explicit threshold on the squared pivot, for reproducibility studies.
    Fixed(T),
}

/// Generalized Cholesky factorization of a symmetric positive semi-definite
/// matrix.
///
/// Only the upper triangle is read after a symmetry check. A computed squared
/// pivot at or below `tol` zeroes the whole row; a pivot far below zero
/// (beyond the round-off guard band) reports the input as not PSD rather
/// than silently clamping.
pub fn gen_chol<T: Scalar>(
    g: &Matrix<T>,
    tol: PivotTol<T>,
) -> Result<GenCholFactor<T>, LinalgError> {
    let n = check_symmetric(g)?;
    let tol = match tol {
        PivotTol::Auto => T::of(AUTO_TOL_GUARD * n as f64) * g.inf_norm().ulp(),
        PivotTol::Fixed(t) => t,
    };
    let neg_limit = T::of(NEG_PIVOT_GUARD) * tol;

    let mut r: Matrix<T> = Matrix::zeros(n, n);
    let mut zero_rows = vec![true; n];
    // indices of previously accepted (nonzero) rows; zero rows contribute
    // nothing to the inner products and are skipped
    let mut live_rows: Vec<usize> = Vec::with_capacity(n);
    let mut v = vec![T::zero(); n];

    for i in 0..n {
        for j in i..n {
            v[j] = g.get(i, j);
        }
        for &k in &live_rows {
            let rki = r.get(k, i);
            if rki.is_zero() {
                continue;
            }
            let rk = r.row(k);
            for j in i..n {
                v[j] = v[j] - rki * rk[j];
            }
        }
        let pivot = v[i];
        if pivot.is_nan() {
            return Err(LinalgError::NonFinite { row: i, col: i });
        }
        if pivot > tol {
            let rii = pivot.sqrt();
            let row = r.row_mut(i);
            row[i] = rii;
            for j in (i + 1)..n {
                row[j] = v[j] / rii;
            }
            zero_rows[i] = false;
            live_rows.push(i);
        } else if pivot < -neg_limit {
            return Err(LinalgError::NotPositiveSemiDefinite {
                index: i,
                pivot: pivot.to_f64().unwrap_or(f64::NEG_INFINITY),
            });
        }
        // pivot within the guard band around zero: the row stays zero
    }

    let rank = live_rows.len();
    Ok(GenCholFactor { r, zero_rows, rank })
}

/// Removes the zero rows of a generalized factor, leaving the full-row-rank
/// matrix `S` with `S'S = R'R`.
pub fn compact_rows<T: Scalar>(f: &GenCholFactor<T>) -> Result<Matrix<T>, LinalgError> {
    if f.rank == 0 {
        return Err(LinalgError::RankZero);
    }
    let n = f.order();
    let mut s = Matrix::zeros(f.rank, n);
    let mut dst = 0;
    for i in 0..n {
        if !f.zero_rows[i] {
            s.row_mut(dst).copy_from_slice(f.r.row(i));
            dst += 1;
        }
    }
    Ok(s)
}

/// Classical Cholesky factorization `R'R = G` for symmetric positive definite
/// input. No pivot tolerance: a non-positive pivot is an error.
///
/// Callers are expected to pass well-formed Gram matrices (the fast
/// Moore-Penrose route builds `S S'` which is definite by construction), so
/// no symmetry check is performed; only the upper triangle is read.
pub fn classical_chol<T: Scalar>(g: &Matrix<T>) -> Result<Matrix<T>, LinalgError> {
    if g.rows() != g.cols() {
        return Err(LinalgError::NotSquare {
            rows: g.rows(),
            cols: g.cols(),
        });
    }
    let n = g.rows();
    let mut r = Matrix::zeros(n, n);
    let mut v = vec![T::zero(); n];
    for i in 0..n {
        for j in i..n {
            v[j] = g.get(i, j);
        }
        for k in 0..i {
            let rki = r.get(k, i);
            let rk = r.row(k);
            for j in i..n {
                v[j] = v[j] - rki * rk[j];
            }
        }
        let pivot = v[i];
        // NaN (from overflowed input) fails this test too
        if pivot.is_nan() || pivot <= T::zero() {
            return Err(LinalgError::NotPositiveDefinite { index: i });
        }
        let rii = pivot.sqrt();
        let row = r.row_mut(i);
        row[i] = rii;
        for j in (i + 1)..n {
            row[j] = v[j] / rii;
        }
    }
    Ok(r)
}

/// Inverts an upper-triangular matrix with strictly positive diagonal by
/// backward substitution, solving `r * u = I` column by column.
pub fn tri_inverse<T: Scalar>(r: &Matrix<T>) -> Result<Matrix<T>, LinalgError> {
    if r.rows() != r.cols() {
        return Err(LinalgError::NotSquare {
            rows: r.rows(),
            cols: r.cols(),
        });
    }
    let n = r.rows();
    for i in 0..n {
        let d = r.get(i, i);
        if d.is_nan() || d <= T::zero() {
            return Err(LinalgError::ZeroDiagonal { index: i });
        }
    }
    let mut u = Matrix::zeros(n, n);
    for j in (0..n).rev() {
        u.set(j, j, T::one() / r.get(j, j));
        for i in (0..j).rev() {
            let mut acc = T::zero();
            for k in (i + 1)..=j {
                acc = acc + r.get(i, k) * u.get(k, j);
            }
            u.set(i, j, -acc / r.get(i, i));
        }
    }
    Ok(u)
}

fn check_symmetric<T: Scalar>(g: &Matrix<T>) -> Result<usize, LinalgError> {
    if g.rows() != g.cols() {
        return Err(LinalgError::NotSquare {
            rows: g.rows(),
            cols: g.cols(),
        });
    }
    let n = g.rows();
    for i in 0..n {
        for (j, v) in g.row(i).iter().enumerate() {
            if !v.is_finite() {
                return Err(LinalgError::NonFinite { row: i, col: j });
            }
        }
    }
    let scale = g.inf_norm();
    let tol = symmetry_tolerance::<T>() * scale;
    for i in 0..n {
        for j in (i + 1)..n {
            // entries are finite here, so the difference cannot be NaN
            let diff = (g.get(i, j) - g.get(j, i)).abs();
            if diff > tol {
                return Err(LinalgError::NotSymmetric { row: i, col: j });
            }
        }
    }
    Ok(n)
}
