//! Slow, accurate singular value decomposition by one-sided Jacobi rotations.
//!
//! This decomposition exists to serve as an independent reference: the
//! problem generator uses it to pseudo-invert the weight matrix, and the
//! test suite uses it to cross-check the fast factorization-based inverses.
//! It is deliberately simple rather than fast.

use crate::error::LinalgError;
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// Maximum number of Jacobi sweeps before giving up.
const MAX_SWEEPS: usize = 60;

/// Off-diagonal inner products below `CONVERGENCE_FACTOR * ||b_p|| * ||b_q||`
/// count as annihilated. The constant targets double precision; narrower
/// scalars fall back to the same multiple of their own epsilon.
const CONVERGENCE_FACTOR: f64 = 1e-14;

fn convergence_threshold<T: Scalar>() -> T {
    T::of(CONVERGENCE_FACTOR).max(T::epsilon() * T::of(45.0))
}

/// Thin SVD `a = u * diag(sigma) * v'` with orthonormal columns in `u`
/// (rows(a) x k) and `v` (cols(a) x k), `k = min(rows, cols)`, and singular
/// values sorted in non-increasing order.
#[derive(Debug, Clone)]
pub struct Svd<T> {
    pub u: Matrix<T>,
    pub singular_values: Vec<T>,
    pub v: Matrix<T>,
}

impl<T: Scalar> Svd<T> {
    /// Reassembles `u * diag(sigma) * v'`, for reconstruction checks.
    pub fn reconstruct(&self) -> Matrix<T> {
        let k = self.singular_values.len();
        let mut scaled = self.u.clone();
        for j in 0..k {
            for i in 0..scaled.rows() {
                let v = scaled.get(i, j) * self.singular_values[j];
                scaled.set(i, j, v);
            }
        }
        scaled.matmul(&self.v.transpose()).expect("shapes agree")
    }

    /// Count of singular values above the conventional spectral cutoff
    /// `max(rows, cols) * eps * sigma_max`.
    pub fn rank(&self, rows: usize, cols: usize) -> usize {
        let sigma_max = self
            .singular_values
            .first()
            .copied()
            .unwrap_or_else(T::zero);
        let cutoff = T::of(rows.max(cols) as f64) * T::epsilon() * sigma_max;
        self.singular_values.iter().filter(|&&s| s > cutoff).count()
    }
}

/// One-sided Jacobi SVD.
///
/// Rotates pairs of columns of a working copy of `a` until all pairwise inner
/// products vanish relative to the column norms; column norms then give the
/// singular values. For wide inputs the transpose is decomposed and the roles
/// of `u` and `v` are swapped back.
pub fn jacobi_svd<T: Scalar>(a: &Matrix<T>) -> Result<Svd<T>, LinalgError> {
    if a.rows() < a.cols() {
        let t = jacobi_svd(&a.transpose())?;
        return Ok(Svd {
            u: t.v,
            singular_values: t.singular_values,
            v: t.u,
        });
    }

    let m = a.rows();
    let n = a.cols();
    let k = n; // m >= n

    // Column-major working copies: Jacobi operates on whole columns.
    let mut b: Vec<Vec<T>> = (0..n)
        .map(|j| (0..m).map(|i| a.get(i, j)).collect())
        .collect();
    let mut v: Vec<Vec<T>> = (0..n)
        .map(|j| {
            let mut col = vec![T::zero(); n];
            col[j] = T::one();
            col
        })
        .collect();

    let conv = convergence_threshold::<T>();
    let two = T::of(2.0);
    let mut converged = n < 2;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        converged = true;
        // squared column norms, refreshed per sweep and updated per rotation
        let mut norms_sq: Vec<T> = b
            .iter()
            .map(|col| col.iter().fold(T::zero(), |acc, &x| acc + x * x))
            .collect();
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = b[p]
                    .iter()
                    .zip(&b[q])
                    .fold(T::zero(), |acc, (&x, &y)| acc + x * y);
                let app = norms_sq[p];
                let aqq = norms_sq[q];
                if apq.abs() <= conv * (app.sqrt() * aqq.sqrt()) {
                    continue;
                }
                converged = false;
                let tau = (aqq - app) / (two * apq);
                let t = if tau >= T::zero() {
                    T::one() / (tau + (T::one() + tau * tau).sqrt())
                } else {
                    T::one() / (tau - (T::one() + tau * tau).sqrt())
                };
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = t * c;
                rotate_pair(&mut b, p, q, c, s);
                rotate_pair(&mut v, p, q, c, s);
                // the rotation moves energy between the two columns
                let cs = two * c * s * apq;
                norms_sq[p] = c * c * app - cs + s * s * aqq;
                norms_sq[q] = s * s * app + cs + c * c * aqq;
            }
        }
    }
    if !converged {
        return Err(LinalgError::SvdNoConvergence { sweeps: MAX_SWEEPS });
    }

    // Column norms are the singular values; sort them non-increasing.
    let mut order: Vec<usize> = (0..n).collect();
    let norms: Vec<T> = b
        .iter()
        .map(|col| col.iter().fold(T::zero(), |acc, &x| acc + x * x).sqrt())
        .collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).expect("finite norms"));

    let singular_values: Vec<T> = order.iter().map(|&j| norms[j]).collect();
    let sigma_max = singular_values[0];

    let mut u = Matrix::zeros(m, k);
    let mut v_sorted = Matrix::zeros(n, k);
    // Numerically null columns cannot be normalized; complete them to an
    // orthonormal basis afterwards instead.
    let null_cutoff = T::of(m.max(n) as f64) * T::epsilon() * sigma_max;
    let mut pending: Vec<usize> = Vec::new();
    for (dst, &src) in order.iter().enumerate() {
        for i in 0..n {
            v_sorted.set(i, dst, v[src][i]);
        }
        if singular_values[dst] > null_cutoff {
            let inv = T::one() / singular_values[dst];
            for i in 0..m {
                u.set(i, dst, b[src][i] * inv);
            }
        } else {
            pending.push(dst);
        }
    }
    complete_basis(&mut u, &pending);

    Ok(Svd {
        u,
        singular_values,
        v: v_sorted,
    })
}

fn rotate_pair<T: Scalar>(cols: &mut [Vec<T>], p: usize, q: usize, c: T, s: T) {
    let (head, tail) = cols.split_at_mut(q);
    let col_p = &mut head[p];
    let col_q = &mut tail[0];
    for (xp, xq) in col_p.iter_mut().zip(col_q.iter_mut()) {
        let vp = *xp;
        let vq = *xq;
        *xp = c * vp - s * vq;
        *xq = s * vp + c * vq;
    }
}

/// Fills the listed columns of `u` with unit vectors orthogonal to all other
/// columns, by Gram-Schmidt over the coordinate basis. For each column the
/// coordinate vector that keeps the most mass outside the span of the filled
/// columns is taken; the pigeonhole bound guarantees it is nonzero.
fn complete_basis<T: Scalar>(u: &mut Matrix<T>, pending: &[usize]) {
    let m = u.rows();
    let k = u.cols();
    for &col in pending {
        let mut best: Option<(T, Vec<T>)> = None;
        for cand in 0..m {
            let mut vec: Vec<T> = (0..m)
                .map(|i| if i == cand { T::one() } else { T::zero() })
                .collect();
            // two rounds of projection subtraction keep the result orthogonal
            for _ in 0..2 {
                for other in 0..k {
                    if other == col || (pending.contains(&other) && other > col) {
                        continue;
                    }
                    let dot = (0..m).fold(T::zero(), |acc, i| acc + vec[i] * u.get(i, other));
                    for (i, entry) in vec.iter_mut().enumerate() {
                        *entry = *entry - dot * u.get(i, other);
                    }
                }
            }
            let norm = vec.iter().fold(T::zero(), |acc, &x| acc + x * x).sqrt();
            if best.as_ref().is_none_or(|(b, _)| norm > *b) {
                best = Some((norm, vec));
            }
        }
        let (norm, vec) = best.expect("at least one candidate");
        for (i, &entry) in vec.iter().enumerate() {
            u.set(i, col, entry / norm);
        }
    }
}

/// Moore-Penrose inverse through the Jacobi SVD: `v * diag(sigma^+) * u'`,
/// where singular values at or below `max(rows, cols) * eps * sigma_max` are
/// treated as zero.
pub fn pinv<T: Scalar>(a: &Matrix<T>) -> Result<Matrix<T>, LinalgError> {
    let svd = jacobi_svd(a)?;
    let sigma_max = svd.singular_values.first().copied().unwrap_or_else(T::zero);
    let cutoff = T::of(a.rows().max(a.cols()) as f64) * T::epsilon() * sigma_max;
    let inverted: Vec<T> = svd
        .singular_values
        .iter()
        .map(|&s| if s > cutoff { T::one() / s } else { T::zero() })
        .collect();
    // v * diag(sigma^+) * u'
    let mut scaled_v = svd.v.clone();
    for j in 0..inverted.len() {
        for i in 0..scaled_v.rows() {
            let value = scaled_v.get(i, j) * inverted[j];
            scaled_v.set(i, j, value);
        }
    }
    scaled_v.matmul(&svd.u.transpose())
}
