//! Weighted pairing least-squares problems and their two fast solvers.
//!
//! A problem pairs every row of `x` with every row of `y` through a
//! rectangular non-negative weight matrix `w`, and the objective is
//!
//! ```text
//! E(V) = sum_ij w_ij * || x_i,: V - y_j,: ||^2 .
//! ```
//!
//! Every such problem reduces to an ordinary weighted least-squares problem
//! with diagonal weights `h` (the row sums of `w`), targets `z`, and
//! V-independent offsets `d`; [`reduce`] materializes that form. Both solvers
//! work through the Gram matrix `X'HX`:
//!
//! * [`solve_123`] inverts its generalized Cholesky factor with the
//!   generalized backward substitution and assembles `C = U U' X' W Y`;
//! * [`solve_dagger`] compacts the factor and assembles the minimum-norm
//!   solution `C = S' (SS')^-1 (SS')^-1 S X' W Y`.
//!
//! Both minimize the objective; they differ in which minimizer they pick on
//! rank-deficient systems and in numerical robustness.

use std::time::Instant;

use crate::cholesky::{self, PivotTol};
use crate::error::LinalgError;
use crate::inverse;
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// A weighted pairing least-squares problem `(x, y, w)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WplsProblem<T> {
    x: Matrix<T>,
    y: Matrix<T>,
    w: Matrix<T>,
}

impl<T: Scalar> WplsProblem<T> {
    /// Validates shapes (`w` is `x.rows() x y.rows()`), non-negativity of the
    /// weights, and finiteness of all three matrices.
    pub fn new(x: Matrix<T>, y: Matrix<T>, w: Matrix<T>) -> Result<Self, LinalgError> {
        if w.rows() != x.rows() || w.cols() != y.rows() {
            return Err(LinalgError::DimensionMismatch {
                op: "weight matrix must be x.rows() x y.rows()",
                left: w.shape(),
                right: (x.rows(), y.rows()),
            });
        }
        for m in [&x, &y, &w] {
            if let Some(idx) = m.data().iter().position(|v| !v.is_finite()) {
                return Err(LinalgError::NonFinite {
                    row: idx / m.cols().max(1),
                    col: idx % m.cols().max(1),
                });
            }
        }
        for i in 0..w.rows() {
            for (j, &v) in w.row(i).iter().enumerate() {
                if v < T::zero() {
                    return Err(LinalgError::NegativeWeight { row: i, col: j });
                }
            }
        }
        Ok(Self { x, y, w })
    }

    pub fn x(&self) -> &Matrix<T> {
        &self.x
    }

    pub fn y(&self) -> &Matrix<T> {
        &self.y
    }

    pub fn w(&self) -> &Matrix<T> {
        &self.w
    }

    /// `(m1, n1, m2, n2)` = (rows of x, cols of x, rows of y, cols of y).
    pub fn dims(&self) -> (usize, usize, usize, usize) {
        (self.x.rows(), self.x.cols(), self.y.rows(), self.y.cols())
    }
}

/// Diagonal-weight form of a pairing problem: weights `h`, targets `z`, and
/// the constant offsets `d` that make the reduced objective equal the
/// original one.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedProblem<T> {
    /// Diagonal weights: `h[i]` is the i-th row sum of `w`.
    pub h: Vec<T>,
    /// Targets `z = H^+ W y`; rows with `h[i] = 0` are zero.
    pub z: Matrix<T>,
    /// Offsets `d[i][k] = sum_j w_ij y_jk^2 - h_i^+ (sum_j w_ij y_jk)^2`.
    pub d: Matrix<T>,
}

/// Which solver produced a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// {1,2,3}-inverse route.
    Gi123,
    /// Fast Moore-Penrose route (minimum-norm solution).
    Dagger,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Gi123 => "gi123",
            Method::Dagger => "dagger",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Outcome of a solve: the coefficients, the achieved objective value, the
/// rank detected by the factorization, and the wall-clock time of the solve
/// itself (reduction, factorization, inversion, and assembly of `c`;
/// excludes the residue evaluation).
///
/// Rank-deficient systems have infinitely many minimizers; `method` records
/// which one was picked (`dagger` returns the minimum-norm minimizer, `gi123`
/// one with at most `detected_rank` nonzero coefficients per column).
#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport<T> {
    pub c: Matrix<T>,
    pub e_method: T,
    pub detected_rank: usize,
    pub solve_seconds: f64,
    pub method: Method,
}

/// Reduces a pairing problem to its diagonal-weight form.
pub fn reduce<T: Scalar>(p: &WplsProblem<T>) -> ReducedProblem<T> {
    let h = p.w.row_sums();
    let h_dagger: Vec<T> = h
        .iter()
        .map(|&v| {
            if v > T::zero() {
                T::one() / v
            } else {
                T::zero()
            }
        })
        .collect();

    let wy = p.w.matmul(&p.y).expect("validated shapes");
    let z = wy.scale_rows(&h_dagger);

    // d_ik = sum_j w_ij y_jk^2 - h_i^+ (sum_j w_ij y_jk)^2
    let y_sq = Matrix::from_fn(p.y.rows(), p.y.cols(), |i, j| {
        let v = p.y.get(i, j);
        v * v
    });
    let w_ysq = p.w.matmul(&y_sq).expect("validated shapes");
    let d = Matrix::from_fn(w_ysq.rows(), w_ysq.cols(), |i, k| {
        let s = wy.get(i, k);
        w_ysq.get(i, k) - h_dagger[i] * s * s
    });

    ReducedProblem { h, z, d }
}

/// Shared solver prefix: diagonal weights, Gram matrix `X'HX` (formed by row
/// scaling), and the right-hand side `X'WY`.
fn gram_and_rhs<T: Scalar>(p: &WplsProblem<T>) -> Result<(Matrix<T>, Matrix<T>), LinalgError> {
    let h = p.w.row_sums();
    let hx = p.x.scale_rows(&h);
    let xt = p.x.transpose();
    let gram = xt.matmul(&hx)?;
    let wy = p.w.matmul(&p.y)?;
    let rhs = xt.matmul(&wy)?;
    Ok((gram, rhs))
}

/// Solves the problem through the {1,2,3}-inverse of the generalized
/// Cholesky factor: `C = U U' X' W Y`.
pub fn solve_123<T: Scalar>(p: &WplsProblem<T>) -> Result<SolveReport<T>, LinalgError> {
    let start = Instant::now();
    let (gram, rhs) = gram_and_rhs(p)?;
    let factor = cholesky::gen_chol(&gram, PivotTol::Auto)?;
    let u = inverse::inv123(&factor);
    let ut_rhs = u.u().transpose().matmul(&rhs)?;
    let c = u.u().matmul(&ut_rhs)?;
    let solve_seconds = start.elapsed().as_secs_f64();

    let e_method = residue_direct(p, &c);
    Ok(SolveReport {
        c,
        e_method,
        detected_rank: factor.rank(),
        solve_seconds,
        method: Method::Gi123,
    })
}

/// Solves the problem through the fast Moore-Penrose route:
/// `C = S' (SS')^-1 (SS')^-1 S X' W Y`, the minimum-norm minimizer.
pub fn solve_dagger<T: Scalar>(p: &WplsProblem<T>) -> Result<SolveReport<T>, LinalgError> {
    let start = Instant::now();
    let (gram, rhs) = gram_and_rhs(p)?;
    let factor = cholesky::gen_chol(&gram, PivotTol::Auto)?;
    let c = if factor.rank() == 0 {
        Matrix::zeros(p.x.cols(), p.y.cols())
    } else {
        let s = cholesky::compact_rows(&factor)?;
        let ss_t = s.matmul(&s.transpose())?;
        let r = cholesky::classical_chol(&ss_t)?;
        let u = cholesky::tri_inverse(&r)?;
        let inv_ss = u.matmul(&u.transpose())?;
        let inv_sq = inv_ss.matmul(&inv_ss)?;
        let s_rhs = s.matmul(&rhs)?;
        let mid = inv_sq.matmul(&s_rhs)?;
        s.transpose().matmul(&mid)?
    };
    let solve_seconds = start.elapsed().as_secs_f64();

    let e_method = residue_direct(p, &c);
    Ok(SolveReport {
        c,
        e_method,
        detected_rank: factor.rank(),
        solve_seconds,
        method: Method::Dagger,
    })
}

/// Objective value at `c`, evaluated as the literal double sum over all
/// `(i, j)` pairs with a plain accumulator.
pub fn residue_direct<T: Scalar>(p: &WplsProblem<T>, c: &Matrix<T>) -> T {
    assert_eq!(
        c.shape(),
        (p.x.cols(), p.y.cols()),
        "coefficient matrix must be n1 x n2"
    );
    let xc = p.x.matmul(c).expect("validated shapes");
    let mut acc = T::zero();
    for i in 0..p.w.rows() {
        let xc_row = xc.row(i);
        for j in 0..p.w.cols() {
            let w_ij = p.w.get(i, j);
            let y_row = p.y.row(j);
            let mut dist = T::zero();
            for (&a, &b) in xc_row.iter().zip(y_row) {
                let diff = a - b;
                dist = dist + diff * diff;
            }
            acc = acc + w_ij * dist;
        }
    }
    acc
}

/// Objective value at `c` through the reduced form:
/// `sum_i h_i ||x_i,: c - z_i,:||^2 + sum_ik d_ik`.
pub fn residue_reduced<T: Scalar>(rp: &ReducedProblem<T>, x: &Matrix<T>, c: &Matrix<T>) -> T {
    assert_eq!(x.rows(), rp.h.len(), "x rows must match weight count");
    let xc = x.matmul(c).expect("shapes consistent");
    let mut acc = T::zero();
    for i in 0..xc.rows() {
        let mut dist = T::zero();
        for (&a, &z) in xc.row(i).iter().zip(rp.z.row(i)) {
            let diff = a - z;
            dist = dist + diff * diff;
        }
        acc = acc + rp.h[i] * dist;
        for &d in rp.d.row(i) {
            acc = acc + d;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[f64]]) -> Matrix<f64> {
        Matrix::from_rows(rows).unwrap()
    }

    fn problem(x: &[&[f64]], y: &[&[f64]], w: &[&[f64]]) -> WplsProblem<f64> {
        WplsProblem::new(mat(x), mat(y), mat(w)).unwrap()
    }

    #[test]
    fn validation_rejects_bad_shapes_and_weights() {
        let err = WplsProblem::new(
            Matrix::<f64>::zeros(2, 1),
            Matrix::<f64>::zeros(3, 1),
            Matrix::<f64>::zeros(2, 2),
        )
        .unwrap_err();
        assert!(matches!(err, LinalgError::DimensionMismatch { .. }));

        let err = WplsProblem::new(
            Matrix::<f64>::zeros(1, 1),
            Matrix::<f64>::zeros(1, 1),
            mat(&[&[-0.5]]),
        )
        .unwrap_err();
        assert_eq!(err, LinalgError::NegativeWeight { row: 0, col: 0 });
    }

    #[test]
    fn reduce_diagonal_weights() {
        // diagonal W: h = diag(w), z = y, d = 0
        let p = problem(
            &[&[1.0, 0.0], &[0.0, 1.0], &[1.0, 1.0]],
            &[&[1.0], &[2.0], &[3.0]],
            &[&[2.0, 0.0, 0.0], &[0.0, 3.0, 0.0], &[0.0, 0.0, 4.0]],
        );
        let rp = reduce(&p);
        assert_eq!(rp.h, vec![2.0, 3.0, 4.0]);
        assert!(rp.z.max_abs_diff(p.y()) < 1e-15);
        assert_eq!(rp.d.frobenius_norm(), 0.0);
    }

    #[test]
    fn reduce_hand_example() {
        // w = [[1,1]], y = [[0],[2]]: h = 2, z = 1, d = 4 - 0.5*4 = 2
        let p = problem(&[&[1.0]], &[&[0.0], &[2.0]], &[&[1.0, 1.0]]);
        let rp = reduce(&p);
        assert_eq!(rp.h, vec![2.0]);
        assert_eq!(rp.z, mat(&[&[1.0]]));
        assert_eq!(rp.d, mat(&[&[2.0]]));
    }

    #[test]
    fn reduce_zero_weight_row() {
        let p = problem(&[&[1.0], &[1.0]], &[&[5.0]], &[&[0.0], &[2.0]]);
        let rp = reduce(&p);
        assert_eq!(rp.h, vec![0.0, 2.0]);
        assert_eq!(rp.z.row(0), &[0.0]);
        assert_eq!(rp.d.row(0), &[0.0]);
    }

    #[test]
    fn solve_identity_problem() {
        let y = mat(&[&[1.0, -2.0], &[0.5, 3.0]]);
        let p = WplsProblem::new(Matrix::identity(2), y.clone(), Matrix::identity(2)).unwrap();
        for report in [solve_123(&p).unwrap(), solve_dagger(&p).unwrap()] {
            assert!(report.c.max_abs_diff(&y) < 1e-12);
            assert!(report.e_method.abs() < 1e-20);
            assert_eq!(report.detected_rank, 2);
        }
    }

    #[test]
    fn solve_scalar_calculus_example() {
        // minimize (c-0)^2 + (c-4)^2 -> c = 2, E = 8
        let p = problem(
            &[&[1.0], &[1.0]],
            &[&[0.0], &[4.0]],
            &[&[1.0, 0.0], &[0.0, 1.0]],
        );
        let report = solve_123(&p).unwrap();
        assert!(report.c.max_abs_diff(&mat(&[&[2.0]])) < 1e-12);
        assert!((report.e_method - 8.0).abs() < 1e-12);
    }

    #[test]
    fn solve_cross_pairing_example() {
        // same objective through the pairing weights
        let p = problem(&[&[1.0]], &[&[0.0], &[4.0]], &[&[1.0, 1.0]]);
        let report = solve_123(&p).unwrap();
        assert!(report.c.max_abs_diff(&mat(&[&[2.0]])) < 1e-12);
        assert!((report.e_method - 8.0).abs() < 1e-12);
    }

    #[test]
    fn solve_rank_deficient_example() {
        let p = problem(&[&[1.0, 1.0]], &[&[2.0]], &[&[1.0]]);

        let r123 = solve_123(&p).unwrap();
        assert!(r123.c.max_abs_diff(&mat(&[&[2.0], &[0.0]])) < 1e-12);
        assert!(r123.e_method.abs() < 1e-12);
        assert_eq!(r123.detected_rank, 1);

        let rdag = solve_dagger(&p).unwrap();
        assert!(rdag.c.max_abs_diff(&mat(&[&[1.0], &[1.0]])) < 1e-12);
        assert!(rdag.e_method.abs() < 1e-12);

        // minimum-norm solution is strictly shorter
        assert!(rdag.c.frobenius_norm() < r123.c.frobenius_norm());
    }

    #[test]
    fn residue_direct_cases() {
        // exact fit
        let p = problem(
            &[&[1.0], &[2.0]],
            &[&[3.0], &[6.0]],
            &[&[1.0, 0.0], &[0.0, 5.0]],
        );
        assert_eq!(residue_direct(&p, &mat(&[&[3.0]])), 0.0);

        // hand double sum
        let p = problem(&[&[1.0]], &[&[0.0], &[4.0]], &[&[1.0, 1.0]]);
        assert_eq!(residue_direct(&p, &mat(&[&[2.0]])), 8.0);

        // zero weights
        let p = problem(&[&[1.0]], &[&[9.0]], &[&[0.0]]);
        assert_eq!(residue_direct(&p, &mat(&[&[7.0]])), 0.0);
    }

    #[test]
    fn residue_reduced_matches_direct_on_hand_examples() {
        // y = [[0],[2]]: E(c=2) = 1*(2-0)^2 + 1*(2-2)^2 = 4
        let p = problem(&[&[1.0]], &[&[0.0], &[2.0]], &[&[1.0, 1.0]]);
        let rp = reduce(&p);
        let c = mat(&[&[2.0]]);
        assert_eq!(residue_direct(&p, &c), 4.0);
        assert_eq!(residue_reduced(&rp, p.x(), &c), 4.0);

        // y = [[0],[4]]: z = 2, d = 16 - 8 = 8, E(c=2) = 2*0 + 8 = 8
        let p = problem(&[&[1.0]], &[&[0.0], &[4.0]], &[&[1.0, 1.0]]);
        let rp = reduce(&p);
        assert_eq!(rp.d, mat(&[&[8.0]]));
        assert_eq!(residue_direct(&p, &c), 8.0);
        assert_eq!(residue_reduced(&rp, p.x(), &c), 8.0);
    }

    #[test]
    fn residue_at_zero_coefficients() {
        let p = problem(
            &[&[1.0, 2.0], &[0.0, 1.0]],
            &[&[1.0], &[2.0], &[3.0]],
            &[&[1.0, 0.5, 0.0], &[0.25, 2.0, 1.0]],
        );
        let c = Matrix::zeros(2, 1);
        // both formulas give sum_ij w_ij ||y_j||^2
        let mut expected = 0.0;
        for i in 0..2 {
            for j in 0..3 {
                expected += p.w().get(i, j) * p.y().get(j, 0) * p.y().get(j, 0);
            }
        }
        assert!((residue_direct(&p, &c) - expected).abs() < 1e-12);
        let rp = reduce(&p);
        assert!((residue_reduced(&rp, p.x(), &c) - expected).abs() < 1e-12);
    }

    #[test]
    fn zero_weight_matrix_solves_to_zero() {
        let p = problem(&[&[1.0, 2.0]], &[&[5.0]], &[&[0.0]]);
        for report in [solve_123(&p).unwrap(), solve_dagger(&p).unwrap()] {
            assert_eq!(report.detected_rank, 0);
            assert_eq!(report.c.frobenius_norm(), 0.0);
            assert_eq!(report.e_method, 0.0);
        }
    }

    #[test]
    fn method_tags() {
        assert_eq!(Method::Gi123.to_string(), "gi123");
        assert_eq!(Method::Dagger.to_string(), "dagger");
        let p = problem(&[&[1.0]], &[&[1.0]], &[&[1.0]]);
        assert_eq!(solve_123(&p).unwrap().method, Method::Gi123);
        assert_eq!(solve_dagger(&p).unwrap().method, Method::Dagger);
    }
}
