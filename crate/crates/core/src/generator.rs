//! Synthetic pairing problems with controlled size, rank, spectrum, and a
//! known exact objective minimum.
//!
//! The construction plants an `m1 x n1` matrix `A` of prescribed rank `r`
//! between two Householder reflections, with singular values spread so the
//! extreme nonzero eigenvalues of `A'A` are exactly `kappa` and `1`. A
//! residual block `P` orthogonal to the columns of `A` fixes the minimum of
//! the objective; diagonal weights scale `A` and `P` into a coherent problem;
//! and a randomized trials-and-errors loop factors the weighted targets into
//! a non-negative pairing matrix `w` and targets `y` with prescribed row
//! sums. The exact minimum comes out as `||P||^2` plus the reduction offsets.

use crate::error::LinalgError;
use crate::matrix::Matrix;
use crate::rng::{SplitMix64, Xoshiro256PlusPlus};
use crate::scalar::Scalar;
use crate::solver::{self, WplsProblem};
use crate::svd;

/// Practical upper bound on `kappa`: generation frequently fails beyond it.
pub const KAPPA_PRACTICAL_LIMIT: f64 = 4096.0;

/// Default cap on trials-and-errors attempts.
pub const DEFAULT_MAX_ATTEMPTS: usize = 50;

/// Default relative tolerance on `||w y - hz||` for accepting a factorization.
pub const DEFAULT_FACTOR_TOL: f64 = 1e-10;

/// Parameters of the synthetic problem generator.
#[derive(Debug, Clone, PartialEq)]
pub struct GenParams {
    /// Columns of `x` (coefficient count).
    pub n1: usize,
    /// Rows of `x`; must exceed `n1`.
    pub m1: usize,
    /// Rows of `y`; must be at least `m1`.
    pub m2: usize,
    /// Columns of `y`.
    pub n2: usize,
    /// Planted rank, at most `n1`.
    pub rank: usize,
    /// Ratio of extreme nonzero eigenvalues of the Gram matrix.
    pub kappa: f64,
    /// Seed for the deterministic generator stream.
    pub seed: u64,
    /// Cap on trials-and-errors attempts.
    pub max_attempts: usize,
    /// Relative acceptance tolerance for the weight factorization. The
    /// default suits double precision; single-precision instantiations need
    /// a tolerance their epsilon can reach.
    pub factor_tol: f64,
}

impl GenParams {
    /// Parameters with default attempt budget and factorization tolerance.
    pub fn new(
        n1: usize,
        m1: usize,
        m2: usize,
        n2: usize,
        rank: usize,
        kappa: f64,
        seed: u64,
    ) -> Self {
        Self {
            n1,
            m1,
            m2,
            n2,
            rank,
            kappa,
            seed,
            max_attempts: DEFAULT_MAX_ATTEMPTS,
            factor_tol: DEFAULT_FACTOR_TOL,
        }
    }

    /// Checks the size and spectrum constraints.
    pub fn validate(&self) -> Result<(), LinalgError> {
        let fail = |reason: String| Err(LinalgError::InvalidParams { reason });
        if !(self.m2 >= self.m1 && self.m1 > self.n1) {
            return fail(format!(
                "sizes must satisfy m2 >= m1 > n1, got m2={}, m1={}, n1={}",
                self.m2, self.m1, self.n1
            ));
        }
        if self.n1 == 0 || self.n2 == 0 {
            return fail("n1 and n2 must be positive".into());
        }
        if self.rank == 0 || self.rank > self.n1 {
            return fail(format!(
                "rank must lie in 1..=n1, got rank={} with n1={}",
                self.rank, self.n1
            ));
        }
        if !self.kappa.is_finite() || self.kappa < 1.0 {
            return fail(format!("kappa must be finite and >= 1, got {}", self.kappa));
        }
        if self.max_attempts == 0 {
            return fail("max_attempts must be positive".into());
        }
        if self.factor_tol.is_nan() || self.factor_tol <= 0.0 {
            return fail(format!(
                "factor_tol must be positive, got {}",
                self.factor_tol
            ));
        }
        Ok(())
    }

    /// True when `kappa` exceeds the practical generation limit; such runs
    /// are allowed but likely to exhaust their attempts.
    pub fn exceeds_practical_kappa(&self) -> bool {
        self.kappa > KAPPA_PRACTICAL_LIMIT
    }
}

/// A generated problem together with its known exact minimum.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedProblem<T> {
    pub problem: WplsProblem<T>,
    /// Exact minimum of the objective over all coefficient matrices.
    pub e_exact: T,
    /// Planted rank of the scaled design matrix.
    pub true_rank: usize,
    /// Trials-and-errors iterations consumed.
    pub attempts_used: usize,
}

/// Householder reflection `I - 2 v v' / (v'v)`: symmetric, orthogonal, and
/// an involution. Errors on the zero vector.
pub fn householder<T: Scalar>(v: &[T]) -> Result<Matrix<T>, LinalgError> {
    let norm_sq = v.iter().fold(T::zero(), |acc, &x| acc + x * x);
    if norm_sq.is_zero() {
        return Err(LinalgError::ZeroVector);
    }
    let two = T::of(2.0);
    let n = v.len();
    Ok(Matrix::from_fn(n, n, |i, j| {
        let outer = two * v[i] * v[j] / norm_sq;
        if i == j {
            T::one() - outer
        } else {
            -outer
        }
    }))
}

/// Diagonal spectrum factor: entry `i` (1-based) is
/// `kappa^((rank - i) / (2 (rank - 1)))`, so the squared extremes are `kappa`
/// and `1`. For `rank = 1` the exponent is undefined and the factor is `[1]`.
pub fn spectrum_diag<T: Scalar>(rank: usize, kappa: T) -> Matrix<T> {
    if rank == 1 {
        return Matrix::identity(1);
    }
    let denom = 2.0 * (rank as f64 - 1.0);
    let entries: Vec<T> = (1..=rank)
        .map(|i| kappa.powf(T::of((rank - i) as f64 / denom)))
        .collect();
    Matrix::from_diag(&entries)
}

/// Generates a synthetic problem. Deterministic for fixed parameters.
///
/// Draws come from xoshiro256++ seeded with `params.seed`, in this order: the
/// `m1` entries of the reflection vector for the left Householder matrix
/// (uniform on (-1,1)), the `n1` entries for the right one (same), the
/// `(m1 - rank) * n2` entries of the residual coefficients row-major (uniform
/// on (0,1)), the `n1 * n2` planted coefficients row-major (same), then per
/// attempt the `m1 * m2` candidate weights row-major (same). In the
/// measure-zero event that a diagonal weight comes out exactly zero, the
/// whole construction restarts from the next seed in a SplitMix64 chain.
pub fn generate<T: Scalar>(params: &GenParams) -> Result<GeneratedProblem<T>, LinalgError> {
    params.validate()?;
    let mut seed = params.seed;
    let mut attempts_used = 0;
    for _ in 0..params.max_attempts {
        match generate_from(params, seed, &mut attempts_used)? {
            Some(generated) => return Ok(generated),
            None => {
                // a zero diagonal weight: restart with the next derived seed
                seed = SplitMix64::new(seed).next_u64();
            }
        }
    }
    Err(LinalgError::GenerationFailed {
        attempts: attempts_used,
    })
}

/// One construction pass. Returns `Ok(None)` when a diagonal weight is
/// exactly zero, signalling the caller to reseed.
fn generate_from<T: Scalar>(
    params: &GenParams,
    seed: u64,
    attempts_used: &mut usize,
) -> Result<Option<GeneratedProblem<T>>, LinalgError> {
    let (n1, m1, m2, n2, r) = (params.n1, params.m1, params.m2, params.n2, params.rank);
    let mut rng = Xoshiro256PlusPlus::from_seed(seed);

    let u: Vec<T> = (0..m1).map(|_| T::of(rng.next_signed_unit())).collect();
    let left = householder(&u)?;
    let v: Vec<T> = (0..n1).map(|_| T::of(rng.next_signed_unit())).collect();
    let right = householder(&v)?;

    // A = M[:, 0..r] * D * N[0..r, :], rank r with eigenvalues of A'A
    // spanning exactly [1, kappa]
    let m_cols = Matrix::from_fn(m1, r, |i, j| left.get(i, j));
    let n_rows = Matrix::from_fn(r, n1, |i, j| right.get(i, j));
    let spectrum = spectrum_diag(r, T::of(params.kappa));
    let a = m_cols.matmul(&spectrum)?.matmul(&n_rows)?;

    // P = M[:, r..m1] * F lives in the orthogonal complement of range(A)
    let f = Matrix::from_fn(m1 - r, n2, |_, _| T::of(rng.next_open_unit()));
    let m_perp = Matrix::from_fn(m1, m1 - r, |i, j| left.get(i, r + j));
    let p = m_perp.matmul(&f)?;

    // h_i = max(|row sum of A|, |row sum of P|)^2 guarantees both A and P
    // factor through H^(1/2)
    let a_sums = a.row_sums();
    let p_sums = p.row_sums();
    let h: Vec<T> = a_sums
        .iter()
        .zip(&p_sums)
        .map(|(&sa, &sp)| {
            let m = sa.abs().max(sp.abs());
            m * m
        })
        .collect();
    if h.iter().any(|v| v.is_zero()) {
        return Ok(None);
    }

    let inv_sqrt_h: Vec<T> = h.iter().map(|&v| T::one() / v.sqrt()).collect();
    let sqrt_h: Vec<T> = h.iter().map(|&v| v.sqrt()).collect();

    // X = (H^(1/2))^+ A, and HZ = H^(1/2) (A V + P) plants the targets
    let x = a.scale_rows(&inv_sqrt_h);
    let planted = Matrix::from_fn(n1, n2, |_, _| T::of(rng.next_open_unit()));
    let hz = a.matmul(&planted)?.add(&p)?.scale_rows(&sqrt_h);
    let hz_scale = T::one() + hz.frobenius_norm();
    let factor_tol = T::of(params.factor_tol);

    // trials and errors: nonnegative w with row sums h and y solving w y = hz
    while *attempts_used < params.max_attempts {
        *attempts_used += 1;
        let t = Matrix::from_fn(m1, m2, |_, _| T::of(rng.next_open_unit()));
        let k = t.row_sums();
        let ratios: Vec<T> = h.iter().zip(&k).map(|(&hi, &ki)| hi / ki).collect();
        let w = t.scale_rows(&ratios);
        let y = svd::pinv(&w)?.matmul(&hz)?;
        let miss = w.matmul(&y)?.sub(&hz)?.frobenius_norm();
        if miss <= factor_tol * hz_scale {
            let problem = WplsProblem::new(x, y, w)?;
            let offsets = solver::reduce(&problem)
                .d
                .data()
                .iter()
                .fold(T::zero(), |acc, &v| acc + v);
            let p_norm = p.frobenius_norm();
            return Ok(Some(GeneratedProblem {
                problem,
                e_exact: p_norm * p_norm + offsets,
                true_rank: r,
                attempts_used: *attempts_used,
            }));
        }
    }
    Err(LinalgError::GenerationFailed {
        attempts: *attempts_used,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::svd::jacobi_svd;

    #[test]
    fn householder_reflects_first_axis() {
        let m = householder(&[1.0, 0.0]).unwrap();
        let expected = Matrix::from_rows(&[&[-1.0, 0.0], &[0.0, 1.0]]).unwrap();
        assert!(m.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn householder_is_involution() {
        let m = householder(&[0.3, -1.2, 0.7, 2.2]).unwrap();
        let prod = m.matmul(&m).unwrap();
        assert!(prod.max_abs_diff(&Matrix::identity(4)) < 1e-12);
    }

    #[test]
    fn householder_of_ones() {
        let m = householder(&[1.0, 1.0]).unwrap();
        let expected = Matrix::from_rows(&[&[0.0, -1.0], &[-1.0, 0.0]]).unwrap();
        assert!(m.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn householder_rejects_zero_vector() {
        assert!(matches!(
            householder::<f64>(&[0.0, 0.0]),
            Err(LinalgError::ZeroVector)
        ));
    }

    #[test]
    fn spectrum_diag_cases() {
        assert_eq!(spectrum_diag::<f64>(3, 1.0), Matrix::identity(3));
        assert_eq!(
            spectrum_diag::<f64>(2, 16.0),
            Matrix::from_diag(&[4.0, 1.0])
        );
        assert_eq!(
            spectrum_diag::<f64>(3, 16.0),
            Matrix::from_diag(&[4.0, 2.0, 1.0])
        );
        assert_eq!(spectrum_diag::<f64>(1, 1000.0), Matrix::identity(1));
    }

    #[test]
    fn invalid_params_are_rejected() {
        // m1 must exceed n1
        assert!(GenParams::new(8, 8, 16, 4, 8, 16.0, 1).validate().is_err());
        // m2 must be at least m1
        assert!(GenParams::new(8, 16, 8, 4, 8, 16.0, 1).validate().is_err());
        // rank within 1..=n1
        assert!(GenParams::new(8, 16, 32, 4, 9, 16.0, 1).validate().is_err());
        assert!(GenParams::new(8, 16, 32, 4, 0, 16.0, 1).validate().is_err());
        // kappa at least one
        assert!(GenParams::new(8, 16, 32, 4, 8, 0.5, 1).validate().is_err());
        let good = GenParams::new(8, 16, 32, 4, 8, 16.0, 1);
        assert!(good.validate().is_ok());
        assert!(!good.exceeds_practical_kappa());
        let hot = GenParams::new(8, 16, 32, 4, 8, 8192.0, 1);
        assert!(hot.exceeds_practical_kappa());
    }

    #[test]
    fn generated_problem_postconditions() {
        let params = GenParams::new(8, 16, 32, 4, 8, 16.0, 42);
        let g = generate::<f64>(&params).unwrap();
        let (m1, n1, m2, n2) = g.problem.dims();
        assert_eq!((m1, n1, m2, n2), (16, 8, 32, 4));
        assert!(g.e_exact > 0.0);
        assert_eq!(g.true_rank, 8);
        assert!(g.attempts_used >= 1);

        // row sums of w equal the diagonal weights used to scale x
        let rp = solver::reduce(&g.problem);
        let sqrt_h: Vec<f64> = rp.h.iter().map(|&v| v.sqrt()).collect();
        let a = g.problem.x().scale_rows(&sqrt_h);
        let svd = jacobi_svd(&a).unwrap();
        assert_eq!(svd.rank(m1, n1), 8);
        let s_max = svd.singular_values[0];
        let s_min = svd.singular_values[7];
        let ratio = (s_max / s_min).powi(2);
        assert!((ratio - 16.0).abs() <= 16.0 * 1e-6, "ratio={ratio}");
        assert!((s_min - 1.0).abs() <= 1e-6);
    }

    #[test]
    fn generation_is_deterministic() {
        let params = GenParams::new(8, 16, 32, 4, 7, 64.0, 7);
        let g1 = generate::<f64>(&params).unwrap();
        let g2 = generate::<f64>(&params).unwrap();
        assert_eq!(g1, g2);
    }

    #[test]
    fn different_seeds_differ() {
        let a = generate::<f64>(&GenParams::new(8, 16, 32, 4, 8, 16.0, 1)).unwrap();
        let b = generate::<f64>(&GenParams::new(8, 16, 32, 4, 8, 16.0, 2)).unwrap();
        assert_ne!(a.problem.x(), b.problem.x());
    }

    #[test]
    fn solver_reaches_exact_minimum() {
        let params = GenParams::new(8, 16, 32, 4, 7, 256.0, 11);
        let g = generate::<f64>(&params).unwrap();
        let report = solver::solve_123(&g.problem).unwrap();
        let rel = (report.e_method - g.e_exact) / g.e_exact;
        assert!(rel < 1e-9, "rel={rel:e}");
        assert!(rel > -1e-9, "rel={rel:e}");
        assert_eq!(report.detected_rank, 7);
    }

    #[test]
    fn full_rank_methods_agree() {
        let params = GenParams::new(8, 16, 32, 4, 8, 16.0, 13);
        let g = generate::<f64>(&params).unwrap();
        let c123 = solver::solve_123(&g.problem).unwrap().c;
        let cdag = solver::solve_dagger(&g.problem).unwrap().c;
        let rel = c123.sub(&cdag).unwrap().frobenius_norm() / cdag.frobenius_norm();
        assert!(rel < 1e-6, "rel={rel:e}");
    }

    #[test]
    fn impossible_tolerance_reports_attempts() {
        let mut params = GenParams::new(8, 16, 32, 4, 8, 16.0, 3);
        params.factor_tol = 1e-300;
        params.max_attempts = 3;
        match generate::<f64>(&params) {
            Err(LinalgError::GenerationFailed { attempts }) => assert_eq!(attempts, 3),
            other => panic!("expected generation failure, got {other:?}"),
        }
    }
}
