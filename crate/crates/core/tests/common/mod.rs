#![allow(dead_code)] // each test binary uses its own subset of these helpers
//! Shared builders for randomized test problems.

use wpls_core::matrix::Matrix;
use wpls_core::rng::Xoshiro256PlusPlus;
use wpls_core::solver::WplsProblem;

pub fn random_matrix(rows: usize, cols: usize, seed: u64) -> Matrix<f64> {
    let mut rng = Xoshiro256PlusPlus::from_seed(seed);
    Matrix::from_fn(rows, cols, |_, _| rng.next_signed_unit())
}

pub fn random_nonneg(rows: usize, cols: usize, seed: u64) -> Matrix<f64> {
    let mut rng = Xoshiro256PlusPlus::from_seed(seed);
    Matrix::from_fn(rows, cols, |_, _| rng.next_open_unit())
}

/// Matrix of the given column rank, as a product of thin random factors.
pub fn random_rank(rows: usize, cols: usize, rank: usize, seed: u64) -> Matrix<f64> {
    let left = random_matrix(rows, rank, seed);
    let right = random_matrix(rank, cols, seed.wrapping_add(0x9E37));
    left.matmul(&right).unwrap()
}

/// Random pairing problem; `x_rank` below `n1` plants a rank deficiency.
pub fn random_problem(
    m1: usize,
    n1: usize,
    m2: usize,
    n2: usize,
    x_rank: usize,
    seed: u64,
) -> WplsProblem<f64> {
    let x = if x_rank < n1 {
        random_rank(m1, n1, x_rank, seed)
    } else {
        random_matrix(m1, n1, seed)
    };
    let y = random_matrix(m2, n2, seed.wrapping_add(1));
    let w = random_nonneg(m1, m2, seed.wrapping_add(2));
    WplsProblem::new(x, y, w).unwrap()
}

pub fn rel_diff(a: &Matrix<f64>, b: &Matrix<f64>) -> f64 {
    a.sub(b).unwrap().frobenius_norm() / (1.0 + b.frobenius_norm())
}
