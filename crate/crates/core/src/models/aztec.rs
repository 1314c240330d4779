//! Aztec diamond: large Schröder paths from (-i, i) to (j, j).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{check_range, ModelError};
use crate::gv::ExactMatrix;
use crate::kernel::{binomial, pow2, trinomial, ExactInteger, ExactRational};

/// Σ_p (i+j-p)!/(p!(i-p)!(j-p)!): paths with p horizontal steps. Zero for negative indices.
pub fn aztec_entry(i: i64, j: i64) -> ExactInteger {
    if i < 0 || j < 0 {
        return BigInt::zero();
    }
    (0..=i.min(j))
        .map(|p| trinomial(i + j - p, p, i - p, j - p).expect("parts sum by construction"))
        .sum()
}

pub fn aztec_partition(n: i64) -> ExactInteger {
    pow2((n * (n + 1) / 2) as u32)
}

/// L = C(i,j) and L⁻¹ = (-1)^{i+j} C(i,j); shared with both staircase models.
pub fn aztec_closed_l(size: usize) -> (ExactMatrix, ExactMatrix) {
    let l = ExactMatrix::from_integers(size, size, |i, j| binomial(i as i64, j as i64));
    let l_inv = ExactMatrix::from_integers(size, size, |i, j| {
        let b = binomial(i as i64, j as i64);
        if (i + j) % 2 == 0 {
            b
        } else {
            -b
        }
    });
    (l, l_inv)
}

/// U_{i,j} = 2^i C(j, i).
pub fn aztec_closed_u(size: usize) -> ExactMatrix {
    ExactMatrix::from_integers(size, size, |i, j| pow2(i as u32) * binomial(j as i64, i as i64))
}

pub fn aztec_u_diagonal(size: usize) -> Vec<ExactRational> {
    (0..size).map(|i| BigRational::from_integer(pow2(i as u32))).collect()
}

/// Paths from (-i, i) to the exit (ℓ, 2n-ℓ): A_{i+ℓ-n, n}.
pub fn aztec_last_column(i: i64, n: i64, ell: i64) -> ExactInteger {
    aztec_entry(i + ell - n, n)
}

/// 2^{-n} Σ_{p ≤ ℓ} C(n, p).
pub fn aztec_one_point(n: i64, ell: i64) -> Result<ExactRational, ModelError> {
    check_range("ℓ", ell, 0, n)?;
    let sum: BigInt = (0..=ell).map(|p| binomial(n, p)).sum();
    Ok(BigRational::new(sum, pow2(n as u32)))
}

/// Continuations from the exit (ℓ, 2n-ℓ) to (k, k) whose first step leaves the diamond.
pub fn aztec_escape(ell: i64, k: i64, n: i64) -> ExactInteger {
    aztec_entry(n - ell, k - n - 1) + aztec_entry(n - ell - 1, k - n - 1)
}

/// The full closed-form U, for callers that want more than the diagonal.
pub fn aztec_closed_lu(n: usize) -> (ExactMatrix, ExactMatrix, ExactMatrix) {
    let (l, l_inv) = aztec_closed_l(n + 1);
    (l, aztec_closed_u(n + 1), l_inv)
}
