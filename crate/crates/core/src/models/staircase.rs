//! The staircase model in its two path formulations.
//!
//! First: left/up paths from (2i, 0) to (0, j). Second: (1,0)/(1,1) paths from
//! (2n-2i, 0) to (2n, j). Both share L = C(i, j) and U_{i,i} = 2^i.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{check_range, ModelError};
use crate::kernel::{binomial, pow2, ExactInteger, ExactRational};

/// C(2i+j, j).
pub fn staircase_entry(i: i64, j: i64) -> ExactInteger {
    binomial(2 * i + j, j)
}

/// C(2i, j).
pub fn staircase_alt_entry(i: i64, j: i64) -> ExactInteger {
    binomial(2 * i, j)
}

/// 2^{n(n+1)/2}, for either formulation.
pub fn staircase_partition(n: i64) -> ExactInteger {
    pow2((n * (n + 1) / 2) as u32)
}

/// Paths from (2i, 0) to the exit (ℓ, n): C(n+2i-ℓ, n), zero when the exit lies right of the start.
pub fn staircase_last_column(i: i64, n: i64, ell: i64) -> ExactInteger {
    if 2 * i < ell {
        return BigInt::zero();
    }
    binomial(n + 2 * i - ell, n)
}

/// Paths from (2n-2i, 0) to the exit (ℓ, n): C(ℓ+2i-2n, n), zero when the exit lies left of the start.
pub fn staircase_alt_last_column(i: i64, n: i64, ell: i64) -> ExactInteger {
    if ell + 2 * i < 2 * n {
        return BigInt::zero();
    }
    binomial(ell + 2 * i - 2 * n, n)
}

fn partial_binomial_sum(n: i64, upto: i64) -> ExactRational {
    let sum: BigInt = (0..=upto.min(n)).map(|k| binomial(n, k)).sum();
    BigRational::new(sum, pow2(n as u32))
}

/// 2^{-n} Σ_{k=0}^{min(n, 2n-ℓ)} C(n, k).
pub fn staircase_one_point(n: i64, ell: i64) -> Result<ExactRational, ModelError> {
    check_range("ℓ", ell, 0, 2 * n)?;
    Ok(partial_binomial_sum(n, 2 * n - ell))
}

/// 2^{-n} Σ_{k=0}^{ℓ-n} C(n, k); zero for ℓ < n.
pub fn staircase_alt_one_point(n: i64, ell: i64) -> Result<ExactRational, ModelError> {
    check_range("ℓ", ell, 0, 2 * n)?;
    Ok(partial_binomial_sum(n, ell - n))
}

/// Paths from the exit (ℓ, n), first step up, to (0, p): C(p-n-1+ℓ, ℓ).
pub fn staircase_escape(n: i64, p: i64, ell: i64) -> ExactInteger {
    if p <= n {
        return BigInt::zero();
    }
    binomial(p - n - 1 + ell, ell)
}

/// Paths from the exit (ℓ, n), first step (1,1), to (2n, p): C(2n-ℓ-1, p-n-1).
pub fn staircase_alt_escape(n: i64, p: i64, ell: i64) -> ExactInteger {
    if 2 * n - ell - 1 < 0 {
        return BigInt::zero();
    }
    binomial(2 * n - ell - 1, p - n - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gv::{det_bareiss, ExactMatrix};
    use crate::kernel::{int_rational, negative_upper_index_hits, rational};
    use num_traits::One;

    #[test]
    fn entry_and_partition_examples() {
        for j in 0..6 {
            assert_eq!(staircase_entry(0, j), BigInt::one());
        }
        let a = ExactMatrix::from_integers(4, 4, |i, j| staircase_entry(i as i64, j as i64));
        let b = ExactMatrix::from_integers(4, 4, |i, j| staircase_alt_entry(i as i64, j as i64));
        assert_eq!(det_bareiss(&a).unwrap(), int_rational(64));
        assert_eq!(det_bareiss(&b).unwrap(), int_rational(64));
    }

    #[test]
    fn one_point_examples() {
        for n in 0..6 {
            assert!(staircase_one_point(n, 0).unwrap().is_one());
            for ell in 0..n {
                assert!(staircase_alt_one_point(n, ell).unwrap().is_zero());
            }
        }
        assert_eq!(staircase_one_point(2, 3).unwrap(), rational(3, 4));
        assert!(staircase_one_point(2, 5).is_err());
    }

    #[test]
    fn escape_examples() {
        for n in 1..5 {
            assert_eq!(staircase_escape(n, n + 1, 0), BigInt::one());
        }
        assert_eq!(staircase_escape(2, 4, 3), BigInt::from(4));
        assert_eq!(staircase_alt_escape(2, 3, 2), BigInt::one());
    }

    #[test]
    fn formulas_never_touch_negative_upper_index() {
        let before = negative_upper_index_hits();
        for n in 1..8 {
            for ell in 0..=2 * n {
                for i in 0..=n {
                    staircase_last_column(i, n, ell);
                    staircase_alt_last_column(i, n, ell);
                }
                for p in n + 1..3 * n {
                    staircase_escape(n, p, ell);
                    staircase_alt_escape(n, p, ell);
                }
            }
        }
        assert_eq!(negative_upper_index_hits(), before);
    }
}
