//! Red paths on the half-hexagon: k paths with steps (0,-2) and (1,-1)
//! from (i, i+2n+2) to (2j, 0).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{check_range, ModelError};
use crate::gv::ExactMatrix;
use crate::kernel::{binomial, factorial, ExactInteger, ExactRational};

fn fact(n: i64) -> ExactInteger {
    factorial(n as u64)
}

/// C(j+n+1, 2j-i).
pub fn red_entry(i: i64, j: i64, n: i64) -> ExactInteger {
    binomial(j + n + 1, 2 * j - i)
}

/// U_{i,i} = (2n+2+2i)! i! / ((2n+2+i)! (2i)!).
pub fn red_u_entry(n: i64, i: i64) -> ExactRational {
    BigRational::new(fact(2 * n + 2 + 2 * i) * fact(i), fact(2 * n + 2 + i) * fact(2 * i))
}

pub fn red_u_diagonal(n: i64, size: usize) -> Vec<ExactRational> {
    (0..size as i64).map(|i| red_u_entry(n, i)).collect()
}

/// Z₂(n, k; 0) = Π_{i=0}^{k-1} U_{i,i}.
pub fn red_partition(n: i64, k: i64) -> ExactInteger {
    let p = (0..k).fold(BigRational::one(), |acc, i| acc * red_u_entry(n, i));
    debug_assert!(p.is_integer());
    p.to_integer()
}

/// L_{i,j} = i!(j+2n+2)! / ((i-j)!(2j-i)!(i+2n+2)!) and its inverse.
pub fn red_closed_l(n: i64, size: usize) -> (ExactMatrix, ExactMatrix) {
    let l = ExactMatrix::from_fn(size, size, |i, j| {
        let (i, j) = (i as i64, j as i64);
        if j > i || 2 * j < i {
            return BigRational::zero();
        }
        BigRational::new(
            fact(i) * fact(j + 2 * n + 2),
            fact(i - j) * fact(2 * j - i) * fact(i + 2 * n + 2),
        )
    });
    let l_inv = ExactMatrix::from_fn(size, size, |i, j| {
        let (i, j) = (i as i64, j as i64);
        if j > i {
            return BigRational::zero();
        }
        if j == 0 {
            return if i == 0 {
                BigRational::one()
            } else {
                BigRational::zero()
            };
        }
        let v = BigRational::new(
            fact(j + 2 * n + 2) * fact(2 * i - j - 1),
            fact(i + 2 * n + 2) * fact(i - j) * fact(j - 1),
        );
        if (i + j) % 2 == 0 {
            v
        } else {
            -v
        }
    });
    (l, l_inv)
}

/// Paths from (i, i+2n+2) to the exit (2k-2, 2ℓ): C(n+k-ℓ, 2k-2-i).
pub fn red_last_column(i: i64, n: i64, k: i64, ell: i64) -> ExactInteger {
    binomial(n + k - ell, 2 * k - 2 - i)
}

/// (2 / C(2n+2k, 2n+3)) Σ_{s=ℓ}^{n+1} C(k+n-s-1, k-2) C(k+n+s, k-2), for k ≥ 2.
///
/// The binomial arguments are shifted by one from the commonly quoted statement, which
/// gives H(0) = 6/5 at (n, k) = (0, 3); this form is the one the L⁻¹ row actually produces.
pub fn red_one_point(n: i64, k: i64, ell: i64) -> Result<ExactRational, ModelError> {
    check_range("ℓ", ell, 0, n + 1)?;
    if k < 2 {
        return Err(ModelError::Unsupported(format!(
            "the red-path one-point formula needs k >= 2, got k = {k}"
        )));
    }
    let sum: BigInt = (ell..=n + 1)
        .map(|s| binomial(k + n - s - 1, k - 2) * binomial(k + n + s, k - 2))
        .sum();
    Ok(BigRational::new(sum * 2, binomial(2 * n + 2 * k, 2 * n + 3)))
}

/// Continuations after the exit's diagonal step to (2k-2+p, -p): C(p+ℓ-1, ℓ).
pub fn red_escape(p: i64, ell: i64) -> ExactInteger {
    binomial(p + ell - 1, ell)
}

/// Whether the Dyck and red partition products agree at (n, k).
pub fn partition_products_agree(n: i64, k: i64) -> bool {
    super::dyck::dyck_partition(n, k) == red_partition(n, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gv::det_bareiss;
    use crate::kernel::int_rational;

    #[test]
    fn entry_examples() {
        assert_eq!(red_entry(0, 0, 3), BigInt::one());
        assert!(red_entry(2, 0, 3).is_zero());
        assert_eq!(red_entry(1, 1, 1), BigInt::from(3));
    }

    #[test]
    fn partition_examples() {
        for n in 0..6 {
            assert_eq!(red_partition(n, 1), BigInt::one());
        }
        let a = ExactMatrix::from_integers(2, 2, |i, j| red_entry(i as i64, j as i64, 1));
        assert_eq!(det_bareiss(&a).unwrap(), BigRational::from_integer(red_partition(1, 2)));
        for n in 0..=8 {
            for k in 1..=8 {
                assert!(partition_products_agree(n, k), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn one_point_examples() {
        for n in 0..5 {
            for k in 2..6 {
                assert_eq!(red_one_point(n, k, 0).unwrap(), int_rational(1));
            }
        }
        assert!(red_one_point(2, 3, 4).is_err());
        assert!(red_one_point(2, 1, 0).is_err());
    }
}
