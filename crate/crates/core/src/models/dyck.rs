//! Dyck paths on the half-hexagon: n+1 paths from (-2i, 0) to (2k+2j, 0), weakly above the axis.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{check_range, ModelError};
use crate::gv::ExactMatrix;
use crate::kernel::{
    ballot, binomial, catalan, factorial, falling_factorial, int_rational, ExactInteger, ExactRational,
};

fn fact(n: i64) -> ExactInteger {
    factorial(n as u64)
}

fn frac(num: ExactInteger, den: ExactInteger) -> ExactRational {
    BigRational::new(num, den)
}

/// c_{k+i+j}.
pub fn dyck_entry(i: i64, j: i64, k: i64) -> ExactInteger {
    catalan(k + i + j).expect("nonnegative index")
}

/// Unit lower L with L⁻¹A upper triangular, and its inverse, both (n+1)x(n+1).
pub fn dyck_closed_l(n: usize, k: i64) -> (ExactMatrix, ExactMatrix) {
    dyck_closed_l_of_size(n + 1, k)
}

pub fn dyck_closed_l_of_size(size: usize, k: i64) -> (ExactMatrix, ExactMatrix) {
    let l = ExactMatrix::from_fn(size, size, |i, j| {
        let (i, j) = (i as i64, j as i64);
        if j > i {
            return BigRational::zero();
        }
        frac(
            fact(2 * k + 2 * i) * fact(k + j) * fact(k + 2 * j + 1) * binomial(i, j),
            fact(2 * k + 2 * j) * fact(k + i) * fact(k + i + j + 1),
        )
    });
    let l_inv = ExactMatrix::from_fn(size, size, |i, j| {
        let (i, j) = (i as i64, j as i64);
        if j > i {
            return BigRational::zero();
        }
        let v = frac(
            fact(2 * k + 2 * i) * fact(k + j) * fact(k + i + j) * binomial(i, j),
            fact(2 * k + 2 * j) * fact(k + i) * fact(k + 2 * i),
        );
        if (i + j) % 2 == 0 {
            v
        } else {
            -v
        }
    });
    (l, l_inv)
}

/// U_{i,i} = (2i+1)!(2k+2i)! / ((k+2i+1)!(k+2i)!).
pub fn dyck_u_entry(i: i64, k: i64) -> ExactRational {
    frac(
        fact(2 * i + 1) * fact(2 * k + 2 * i),
        fact(k + 2 * i + 1) * fact(k + 2 * i),
    )
}

pub fn dyck_u_diagonal(size: usize, k: i64) -> Vec<ExactRational> {
    (0..size as i64).map(|i| dyck_u_entry(i, k)).collect()
}

/// Z(n, k; 0) = Π_{i=0}^{n} U_{i,i}.
pub fn dyck_partition(n: i64, k: i64) -> ExactInteger {
    let p = (0..=n).fold(BigRational::one(), |acc, i| acc * dyck_u_entry(i, k));
    debug_assert!(p.is_integer());
    p.to_integer()
}

/// Paths from (-2i, 0) to the exit (2k+n-ℓ, n+ℓ): ballot(2k+2i+n-ℓ, n+ℓ).
pub fn dyck_last_column(i: i64, n: i64, k: i64, ell: i64) -> ExactInteger {
    ballot(2 * k + 2 * i + n - ell, n + ell)
}

/// C(2n+2k, n+ℓ)⁻¹ Σ_{s=0}^{n} C(n+ℓ+1, 2n+1-2s) C(2n+k-s, n+ℓ).
pub fn dyck_one_point(n: i64, k: i64, ell: i64) -> Result<ExactRational, ModelError> {
    check_range("ℓ", ell, 0, n + k)?;
    Ok(frac(slem_sum(n, k, ell), binomial(2 * n + 2 * k, n + ell)))
}

/// Continuations from the exit after an up step to (2k+n+p, n+p): C(p+ℓ-1, ℓ).
pub fn dyck_escape(p: i64, ell: i64) -> ExactInteger {
    binomial(p + ell - 1, ell)
}

/// Σ_{s=0}^{n} C(n+ℓ+1, 2n+1-2s) C(2n+k-s, n+ℓ); equals C(2n+2k, n+ℓ) when ℓ ≤ n.
pub fn slem_sum(n: i64, k: i64, ell: i64) -> ExactInteger {
    (0..=n)
        .map(|s| binomial(n + ell + 1, 2 * n + 1 - 2 * s) * binomial(2 * n + k - s, n + ell))
        .sum()
}

/// C(2j+n+ℓ-1, n+ℓ)⁻¹ Σ_{s=n-j+1}^{n} C(n+ℓ+1, 2n+1-2s) C(j+ℓ+s-1, n+ℓ); 1 for ℓ > n, 1 ≤ j ≤ n+1.
pub fn tlem_ratio(n: i64, ell: i64, j: i64) -> ExactRational {
    let sum: BigInt = (n - j + 1..=n)
        .map(|s| binomial(n + ell + 1, 2 * n + 1 - 2 * s) * binomial(j + ell + s - 1, n + ell))
        .sum();
    frac(sum, binomial(2 * j + n + ell - 1, n + ell))
}

/// P_{n,ℓ}(k) in its falling-factorial form, at any rational k.
pub fn pols_p(n: i64, ell: i64, k: &ExactRational) -> ExactRational {
    let ff = |x: ExactRational, m: i64| falling_factorial(&x, m).expect("m >= 0");
    let int = |v: i64| int_rational(v);
    let two = int(2);
    let mut acc = BigRational::zero();
    for r in 0..=n {
        let sign_pow = BigInt::from(-4).pow((n - r) as u32);
        let term = BigRational::from_integer(sign_pow * binomial(n, r))
            * ff(&two * k + int(2 * r + n - ell), 2 * r)
            * ff(k + int(n + r), r)
            * ff(k + int(n - ell), n - r)
            * ff(k + int(2 * n + 1), n - r)
            * ff(k + int(n) - frac(BigInt::one(), BigInt::from(2)), n - r);
        acc += term;
    }
    acc
}

/// Q_{n,ℓ}(k) = (2n+1)!/(n+ℓ+1) Σ_s C(n+ℓ+1, 2n+1-2s) (k+2n-s)_{n-s} (n+k-ℓ)_s.
pub fn pols_q(n: i64, ell: i64, k: &ExactRational) -> ExactRational {
    let ff = |x: ExactRational, m: i64| falling_factorial(&x, m).expect("m >= 0");
    let sum = (0..=n).fold(BigRational::zero(), |acc, s| {
        acc + BigRational::from_integer(binomial(n + ell + 1, 2 * n + 1 - 2 * s))
            * ff(k + int_rational(2 * n - s), n - s)
            * ff(k + int_rational(n - ell), s)
    });
    frac(fact(2 * n + 1), BigInt::from(n + ell + 1)) * sum
}

/// (-1)^n (2n+1)!(j-1)!(n+2j+ℓ-1)! / ((n+ℓ+1)(2j-1)!(ℓ+j-1)!): the common value at k = -j-n.
pub fn pols_value(n: i64, ell: i64, j: i64) -> ExactRational {
    let v = frac(
        fact(2 * n + 1) * fact(j - 1) * fact(n + 2 * j + ell - 1),
        BigInt::from(n + ell + 1) * fact(2 * j - 1) * fact(ell + j - 1),
    );
    if n % 2 == 0 {
        v
    } else {
        -v
    }
}

/// Σ_r (-1)^{r+i} C(k+r+i, i-j) C(k+i+j+1, i-r) C(k+r, r) C(2k+2r+2j, 2j).
pub fn helplem_f(k: i64, i: i64, j: i64) -> ExactInteger {
    (0..=i)
        .map(|r| {
            let t = binomial(k + r + i, i - j)
                * binomial(k + i + j + 1, i - r)
                * binomial(k + r, r)
                * binomial(2 * k + 2 * r + 2 * j, 2 * j);
            if (r + i) % 2 == 0 {
                t
            } else {
                -t
            }
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gv::det_bareiss;
    use crate::kernel::rational;

    #[test]
    fn entry_examples() {
        assert_eq!(dyck_entry(0, 0, 1), BigInt::one());
        assert_eq!(dyck_entry(1, 1, 1), BigInt::from(5));
        assert_eq!(dyck_entry(1, 0, 2), BigInt::from(5));
    }

    #[test]
    fn closed_l_examples() {
        let (l, l_inv) = dyck_closed_l(4, 3);
        assert!(l.is_unit_lower_triangular());
        assert_eq!(&l * &l_inv, ExactMatrix::identity(5));
        assert_eq!(dyck_u_diagonal(2, 2), vec![int_rational(2), rational(3, 2)]);
        assert_eq!(dyck_partition(1, 2), BigInt::from(3));
        assert_eq!(dyck_partition(2, 1), BigInt::one());
    }

    #[test]
    fn one_point_examples() {
        for n in 0..5 {
            for k in 1..5 {
                for ell in 0..=n {
                    assert!(dyck_one_point(n, k, ell).unwrap().is_one());
                }
            }
        }
        assert_eq!(dyck_one_point(1, 2, 3).unwrap(), rational(2, 3));
        assert!(dyck_one_point(1, 1, 2).unwrap().is_one());
        assert!(dyck_one_point(1, 1, 3).is_err());
    }

    #[test]
    fn escape_and_last_column_examples() {
        assert_eq!(dyck_escape(4, 0), BigInt::one());
        assert_eq!(dyck_escape(1, 5), BigInt::one());
        assert_eq!(dyck_escape(3, 2), BigInt::from(6));
        assert_eq!(dyck_last_column(0, 1, 1, 2), BigInt::zero());
        assert_eq!(dyck_last_column(1, 1, 1, 2), BigInt::one());
        assert_eq!(dyck_last_column(1, 1, 1, 0), BigInt::from(5));
    }

    /// At ℓ = 0 the replacement column is not c_{n+k+i} (it is for n = 1, where
    /// ballot(2m+1, 1) = c_{m+1}), yet the determinant does not change.
    #[test]
    fn ell_zero_column_differs_but_determinant_agrees() {
        for n in 1..=5i64 {
            for k in 1..=5i64 {
                let a = ExactMatrix::from_integers(n as usize + 1, n as usize + 1, |i, j| {
                    dyck_entry(i as i64, j as i64, k)
                });
                let b: Vec<_> = (0..=n)
                    .map(|i| BigRational::from_integer(dyck_last_column(i, n, k, 0)))
                    .collect();
                if n >= 2 {
                    assert_ne!(b, a.column(n as usize), "n={n} k={k}");
                }
                let modified = a.with_last_column(&b).unwrap();
                assert_eq!(det_bareiss(&modified).unwrap(), det_bareiss(&a).unwrap(), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn helplem_values() {
        for k in 0..6 {
            for i in 0..6 {
                for j in 0..=i {
                    let expect = if i == j {
                        binomial(k + i, k) * (2 * i + 1)
                    } else {
                        BigInt::zero()
                    };
                    assert_eq!(helplem_f(k, i, j), expect, "k={k} i={i} j={j}");
                }
            }
        }
    }

    #[test]
    fn pols_agree_at_positive_k() {
        for n in 0..=4 {
            for ell in 0..=n + 3 {
                for k in ell.max(1)..ell.max(1) + 4 {
                    let k = int_rational(k);
                    assert_eq!(pols_p(n, ell, &k), pols_q(n, ell, &k), "n={n} ℓ={ell} k={k}");
                }
            }
        }
    }
}
