//! Alternating sign matrix counts and their vertically symmetric refinement.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{check_range, ModelError};
use crate::kernel::{binomial, factorial, pow2, ExactInteger, ExactRational, KernelError};

fn fact(n: i64) -> ExactInteger {
    factorial(n as u64)
}

/// Π_{i=0}^{n-1} (3i+1)!/(n+i)!.
pub fn n_asm(n: i64) -> Result<ExactInteger, ModelError> {
    check_range("n", n, 1, i64::MAX)?;
    let q = (0..n).fold(BigRational::one(), |acc, i| {
        acc * BigRational::new(fact(3 * i + 1), fact(n + i))
    });
    Ok(q.to_integer())
}

/// N_ASM(n, ℓ)/N_ASM(n) = C(n+ℓ-2, n-1) C(2n-1-ℓ, n-1) / C(3n-2, n-1).
pub fn asm_refined_ratio(n: i64, ell: i64) -> Result<ExactRational, ModelError> {
    check_range("n", n, 1, i64::MAX)?;
    check_range("ℓ", ell, 1, n)?;
    Ok(BigRational::new(
        binomial(n + ell - 2, n - 1) * binomial(2 * n - 1 - ell, n - 1),
        binomial(3 * n - 2, n - 1),
    ))
}

/// ASMs of size n whose first-row 1 sits in column ℓ.
pub fn n_asm_refined(n: i64, ell: i64) -> Result<ExactInteger, ModelError> {
    let q = asm_refined_ratio(n, ell)? * BigRational::from_integer(n_asm(n)?);
    debug_assert!(q.is_integer());
    Ok(q.to_integer())
}

fn check_odd(size: i64) -> Result<i64, ModelError> {
    if size < 1 || size % 2 == 0 {
        return Err(ModelError::Unsupported(format!(
            "VSASM size must be odd and positive, got {size}"
        )));
    }
    Ok((size - 1) / 2)
}

/// 2^{-n} Π_{i=1}^{n} (6i-2)!(2i-1)! / ((4i-1)!(4i-2)!), for size 2n+1.
pub fn n_vsasm(size: i64) -> Result<ExactInteger, ModelError> {
    let n = check_odd(size)?;
    let q = (1..=n).fold(BigRational::new(BigInt::one(), pow2(n as u32)), |acc, i| {
        acc * BigRational::new(fact(6 * i - 2) * fact(2 * i - 1), fact(4 * i - 1) * fact(4 * i - 2))
    });
    debug_assert!(q.is_integer());
    Ok(q.to_integer())
}

/// VSASMs of size 2n+1 whose first-column 1 sits in row ℓ, by the alternating sum
/// N_VSASM(2n-1)/(4n-2)! Σ_{i=1}^{ℓ-1} (-1)^{ℓ+i-1} (2n+i-2)!(4n-i-1)! / ((i-1)!(2n-i)!).
pub fn n_vsasm_refined(size: i64, ell: i64) -> Result<ExactInteger, ModelError> {
    let n = check_odd(size)?;
    check_range("size", size, 3, i64::MAX)?;
    check_range("ℓ", ell, 1, size)?;
    if ell == size {
        return Ok(BigInt::zero());
    }
    let mut sum = BigInt::zero();
    for i in 1..ell {
        let t = fact(2 * n + i - 2) * fact(4 * n - i - 1) / (fact(i - 1) * fact(2 * n - i));
        if (ell + i - 1) % 2 == 0 {
            sum += t;
        } else {
            sum -= t;
        }
    }
    let q = BigRational::new(sum * n_vsasm(2 * n - 1)?, fact(4 * n - 2));
    debug_assert!(q.is_integer());
    Ok(q.to_integer())
}

/// h(t) = Σ_ℓ N_VSASM(size, ℓ)/N_VSASM(size) t^{ℓ-1}.
pub fn vsasm_generating(size: i64, t: &ExactRational) -> Result<ExactRational, ModelError> {
    check_range("size", size, 3, i64::MAX)?;
    let total = BigRational::from_integer(n_vsasm(size)?);
    let mut acc = BigRational::zero();
    let mut power = BigRational::one();
    for ell in 1..=size {
        acc += BigRational::from_integer(n_vsasm_refined(size, ell)?) * &power;
        power *= t;
    }
    Ok(acc / total)
}

/// Both sides of the VSASM/ASM refined generating function identity at size 2n+1:
/// (1/N_VSASM(2n-1)) Σ_ℓ N_VSASM(2n+1, ℓ) t^{ℓ-1} and
/// (1/N_ASM(2n-1)) (t/(t+1)) Σ_ℓ N_ASM(2n, ℓ) t^{ℓ-1}, with ℓ over [1, 2n].
pub fn raz_strog_sides(size: i64, t: &ExactRational) -> Result<(ExactRational, ExactRational), ModelError> {
    let n = check_odd(size)?;
    check_range("size", size, 3, i64::MAX)?;
    if *t == -BigRational::one() {
        return Err(KernelError::Domain {
            what: "t",
            bound: "!= -1",
            value: "-1".into(),
        }
        .into());
    }
    let mut lhs = BigRational::zero();
    let mut rhs = BigRational::zero();
    let mut power = BigRational::one();
    for ell in 1..=2 * n {
        lhs += BigRational::from_integer(n_vsasm_refined(size, ell)?) * &power;
        rhs += BigRational::from_integer(n_asm_refined(2 * n, ell)?) * &power;
        power *= t;
    }
    lhs /= BigRational::from_integer(n_vsasm(2 * n - 1)?);
    rhs = rhs * t / (t + BigRational::one()) / BigRational::from_integer(n_asm(2 * n - 1)?);
    Ok((lhs, rhs))
}

pub fn raz_strog_check(size: i64, t: &ExactRational) -> Result<bool, ModelError> {
    let (lhs, rhs) = raz_strog_sides(size, t)?;
    Ok(lhs == rhs)
}

/// Σ_{p=0}^{min(k-1, ñ-ℓ)} C(k-1, p) C(ñ-ℓ, p): single osculating paths from row ℓ to the extension.
pub fn vsasm_escape(ell: i64, k: i64, size: i64) -> ExactInteger {
    let top = (k - 1).min(size - ell);
    (0..=top).map(|p| binomial(k - 1, p) * binomial(size - ell, p)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{int_rational, rational};

    #[test]
    fn asm_counts() {
        let expect = [1, 2, 7, 42, 429, 7436, 218348];
        for (n, e) in (1..).zip(expect) {
            assert_eq!(n_asm(n).unwrap(), BigInt::from(e));
            let total: BigInt = (1..=n).map(|l| n_asm_refined(n, l).unwrap()).sum();
            assert_eq!(total, BigInt::from(e));
        }
        assert_eq!(n_asm_refined(3, 1).unwrap(), BigInt::from(2));
        assert!(n_asm_refined(3, 4).is_err());
    }

    #[test]
    fn vsasm_counts() {
        assert_eq!(n_vsasm(1).unwrap(), BigInt::one());
        assert_eq!(n_vsasm(3).unwrap(), BigInt::one());
        assert_eq!(n_vsasm(5).unwrap(), BigInt::from(3));
        assert_eq!(n_vsasm(7).unwrap(), BigInt::from(26));
        let refined: Vec<BigInt> = (1..=5).map(|l| n_vsasm_refined(5, l).unwrap()).collect();
        assert_eq!(refined, [0, 1, 1, 1, 0].map(BigInt::from).to_vec());
        assert!(n_vsasm(4).is_err());
        assert!(n_vsasm_refined(5, 6).is_err());
    }

    #[test]
    fn refined_vsasm_sums_and_is_nonnegative() {
        for size in [3, 5, 7, 9] {
            let parts: Vec<BigInt> = (1..=size).map(|l| n_vsasm_refined(size, l).unwrap()).collect();
            assert!(parts.iter().all(|p| *p >= BigInt::zero()));
            assert!(parts[0].is_zero() && parts[size as usize - 1].is_zero());
            assert_eq!(parts.iter().sum::<BigInt>(), n_vsasm(size).unwrap());
        }
    }

    #[test]
    fn generating_function_examples() {
        assert_eq!(vsasm_generating(5, &int_rational(1)).unwrap(), int_rational(1));
        assert_eq!(vsasm_generating(5, &int_rational(2)).unwrap(), rational(14, 3));
        assert_eq!(vsasm_generating(7, &int_rational(0)).unwrap(), int_rational(0));
    }

    #[test]
    fn raz_strog_examples() {
        assert!(raz_strog_check(5, &rational(1, 2)).unwrap());
        assert!(raz_strog_check(5, &int_rational(3)).unwrap());
        assert!(raz_strog_check(7, &int_rational(2)).unwrap());
        assert!(raz_strog_check(3, &int_rational(5)).unwrap());
        assert!(raz_strog_check(5, &int_rational(-1)).is_err());
    }

    #[test]
    fn escape_examples() {
        for size in [3i64, 5, 7] {
            for k in 1..5 {
                assert_eq!(vsasm_escape(size, k, size), BigInt::one());
            }
            for ell in 1..=size {
                assert_eq!(vsasm_escape(ell, 1, size), BigInt::one());
            }
            assert_eq!(vsasm_escape(size - 1, 3, size), BigInt::from(3));
        }
    }
}
